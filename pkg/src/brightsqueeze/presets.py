"""Scenario presets reproducing the published figures and tables.

Each preset is a plain configuration document in the same schema a user
config file uses (see :mod:`brightsqueeze.scenario`).
"""

import copy
import math

# passive suppression quoted for the simulated spectra / the measured stage
PASSIVE_SUPPRESSION_SIM_DB = 32.0
PASSIVE_SUPPRESSION_STAGE_DB = 35.0

EFFECTIVE_SQUEEZING_DB = 8.6
SOURCE_SQUEEZING_DB = 10.5

TABLE1_LOSS_PCT = {
    "OPO escape efficiency": 3.0,
    "Efficiency of interference": 2.8,
    "Quantum efficiency of photodiodes": 1.0,
    "Laser propagation efficiency": 3.2,
}
TABLE1_PHASE_MRAD = {
    "OPO": 2.0,
    "Relative phase between squeezed and frequency-shifted lights": 8.0,
    "Relative phase of squeezed and local fields": 11.0,
}
# published rows, dB relative to the out-of-loop shot noise at 50 kHz
TABLE2_PUBLISHED = {
    "Passive": {"Amplitude noise": -11.0, "Electronic noise": -21.0, "Total noise": -10.6},
    "Passive & active": {
        "Amplitude noise": -10.0,
        "Electronic noise": -14.0,
        "Residual in-loop noise": -30.0,
        "Total noise": -8.5,
    },
}

_LASER = {
    "wavelength_nm": 1550.0,
    "power_out_of_loop_mw": 1.0,
    "free_running_noise_dbhz": -125.0,
    "flicker_corner_hz": 0.0,
}
_PASSIVE = {"suppression_db": PASSIVE_SUPPRESSION_SIM_DB, "band_low_hz": 1e3, "band_high_hz": 1e6}
_LOOP = {
    "dc_gain_db": 80.0,
    "unity_gain_hz": 2e6,
    "delay_ns": 50.0,
    "reflectivity": 0.99,
    "inloop_power_mw": 10.0,
    "electronic_noise_dbhz": -168.0,
}
_GRID = {"f_min_hz": 1e3, "f_max_hz": 1e6, "points_per_decade": 100}
_SQUEEZER = {"effective_squeezing_db": EFFECTIVE_SQUEEZING_DB}
_BS = {"reflectivity": 0.99, "exact": False}

_PRESETS = {
    "fig1b": {
        "kind": "rsn-vs-power",
        "mode": "free-running",
        "laser": {"wavelength_nm": 1550.0},
        "sweep": {"power_min_mw": 0.01, "power_max_mw": 1000.0, "points": 61},
        "passive": dict(_PASSIVE),
        "description": "Relative shot noise versus laser power, with the 0.1 mW / 10 mW markers",
    },
    "fig2a": {
        "kind": "schemes",
        "laser": dict(_LASER),
        "passive": dict(_PASSIVE),
        "loop": dict(_LOOP),
        "squeezer": {"effective_squeezing_db": SOURCE_SQUEEZING_DB},
        "beam_splitter": dict(_BS),
        "grid": dict(_GRID),
        "schemes": ["free-running", "active-only", "passive-only", "passive+active", "theoretical-limit"],
        "description": "Out-of-loop technical noise, traces I-V",
    },
    "fig2b": {
        "kind": "power-sweep",
        "laser": dict(_LASER),
        "passive": dict(_PASSIVE),
        "loop": dict(_LOOP),
        "squeezer": dict(_SQUEEZER),
        "beam_splitter": dict(_BS),
        "evaluation_frequency_hz": 1e6,
        "sweep": {"power_min_mw": 0.01, "power_max_mw": 100.0, "points": 50},
        "schemes": ["passive-only", "active-only", "passive+active", "theoretical-limit"],
        "description": "Squeezing at 1 MHz versus output power for each stabilization scheme",
    },
    "fig4": {
        "kind": "spectra",
        "laser": dict(_LASER, power_out_of_loop_mw=0.1),
        "passive": dict(_PASSIVE),
        "squeezer": dict(_SQUEEZER),
        "beam_splitter": dict(_BS),
        "detector": {"electronic_noise_dbhz": -168.0},
        "grid": dict(_GRID),
        "evaluation_frequency_hz": 50e3,
        "description": "Bright squeezed light at 100 uW, passive stabilization only",
    },
    "fig5": {
        "kind": "spectra",
        "laser": dict(_LASER, power_out_of_loop_mw=1.0),
        "passive": dict(_PASSIVE),
        "loop": dict(_LOOP),
        "squeezer": dict(_SQUEEZER),
        "beam_splitter": dict(_BS),
        "detector": {"electronic_noise_dbhz": -168.0},
        "grid": dict(_GRID),
        "evaluation_frequency_hz": 50e3,
        "description": "Bright squeezed light at 1 mW, passive and active stabilization",
    },
    "table1": {
        "kind": "loss-phase",
        "mode": "free-running",
        "losses": {
            "items_pct": dict(TABLE1_LOSS_PCT),
            "composition": "multiplicative",
        },
        "phases": {
            "items_mrad": dict(TABLE1_PHASE_MRAD),
            "composition": "linear",
        },
        "squeezer": {
            "effective_squeezing_db": EFFECTIVE_SQUEEZING_DB,
            "opo": {
                "pump_ratio": math.sqrt(0.5),
                "cavity_hwhm_mhz": 50.0,
                "total_efficiency": 0.9,
                "phase_jitter_mrad": 21.0,
                "phase_jitter_unit": "mrad",
                "jitter_model": "rotation",
            },
        },
        "grid": {"f_min_hz": 1e3, "f_max_hz": 1e6, "points_per_decade": 10},
        "description": "Optical loss and phase fluctuation budget",
    },
    "table2": {
        "kind": "budget",
        "laser": dict(_LASER),
        "passive": dict(_PASSIVE),
        "loop": dict(_LOOP),
        "squeezer": dict(_SQUEEZER),
        "beam_splitter": dict(_BS),
        "detector": {"electronic_noise_dbhz": -168.0},
        "grid": dict(_GRID),
        "budget": {
            "reference_frequency_hz": 50e3,
            "columns": [
                {"label": "Passive", "scheme": "passive-only", "power_out_of_loop_mw": 0.1},
                {"label": "Passive & active", "scheme": "passive+active", "power_out_of_loop_mw": 1.0},
            ],
        },
        "description": "Technical noise budget at 50 kHz relative to the out-of-loop shot noise",
    },
}

PRESET_NAMES = tuple(_PRESETS)


def preset(name):
    """A fresh copy of preset ``name``'s configuration document."""
    try:
        return copy.deepcopy(_PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}") from None

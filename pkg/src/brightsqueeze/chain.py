"""Stabilization chain and beam-splitter combiner.

Free-running laser noise passes an optional passive stage (a broadband
suppression factor), an optional active loop, and is then combined with
squeezed vacuum on an unbalanced beam splitter.  Out-of-loop technical noise
after the loop is

    TN_ool = g TN_F / S + RSN_il + RSN_il (1 - r) V_v / S + RSN_il V_e / S,
    S(f)   = |1 + sqrt(r) G(f)|**2

and the bright-beam amplitude variance is ``V_b = V_v / r + TN_ool / RSN_ool``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, GridMismatchError
from .spectra import (
    FrequencyGrid,
    NoisePsd,
    db_to_lin,
    psd_add,
    psd_scale,
    rsn,
)
from .squeezer import QuadratureVariance, SqueezerParams, effective_variance

__all__ = [
    "LaserParams",
    "PassiveStageParams",
    "LoopParams",
    "CombinedResult",
    "ChainConfig",
    "ChainResult",
    "free_running_psd",
    "passive_gain",
    "passive_psd",
    "loop_gain",
    "loop_suppression",
    "closed_loop_terms",
    "closed_loop_psd",
    "combine_bs",
    "evaluate",
]


@dataclass(frozen=True)
class LaserParams:
    wavelength: float = 1550e-9  # m
    power_out_of_loop: float = 1e-3  # W
    free_running_level: float = -125.0  # dB/Hz; -inf means a noiseless laser
    flicker_corner: float = 0.0  # Hz, 0 disables

    def __post_init__(self):
        if not self.wavelength > 0:
            raise DomainError("wavelength must be > 0")
        if not self.power_out_of_loop > 0:
            raise DomainError("power_out_of_loop must be > 0")
        if math.isnan(self.free_running_level) or self.free_running_level == math.inf:
            raise DomainError("free_running_level must be finite (or -inf for none)")
        if not self.flicker_corner >= 0:
            raise DomainError("flicker_corner must be >= 0")


@dataclass(frozen=True)
class PassiveStageParams:
    """Broadband passive suppression ``g(f)``, flat between the band edges.

    Outside the band the suppression falls off at 20 dB per decade of
    distance from the nearest edge, never below 0 dB.  An optional low-frequency
    excess term (e.g. from a slightly detuned cavity) adds
    ``excess / (1 + (f / excess_corner)**2)`` to the output.
    """

    suppression_db: float
    band_low: float = 1e3  # Hz
    band_high: float = 1e6  # Hz
    excess_level: float | None = None  # dB/Hz
    excess_corner: float = 10e3  # Hz

    def __post_init__(self):
        if not self.suppression_db >= 0:
            raise DomainError("suppression_db must be >= 0")
        if not 0 < self.band_low < self.band_high:
            raise DomainError("need 0 < band_low < band_high")
        if not self.excess_corner > 0:
            raise DomainError("excess_corner must be > 0")


@dataclass(frozen=True)
class LoopParams:
    """Active intensity-stabilization loop.

    The controller is a DC-clamped integrator: a single real pole placed so the
    gain is ``G0`` at DC and crosses unity at ``unity_gain_freq``, followed by a
    pure delay.  ``dc_gain_db = -inf`` opens the loop.
    """

    dc_gain_db: float = 80.0
    unity_gain_freq: float = 2e6  # Hz
    delay: float = 50e-9  # s
    reflectivity: float = 0.99  # fraction of power sent to the in-loop detector
    inloop_power: float = 10e-3  # W detected in loop
    electronic_noise_level: float = -168.0  # dB/Hz, in-loop detector

    def __post_init__(self):
        if math.isnan(self.dc_gain_db) or self.dc_gain_db == math.inf:
            raise DomainError("dc_gain_db must be finite (or -inf for an open loop)")
        if not 0 < self.reflectivity <= 1:
            raise DomainError("reflectivity must lie in (0, 1]")
        if not self.unity_gain_freq > 0:
            raise DomainError("unity_gain_freq must be > 0")
        if not self.delay >= 0:
            raise DomainError("delay must be >= 0")
        if not self.inloop_power > 0:
            raise DomainError("inloop_power must be > 0")

    @property
    def dc_gain(self) -> float:
        return 10.0 ** (self.dc_gain_db / 20.0)


@dataclass(frozen=True, eq=False)
class CombinedResult:
    """Amplitude-quadrature variance of the bright beam (vacuum = 1)."""

    grid: FrequencyGrid
    variance: np.ndarray
    output_power: float | None = None

    def __post_init__(self):
        v = np.array(self.variance, dtype=float)
        if v.shape != (len(self.grid),):
            raise GridMismatchError("variance does not match grid")
        if np.any(~(v > 0)):
            raise DomainError("variance must be > 0")
        v.setflags(write=False)
        object.__setattr__(self, "variance", v)

    @property
    def squeezing_db(self) -> np.ndarray:
        """Noise reduction below the shot-noise limit (positive = squeezed)."""
        return -10.0 * np.log10(self.variance)


def free_running_psd(laser: LaserParams, grid: FrequencyGrid) -> NoisePsd:
    f = grid.points
    level = db_to_lin(laser.free_running_level)
    shape = 1.0 + laser.flicker_corner / f
    return NoisePsd(grid, level * shape, "free-running")


def passive_gain(stage: PassiveStageParams, f) -> np.ndarray:
    """Linear power suppression factor g(f) <= 1."""
    f = np.asarray(f, dtype=float)
    dist = np.maximum(np.log10(stage.band_low / f), 0.0) + np.maximum(
        np.log10(f / stage.band_high), 0.0
    )
    supp = np.maximum(stage.suppression_db - 20.0 * dist, 0.0)
    return 10.0 ** (-supp / 10.0)


def passive_psd(tn_f: NoisePsd, stage: PassiveStageParams) -> NoisePsd:
    out = tn_f.values * passive_gain(stage, tn_f.frequencies)
    if stage.excess_level is not None:
        f = tn_f.frequencies
        out = out + db_to_lin(stage.excess_level) / (1.0 + (f / stage.excess_corner) ** 2)
    return NoisePsd(tn_f.grid, out, "passive")


def loop_gain(loop: LoopParams, f):
    """Complex open-loop controller gain G(f), delay included.

    ``G0 / (1 + i f G0 / f_ugf) * exp(-2 pi i f delay)``.  Its magnitude follows
    ``min(G0, f_ugf / f)`` except within a factor sqrt(2) of the corner at
    ``f_ugf / G0``.
    """
    f = np.asarray(f, dtype=float)
    if np.any(~(f > 0)):
        raise DomainError("loop gain is defined for f > 0")
    g0 = loop.dc_gain
    g = g0 / (1.0 + 1j * f * g0 / loop.unity_gain_freq)
    g = g * np.exp(-2j * np.pi * f * loop.delay)
    return complex(g) if g.ndim == 0 else g


def loop_suppression(loop: LoopParams, f):
    """Closed-loop noise suppression ``S(f) = |1 + sqrt(r) G(f)|**2`` (>= 0)."""
    return np.abs(1.0 + math.sqrt(loop.reflectivity) * loop_gain(loop, f)) ** 2


def closed_loop_terms(
    tn_passive: NoisePsd,
    loop: LoopParams,
    v_squeezed: QuadratureVariance,
    laser: LaserParams,
) -> dict[str, NoisePsd]:
    """The four out-of-loop contributions of the active loop, keyed by role.

    ``residual``: suppressed input technical noise; ``inloop_shot``: in-loop
    shot noise imprinted on the output (not suppressed); ``dark_port``:
    squeezed-vacuum noise reaching the in-loop detector; ``electronic``:
    in-loop detector electronic noise.
    """
    if v_squeezed.grid != tn_passive.grid:
        raise GridMismatchError("squeezer and technical-noise grids differ")
    grid = tn_passive.grid
    s = loop_suppression(loop, grid.points)
    rsn_il = rsn(loop.inloop_power, laser.wavelength)
    v_e = db_to_lin(loop.electronic_noise_level) / rsn_il
    r = loop.reflectivity
    return {
        "residual": psd_scale(tn_passive, 1.0 / s, "residual in-loop"),
        "inloop_shot": NoisePsd.flat(grid, rsn_il, "in-loop shot noise"),
        "dark_port": NoisePsd(grid, rsn_il * (1.0 - r) * v_squeezed.squeezed / s, "dark-port"),
        "electronic": NoisePsd(grid, rsn_il * v_e / s, "in-loop electronic"),
    }


def closed_loop_psd(
    tn_passive: NoisePsd,
    loop: LoopParams,
    v_squeezed: QuadratureVariance,
    laser: LaserParams,
) -> NoisePsd:
    """Out-of-loop technical noise with the active loop closed."""
    terms = closed_loop_terms(tn_passive, loop, v_squeezed, laser)
    total = terms["residual"]
    for key in ("inloop_shot", "dark_port", "electronic"):
        total = psd_add(total, terms[key])
    return total.relabel("out-of-loop")


def combine_bs(
    v_v: QuadratureVariance,
    r,
    tn_ool: NoisePsd,
    rsn_ool,
    exact=False,
    output_power=None,
) -> CombinedResult:
    """Amplitude variance of squeezed vacuum mixed with the stabilized beam.

    The default form is ``V_v / r + TN_ool / RSN_ool``.  With ``exact=True``
    the quantum part is the lossless beam-splitter mixture
    ``r V_v + (1 - r)`` instead.
    """
    if not 0 < r <= 1:
        raise DomainError("reflectivity must lie in (0, 1]")
    rsn_ool = np.asarray(rsn_ool, dtype=float)
    if np.any(~(rsn_ool > 0)):
        raise DomainError("rsn_ool must be > 0")
    if v_v.grid != tn_ool.grid:
        raise GridMismatchError("squeezer and technical-noise grids differ")
    quantum = r * v_v.squeezed + (1.0 - r) if exact else v_v.squeezed / r
    return CombinedResult(tn_ool.grid, quantum + tn_ool.values / rsn_ool, output_power)


@dataclass(frozen=True)
class ChainConfig:
    """Everything needed to evaluate the chain on a grid.

    Squeezing at the combiner is taken from ``squeezer`` when given, else from
    ``squeezing_db`` (flat, pure state).  ``detector_noise`` is the out-of-loop
    detector's electronic noise floor (dB/Hz); when set it is added to the
    out-of-loop technical noise.
    """

    laser: LaserParams = field(default_factory=LaserParams)
    passive: PassiveStageParams | None = None
    loop: LoopParams | None = None
    squeezing_db: float = 8.6
    squeezer: SqueezerParams | None = None
    bs_reflectivity: float = 0.99
    exact_bs: bool = False
    detector_noise: float | None = None

    def __post_init__(self):
        if not 0 < self.bs_reflectivity <= 1:
            raise DomainError("bs_reflectivity must lie in (0, 1]")
        if not math.isfinite(self.squeezing_db):
            raise DomainError("squeezing_db must be finite")

    def with_power(self, power):
        return replace(self, laser=replace(self.laser, power_out_of_loop=float(power)))

    def squeezed_vacuum(self, grid: FrequencyGrid) -> QuadratureVariance:
        if self.squeezer is not None:
            return effective_variance(self.squeezer, grid)
        return QuadratureVariance.from_db(grid, self.squeezing_db)


@dataclass(frozen=True, eq=False)
class ChainResult:
    grid: FrequencyGrid
    free_running: NoisePsd
    passive: NoisePsd | None
    loop_terms: dict | None
    technical: NoisePsd  # laser technical noise after all stages
    detector: NoisePsd | None
    tn_ool: NoisePsd  # technical + detector electronic noise
    v_v: QuadratureVariance
    rsn_ool: float
    combined: CombinedResult


def evaluate(config: ChainConfig, grid: FrequencyGrid) -> ChainResult:
    laser = config.laser
    v_v = config.squeezed_vacuum(grid)
    tn_f = free_running_psd(laser, grid)
    tn = tn_f
    tn_p = None
    terms = None
    if config.passive is not None:
        tn_p = passive_psd(tn_f, config.passive)
        tn = tn_p
    if config.loop is not None:
        terms = closed_loop_terms(tn, config.loop, v_v, laser)
        tn = closed_loop_psd(tn, config.loop, v_v, laser)
    detector = None
    tn_ool = tn
    if config.detector_noise is not None:
        detector = NoisePsd.from_db(grid, config.detector_noise, "detector electronic")
        tn_ool = psd_add(tn, detector, "out-of-loop total")
    rsn_ool = rsn(laser.power_out_of_loop, laser.wavelength)
    combined = combine_bs(
        v_v,
        config.bs_reflectivity,
        tn_ool,
        rsn_ool,
        exact=config.exact_bs,
        output_power=laser.power_out_of_loop,
    )
    return ChainResult(grid, tn_f, tn_p, terms, tn, detector, tn_ool, v_v, rsn_ool, combined)

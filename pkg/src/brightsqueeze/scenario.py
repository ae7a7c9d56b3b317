"""Scenario configuration, validation and evaluation.

A scenario is a nested key/value document (YAML on disk).  Units are part of
every key name.  ``preset: <name>`` loads a built-in document first and the
remaining keys override it.  Sections ``passive``, ``loop`` and ``detector``
are optional: leaving them out (or setting them to ``null``) removes that
stage.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from . import presets
from .budget import budget_report, loss_budget, phase_budget
from .chain import ChainConfig, LaserParams, LoopParams, PassiveStageParams, evaluate
from .errors import ConfigError, DomainError
from .optimizer import SCHEMES, default_powers, rsn_vs_power, scheme_config, sweep_power
from .spectra import FrequencyGrid, lin_to_db, rsn
from .squeezer import SqueezerParams, effective_variance, jitter_rms_rad

__all__ = [
    "KINDS",
    "SCHEMA",
    "Trace",
    "TraceSet",
    "ScenarioConfig",
    "config_from_dict",
    "load_config",
    "resolve_document",
    "run_scenario",
    "schema_help",
]

KINDS = ("spectra", "schemes", "power-sweep", "rsn-vs-power", "budget", "loss-phase")
MODES = ("stabilized", "free-running")
TRACE_SCHEMES = ("free-running",) + SCHEMES

# unit tags used in trace headers
DBHZ = "dB/Hz"
DBSNL = "dB rel SNL"

_REQUIRED = object()


def _pos(x):
    return x > 0


def _nonneg(x):
    return x >= 0


def _unit_interval(x):
    return 0 < x <= 1


def _finite(x):
    return math.isfinite(x)


# section -> key -> (default, type, check, description)
SCHEMA = {
    "laser": {
        "wavelength_nm": (1550.0, float, _pos, "laser wavelength"),
        "power_out_of_loop_mw": (1.0, float, _pos, "out-of-loop (bright beam) power"),
        "free_running_noise_dbhz": (-125.0, float, lambda x: x < math.inf, "free-running RIN floor"),
        "flicker_corner_hz": (0.0, float, _nonneg, "1/f corner of the free-running noise, 0 disables"),
    },
    "passive": {
        "suppression_db": (_REQUIRED, float, _nonneg, "in-band passive suppression"),
        "band_low_hz": (1e3, float, _pos, "lower band edge"),
        "band_high_hz": (1e6, float, _pos, "upper band edge"),
        "excess_noise_dbhz": (None, float, _finite, "optional low-frequency excess noise level"),
        "excess_corner_hz": (10e3, float, _pos, "corner of the excess noise term"),
    },
    "loop": {
        "dc_gain_db": (80.0, float, lambda x: x < math.inf, "controller DC gain (-inf opens the loop)"),
        "unity_gain_hz": (2e6, float, _pos, "unity-gain frequency"),
        "delay_ns": (50.0, float, _nonneg, "loop delay"),
        "reflectivity": (0.99, float, _unit_interval, "fraction of power sent to the in-loop detector"),
        "inloop_power_mw": (10.0, float, _pos, "detected in-loop power"),
        "electronic_noise_dbhz": (-168.0, float, _finite, "in-loop detector electronic noise"),
    },
    "squeezer": {
        "effective_squeezing_db": (8.6, float, _finite, "squeezing at the combiner (used when no opo block)"),
        "opo": (None, dict, None, "optional OPO model block, overrides effective_squeezing_db"),
    },
    "squeezer.opo": {
        "pump_ratio": (math.sqrt(0.5), float, lambda x: 0 <= x < 1, "sqrt(pump / threshold)"),
        "cavity_hwhm_mhz": (50.0, float, _pos, "OPO cavity half linewidth"),
        "total_efficiency": (0.9, float, _unit_interval, "total escape/propagation/detection efficiency"),
        "phase_jitter_mrad": (21.0, float, _nonneg, "residual phase fluctuation"),
        "phase_jitter_unit": ("mrad", str, lambda s: s in ("mrad", "mrad2"), "mrad (rms) or mrad2 (variance)"),
        "jitter_model": ("rotation", str, lambda s: s in ("rotation", "gaussian"), "rotation or gaussian"),
    },
    "beam_splitter": {
        "reflectivity": (0.99, float, _unit_interval, "power reflectivity r of the combiner"),
        "exact": (False, bool, None, "lossless beam-splitter mixing instead of V_v / r"),
    },
    "detector": {
        "electronic_noise_dbhz": (None, float, _finite, "out-of-loop detector electronic noise"),
    },
    "grid": {
        "f_min_hz": (1e3, float, _pos, "lowest analysis frequency"),
        "f_max_hz": (1e6, float, _pos, "highest analysis frequency"),
        "points_per_decade": (100, int, lambda n: n >= 1, "log grid density"),
    },
    "sweep": {
        "power_min_mw": (0.01, float, _pos, "lowest output power"),
        "power_max_mw": (100.0, float, _pos, "highest output power"),
        "points": (50, int, lambda n: n >= 1, "number of log-spaced powers"),
    },
    "budget": {
        "reference_frequency_hz": (50e3, float, _pos, "frequency of the noise budget"),
        "columns": (None, list, None, "list of {label, scheme, power_out_of_loop_mw}"),
    },
    "losses": {
        "items_pct": ({}, dict, None, "label -> loss in %"),
        "composition": ("multiplicative", str, lambda s: s in ("multiplicative", "linear"), "multiplicative or linear"),
    },
    "phases": {
        "items_mrad": ({}, dict, None, "label -> phase fluctuation in mrad"),
        "composition": ("linear", str, lambda s: s in ("linear", "quadrature"), "linear or quadrature"),
    },
}

TOP_LEVEL = {
    "preset": (None, str, None, "built-in preset to start from"),
    "kind": ("spectra", str, lambda s: s in KINDS, "|".join(KINDS)),
    "mode": ("stabilized", str, lambda s: s in MODES, "stabilized or free-running"),
    "evaluation_frequency_hz": (1e6, float, _pos, "frequency for sweeps and headline numbers"),
    "schemes": (None, list, None, "schemes for kinds schemes/power-sweep: " + ", ".join(TRACE_SCHEMES)),
    "description": ("", str, None, "free text"),
}
OPTIONAL_SECTIONS = ("passive", "loop", "detector")


def schema_help() -> str:
    lines = ["top level:"]
    for k, (d, _, _, desc) in TOP_LEVEL.items():
        lines.append(f"  {k:<26} {desc} (default {d!r})")
    for sec, keys in SCHEMA.items():
        opt = " (optional stage; omit to disable)" if sec in OPTIONAL_SECTIONS else ""
        lines.append(f"{sec}:{opt}")
        for k, (d, _, _, desc) in keys.items():
            dflt = "required" if d is _REQUIRED else f"default {d!r}"
            lines.append(f"  {k:<26} {desc} ({dflt})")
    return "\n".join(lines)


def _deep_merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _coerce(value, typ, path, problems):
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            problems.append((path, f"expected a number, got {value!r}"))
            return None
        try:
            return float(value)
        except ValueError:
            problems.append((path, f"expected a number, got {value!r}"))
            return None
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            problems.append((path, f"expected an integer, got {value!r}"))
            return None
        return int(value)
    if typ is bool:
        if not isinstance(value, bool):
            problems.append((path, f"expected true/false, got {value!r}"))
            return None
        return value
    if not isinstance(value, typ):
        problems.append((path, f"expected {typ.__name__}, got {value!r}"))
        return None
    return value


def _resolve_section(name, given, problems):
    keys = SCHEMA[name]
    if given is None:
        given = {}
    if not isinstance(given, dict):
        problems.append((name, "expected a mapping"))
        return None
    out = {}
    for key in given:
        if key not in keys:
            problems.append((f"{name}.{key}", "unknown key"))
    for key, (default, typ, check, _) in keys.items():
        path = f"{name}.{key}"
        if key not in given or given[key] is None:
            if default is _REQUIRED:
                problems.append((path, "required"))
                out[key] = None
            else:
                out[key] = copy.deepcopy(default)
            continue
        val = _coerce(given[key], typ, path, problems)
        if val is not None and check is not None and not check(val):
            problems.append((path, f"value {val!r} out of range ({keys[key][3]})"))
        out[key] = val
    return out


def resolve_document(doc) -> dict:
    """Fill defaults, apply a preset and check every field; raises :class:`ConfigError`."""
    problems = []
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError([("<root>", "configuration must be a mapping")])
    name = doc.get("preset")
    if name is not None:
        try:
            doc = _deep_merge(presets.preset(name), {k: v for k, v in doc.items()})
        except KeyError as exc:
            raise ConfigError([("preset", str(exc.args[0]))]) from None

    known = set(TOP_LEVEL) | set(SCHEMA) - {"squeezer.opo"}
    for key in doc:
        if key not in known:
            problems.append((key, "unknown key"))

    out = {}
    for key, (default, typ, check, desc) in TOP_LEVEL.items():
        if doc.get(key) is None:
            out[key] = copy.deepcopy(default)
            continue
        val = _coerce(doc[key], typ, key, problems)
        if val is not None and check is not None and not check(val):
            problems.append((key, f"value {val!r} not allowed ({desc})"))
        out[key] = val

    for sec in SCHEMA:
        if sec == "squeezer.opo":
            continue
        if sec in OPTIONAL_SECTIONS and doc.get(sec) is None:
            out[sec] = None
            continue
        out[sec] = _resolve_section(sec, doc.get(sec), problems)

    sq = out.get("squeezer")
    if sq and sq.get("opo") is not None:
        sq["opo"] = _resolve_section("squeezer.opo", sq["opo"], problems)
    if out.get("detector") is not None and out["detector"]["electronic_noise_dbhz"] is None:
        out["detector"] = None

    # cross-field invariants
    p = out.get("passive")
    if p and p["band_low_hz"] is not None and p["band_high_hz"] is not None:
        if not p["band_low_hz"] < p["band_high_hz"]:
            problems.append(("passive.band_high_hz", "must exceed band_low_hz"))
    g = out["grid"]
    if g and g["f_min_hz"] is not None and g["f_max_hz"] is not None and not g["f_min_hz"] < g["f_max_hz"]:
        problems.append(("grid.f_max_hz", "must exceed f_min_hz"))
    s = out["sweep"]
    if s and s["power_min_mw"] is not None and s["power_max_mw"] is not None:
        if not s["power_min_mw"] <= s["power_max_mw"]:
            problems.append(("sweep.power_max_mw", "must be >= power_min_mw"))
    if out["schemes"] is not None:
        for i, sch in enumerate(out["schemes"]):
            if sch not in TRACE_SCHEMES:
                problems.append((f"schemes[{i}]", f"unknown scheme {sch!r}"))
    cols = out["budget"]["columns"] if out.get("budget") else None
    if cols is not None:
        for i, col in enumerate(cols):
            if not isinstance(col, dict) or col.get("scheme") not in SCHEMES:
                problems.append((f"budget.columns[{i}]", "needs a scheme from " + ", ".join(SCHEMES)))
            elif "power_out_of_loop_mw" in col and not (
                isinstance(col["power_out_of_loop_mw"], (int, float)) and col["power_out_of_loop_mw"] > 0
            ):
                problems.append((f"budget.columns[{i}].power_out_of_loop_mw", "must be > 0"))
    for sec, key in (("losses", "items_pct"), ("phases", "items_mrad")):
        items = out[sec][key] if out.get(sec) else {}
        for label, v in (items or {}).items():
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                problems.append((f"{sec}.{key}.{label}", "expected a number"))
            elif sec == "losses" and not 0 <= v < 100:
                problems.append((f"{sec}.{key}.{label}", "loss must lie in [0, 100)"))
            elif v < 0:
                problems.append((f"{sec}.{key}.{label}", "must be >= 0"))

    needs_stage = out["kind"] in ("spectra", "schemes", "power-sweep", "budget")
    if needs_stage and out["mode"] != "free-running" and out["kind"] in ("spectra", "budget"):
        if out.get("passive") is None and out.get("loop") is None:
            problems.append(("passive/loop", "no stabilization stage given; add one or set mode: free-running"))
    if out["kind"] in ("schemes", "power-sweep"):
        schemes = out["schemes"] or list(SCHEMES)
        for sch in schemes:
            if sch in ("passive-only", "passive+active", "theoretical-limit") and out.get("passive") is None:
                problems.append(("passive", f"scheme {sch!r} needs a passive section"))
                break
        for sch in schemes:
            if sch in ("active-only", "passive+active", "theoretical-limit") and out.get("loop") is None:
                problems.append(("loop", f"scheme {sch!r} needs a loop section"))
                break
    if problems:
        raise ConfigError(problems)
    return out


def _chain_from(doc) -> ChainConfig:
    la = doc["laser"]
    laser = LaserParams(
        wavelength=la["wavelength_nm"] * 1e-9,
        power_out_of_loop=la["power_out_of_loop_mw"] * 1e-3,
        free_running_level=la["free_running_noise_dbhz"],
        flicker_corner=la["flicker_corner_hz"],
    )
    passive = None
    if doc.get("passive") is not None:
        p = doc["passive"]
        passive = PassiveStageParams(
            suppression_db=p["suppression_db"],
            band_low=p["band_low_hz"],
            band_high=p["band_high_hz"],
            excess_level=p["excess_noise_dbhz"],
            excess_corner=p["excess_corner_hz"],
        )
    loop = None
    if doc.get("loop") is not None:
        lp = doc["loop"]
        loop = LoopParams(
            dc_gain_db=lp["dc_gain_db"],
            unity_gain_freq=lp["unity_gain_hz"],
            delay=lp["delay_ns"] * 1e-9,
            reflectivity=lp["reflectivity"],
            inloop_power=lp["inloop_power_mw"] * 1e-3,
            electronic_noise_level=lp["electronic_noise_dbhz"],
        )
    sq = doc["squeezer"]
    squeezer = None
    if sq.get("opo") is not None:
        o = sq["opo"]
        squeezer = SqueezerParams(
            pump_ratio=o["pump_ratio"],
            cavity_hwhm=o["cavity_hwhm_mhz"] * 1e6,
            total_efficiency=o["total_efficiency"],
            phase_jitter_rms=jitter_rms_rad(o["phase_jitter_mrad"], o["phase_jitter_unit"]),
            jitter_model=o["jitter_model"],
        )
    det = doc.get("detector")
    return ChainConfig(
        laser=laser,
        passive=passive,
        loop=loop,
        squeezing_db=sq["effective_squeezing_db"],
        squeezer=squeezer,
        bs_reflectivity=doc["beam_splitter"]["reflectivity"],
        exact_bs=doc["beam_splitter"]["exact"],
        detector_noise=None if det is None else det["electronic_noise_dbhz"],
    )


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    name: str
    kind: str
    chain: ChainConfig
    grid: FrequencyGrid
    eval_freq: float
    powers: np.ndarray
    schemes: tuple
    document: dict  # fully resolved, for provenance

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.document, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()


def config_from_dict(doc, name=None) -> ScenarioConfig:
    resolved = resolve_document(doc)
    try:
        chain = _chain_from(resolved)
    except DomainError as exc:
        raise ConfigError([("<chain>", str(exc))]) from None
    g = resolved["grid"]
    grid = FrequencyGrid.log(g["f_min_hz"], g["f_max_hz"], g["points_per_decade"])
    s = resolved["sweep"]
    powers = default_powers(s["points"], s["power_min_mw"] * 1e-3, s["power_max_mw"] * 1e-3)
    default_schemes = TRACE_SCHEMES if resolved["kind"] == "schemes" else SCHEMES
    schemes = tuple(resolved["schemes"] or default_schemes)
    label = name or resolved.get("preset") or "scenario"
    return ScenarioConfig(label, resolved["kind"], chain, grid,
                          resolved["evaluation_frequency_hz"], powers, schemes, resolved)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([(str(path), f"not valid YAML: {exc}")]) from None
    return config_from_dict(doc, name=path.stem)


@dataclass(frozen=True, eq=False)
class Trace:
    key: str
    label: str
    unit: str
    values: np.ndarray

    @property
    def header(self) -> str:
        return f"{self.key} [{self.unit}]"


@dataclass(eq=False)
class TraceSet:
    """Named traces on one shared x axis, plus optional tables and scalar notes."""

    name: str
    x_name: str  # "frequency_hz" or "power_w"
    x: np.ndarray
    traces: list
    tables: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    config_hash: str = ""

    def __post_init__(self):
        n = len(self.x)
        for t in self.traces:
            if len(t.values) != n:
                raise DomainError(f"trace {t.key} has {len(t.values)} points, axis has {n}")

    def __getitem__(self, key) -> Trace:
        for t in self.traces:
            if t.key == key:
                return t
        raise KeyError(key)

    def keys(self):
        return [t.key for t in self.traces]


def _db(values):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(values, dtype=float))


SCHEME_TRACE = {
    "free-running": ("I", "I free-running"),
    "active-only": ("II", "II active only"),
    "passive-only": ("III", "III passive only"),
    "passive+active": ("IV", "IV passive + active"),
    "theoretical-limit": ("V", "V passive + active, full in-loop power"),
}


def _scheme_chain(chain, scheme):
    if scheme == "free-running":
        return replace(chain, passive=None, loop=None)
    return scheme_config(chain, scheme)


def _run_schemes(cfg: ScenarioConfig, ts: TraceSet):
    for sch in cfg.schemes:
        res = evaluate(_scheme_chain(cfg.chain, sch), cfg.grid)
        key, label = SCHEME_TRACE[sch]
        ts.traces.append(Trace(key, label, DBHZ, _db(res.technical.values)))
    ts.notes["in-loop shot noise (dB/Hz)"] = float(
        lin_to_db(rsn(cfg.chain.loop.inloop_power, cfg.chain.laser.wavelength))
    ) if cfg.chain.loop else None


def _run_spectra(cfg: ScenarioConfig, ts: TraceSet):
    res = evaluate(cfg.chain, cfg.grid)
    chain = cfg.chain
    snl = np.full(len(cfg.grid), lin_to_db(res.rsn_ool))
    ts.traces.append(Trace("a", "a free-running technical noise", DBHZ, _db(res.free_running.values)))
    ts.traces.append(Trace("c", "c shot-noise limit", DBHZ, snl))
    r = chain.bs_reflectivity
    vq = r * res.v_v.squeezed + (1 - r) if chain.exact_bs else res.v_v.squeezed / r
    ts.traces.append(Trace("e", "e squeezed vacuum at the combiner", DBSNL, _db(vq)))
    if res.loop_terms is None:
        ts.traces.append(Trace("f", "f passively stabilized technical noise", DBHZ, _db(res.technical.values)))
        if res.detector is not None:
            ts.traces.append(Trace("g", "g detector electronic noise", DBHZ, _db(res.detector.values)))
        ts.traces.append(Trace("h", "h uncorrelated sum (bright squeezed light)", DBSNL, _db(res.combined.variance)))
    else:
        t = res.loop_terms
        resid = t["residual"].values + t["dark_port"].values + t["electronic"].values
        ts.traces.append(Trace("f", "f in-loop shot noise", DBHZ, _db(t["inloop_shot"].values)))
        if res.detector is not None:
            ts.traces.append(Trace("g", "g detector electronic noise", DBHZ, _db(res.detector.values)))
        ts.traces.append(Trace("h", "h residual in-loop technical noise", DBHZ, _db(resid)))
        ts.traces.append(Trace("i", "i uncorrelated sum (bright squeezed light)", DBSNL, _db(res.combined.variance)))
    ts.traces.append(Trace("tn_ool", "total out-of-loop technical noise", DBHZ, _db(res.tn_ool.values)))
    if cfg.grid.contains(cfg.eval_freq):
        single = evaluate(chain, FrequencyGrid.single(cfg.eval_freq))
        ts.notes["evaluation frequency (Hz)"] = cfg.eval_freq
        ts.notes["squeezing at evaluation frequency (dB)"] = float(single.combined.squeezing_db[0])
    sq = res.combined.squeezing_db
    ts.notes["max squeezing on grid (dB)"] = float(np.max(sq))
    ts.notes["min squeezing on grid (dB)"] = float(np.min(sq))


def _run_power_sweep(cfg: ScenarioConfig, ts: TraceSet):
    for sch in cfg.schemes:
        pts = sweep_power(_scheme_chain(cfg.chain, sch), cfg.powers, cfg.eval_freq)
        key = SCHEME_TRACE[sch][0] if sch == "free-running" else sch
        ts.traces.append(Trace(key, f"{sch} at {cfg.eval_freq:g} Hz", DBSNL,
                               np.array([-p.squeezing_db for p in pts])))


def _run_rsn(cfg: ScenarioConfig, ts: TraceSet):
    lam = cfg.chain.laser.wavelength
    rows = rsn_vs_power(cfg.powers, lam)
    ts.traces.append(Trace("rsn", "relative shot noise", DBHZ, np.array([v for _, v in rows])))
    markers = [("red star: RSN at 0.1 mW", 1e-4, lin_to_db(rsn(1e-4, lam))),
               ("yellow star: RSN at 10 mW", 1e-2, lin_to_db(rsn(1e-2, lam)))]
    if cfg.chain.passive is not None:
        res = evaluate(scheme_config(cfg.chain, "passive-only"), FrequencyGrid.single(cfg.eval_freq))
        markers.insert(1, ("blue star: passive technical noise at 0.1 mW", 1e-4,
                           float(lin_to_db(res.technical.values[0]))))
    ts.tables["markers"] = {
        "columns": ["marker", "power_w", "level_dbhz"],
        "rows": [[m, p, float(v)] for m, p, v in markers],
    }


def _run_budget(cfg: ScenarioConfig, ts: TraceSet):
    b = cfg.document["budget"]
    ref = b["reference_frequency_hz"]
    columns = b["columns"] or [{"label": "budget", "scheme": None}]
    budgets = []
    for col in columns:
        chain = cfg.chain
        if col.get("scheme"):
            chain = scheme_config(chain, col["scheme"])
        if "power_out_of_loop_mw" in col:
            chain = chain.with_power(col["power_out_of_loop_mw"] * 1e-3)
        budgets.append((col.get("label") or col.get("scheme"), budget_report(chain, cfg.grid, ref)))
    labels = []
    for _, nb in budgets:
        for lab, _ in nb.items:
            if lab not in labels:
                labels.append(lab)
    rows = []
    for lab in labels + ["Total noise"]:
        row = [lab]
        for _, nb in budgets:
            row.append(nb.as_dict().get(lab))
        rows.append(row)
    ts.tables["noise_budget"] = {
        "columns": ["source"] + [f"{name} (dB)" for name, _ in budgets],
        "rows": rows,
        "reference_frequency_hz": ref,
    }


def _run_loss_phase(cfg: ScenarioConfig, ts: TraceSet):
    doc = cfg.document
    lb = loss_budget(doc["losses"]["items_pct"].items(), doc["losses"]["composition"])
    pb = phase_budget(doc["phases"]["items_mrad"].items(), doc["phases"]["composition"])
    ts.tables["loss"] = {
        "columns": ["source", "loss_pct"],
        "rows": [[k, v] for k, v in lb.items] + [[f"Total ({lb.mode})", lb.total_pct]],
    }
    ts.tables["phase"] = {
        "columns": ["source", "phase_mrad"],
        "rows": [[k, v] for k, v in pb.items] + [[f"Total ({pb.mode})", pb.total_mrad]],
    }
    sq = cfg.chain.squeezer
    if sq is not None:
        low = FrequencyGrid.single(cfg.grid.f_min)
        v = effective_variance(sq, low)
        ts.notes["OPO squeezing after loss and jitter at low frequency (dB)"] = float(v.squeezing_db()[0])
    ts.notes["efficiency from loss budget"] = lb.efficiency


def run_scenario(cfg) -> TraceSet:
    """Evaluate a scenario (a :class:`ScenarioConfig`, a document dict or a preset name)."""
    if isinstance(cfg, str):
        cfg = config_from_dict({"preset": cfg})
    elif isinstance(cfg, dict):
        cfg = config_from_dict(cfg)
    power_axis = cfg.kind in ("power-sweep", "rsn-vs-power")
    ts = TraceSet(
        name=cfg.name,
        x_name="power_w" if power_axis else "frequency_hz",
        x=np.array(cfg.powers if power_axis else cfg.grid.points),
        traces=[],
        config=cfg.document,
        config_hash=cfg.config_hash,
    )
    runner = {
        "spectra": _run_spectra,
        "schemes": _run_schemes,
        "power-sweep": _run_power_sweep,
        "rsn-vs-power": _run_rsn,
        "budget": _run_budget,
        "loss-phase": _run_loss_phase,
    }[cfg.kind]
    runner(cfg, ts)
    if cfg.kind in ("budget", "loss-phase"):
        ts.x = np.array([])
    return ts

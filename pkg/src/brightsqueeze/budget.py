"""Loss, phase and technical-noise budgets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .chain import ChainConfig, evaluate
from .errors import DomainError
from .spectra import FrequencyGrid, incoherent_sum_db

__all__ = [
    "LossBudget",
    "PhaseBudget",
    "NoiseBudget",
    "compose_loss",
    "compose_phase",
    "technical_noise_total",
    "loss_budget",
    "phase_budget",
    "budget_report",
]


def compose_loss(items: Sequence[float], mode="multiplicative") -> float:
    """Total loss in % from individual losses in %.

    ``multiplicative`` chains the transmissions, ``1 - prod(1 - l_i)``;
    ``linear`` just adds the percentages.
    """
    for x in items:
        if not 0 <= x < 100:
            raise DomainError(f"loss item {x}% outside [0, 100)")
    if mode == "multiplicative":
        t = 1.0
        for x in items:
            t *= 1.0 - x / 100.0
        return 100.0 * (1.0 - t)
    if mode == "linear":
        return float(sum(items))
    raise DomainError(f"unknown loss composition {mode!r}")


def compose_phase(items: Sequence[float], mode="linear") -> float:
    """Total phase fluctuation in mrad, summed linearly or in quadrature."""
    if any(x < 0 for x in items):
        raise DomainError("phase items must be >= 0")
    if mode == "linear":
        return float(sum(items))
    if mode == "quadrature":
        return math.sqrt(sum(x * x for x in items))
    raise DomainError(f"unknown phase composition {mode!r}")


@dataclass(frozen=True)
class LossBudget:
    items: tuple  # (label, percent)
    total_pct: float
    mode: str = "multiplicative"

    @property
    def efficiency(self) -> float:
        return 1.0 - self.total_pct / 100.0


@dataclass(frozen=True)
class PhaseBudget:
    items: tuple  # (label, mrad)
    total_mrad: float
    mode: str = "linear"


@dataclass(frozen=True)
class NoiseBudget:
    """Rows in dB relative to the out-of-loop shot-noise level, plus their total."""

    items: tuple  # (label, dB)
    total_db: float
    reference_frequency: float | None = None

    def as_dict(self):
        return {label: level for label, level in self.items} | {"Total noise": self.total_db}


def loss_budget(items, mode="multiplicative") -> LossBudget:
    items = tuple((str(k), float(v)) for k, v in items)
    return LossBudget(items, compose_loss([v for _, v in items], mode), mode)


def phase_budget(items, mode="linear") -> PhaseBudget:
    items = tuple((str(k), float(v)) for k, v in items)
    return PhaseBudget(items, compose_phase([v for _, v in items], mode), mode)


def technical_noise_total(items) -> float:
    """Incoherent total of budget rows, given as dB values or (label, dB) pairs."""
    levels = [x[1] if isinstance(x, tuple) else x for x in items]
    if not levels:
        raise DomainError("technical noise budget has no contributions")
    return incoherent_sum_db(levels)


def budget_report(config: ChainConfig, grid: FrequencyGrid | None = None, ref_freq=50e3) -> NoiseBudget:
    """Technical-noise rows of a chain at ``ref_freq``, relative to the out-of-loop SNL.

    Rows: ``Amplitude noise`` (the stabilized laser noise, which with an active
    loop is the in-loop shot-noise floor), ``Electronic noise`` (out-of-loop
    detector, when configured) and, with an active loop, ``Residual in-loop
    noise`` (all loop-suppressed terms).  Zero contributions are dropped.
    """
    if grid is not None and not grid.contains(ref_freq):
        raise DomainError(f"reference frequency {ref_freq} Hz outside the analysis grid")
    res = evaluate(config, FrequencyGrid.single(ref_freq))
    ref = res.rsn_ool
    rows = []
    if res.loop_terms is None:
        rows.append(("Amplitude noise", res.technical.values[0]))
    else:
        t = res.loop_terms
        rows.append(("Amplitude noise", t["inloop_shot"].values[0]))
    if res.detector is not None:
        rows.append(("Electronic noise", res.detector.values[0]))
    if res.loop_terms is not None:
        t = res.loop_terms
        resid = t["residual"].values[0] + t["dark_port"].values[0] + t["electronic"].values[0]
        rows.append(("Residual in-loop noise", resid))
    items = tuple((label, 10.0 * math.log10(v / ref)) for label, v in rows if v > 0)
    return NoiseBudget(items, technical_noise_total(items), float(ref_freq))

"""Design-space helpers: squeezing versus output power and the inverse problems."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .chain import ChainConfig, evaluate
from .errors import DomainError, InfeasibleError
from .spectra import CONSTANTS, FrequencyGrid, db_to_lin, lin_to_db, rsn

__all__ = [
    "SCHEMES",
    "DesignPoint",
    "scheme_config",
    "sweep_power",
    "default_powers",
    "max_power_at_target",
    "rsn_vs_power",
    "required_inloop_power",
]

SCHEMES = ("passive-only", "active-only", "passive+active", "theoretical-limit")

# in-loop power available if every photon reflected to the loop detector were detected
LIMIT_INLOOP_POWER = 99e-3


@dataclass(frozen=True)
class DesignPoint:
    output_power: float  # W
    squeezing_db: float  # positive = below shot noise
    scheme: str


def scheme_config(base: ChainConfig, scheme: str, limit_inloop_power=LIMIT_INLOOP_POWER) -> ChainConfig:
    """Restrict ``base`` to the stages used by ``scheme``."""
    if scheme not in SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}")
    needs_passive = scheme != "active-only"
    needs_loop = scheme != "passive-only"
    if needs_passive and base.passive is None:
        raise DomainError(f"scheme {scheme!r} needs a passive stage")
    if needs_loop and base.loop is None:
        raise DomainError(f"scheme {scheme!r} needs an active loop")
    loop = base.loop if needs_loop else None
    if scheme == "theoretical-limit":
        loop = replace(loop, inloop_power=limit_inloop_power)
    return replace(base, passive=base.passive if needs_passive else None, loop=loop)


def default_powers(n=50, p_min=10e-6, p_max=100e-3) -> np.ndarray:
    return np.logspace(math.log10(p_min), math.log10(p_max), n)


def _operating_point(config: ChainConfig, eval_freq):
    """Quantum floor ``q`` and absolute technical noise (1/Hz) at one frequency."""
    res = evaluate(config, FrequencyGrid.single(eval_freq))
    v = res.v_v.squeezed[0]
    r = config.bs_reflectivity
    q = r * v + (1.0 - r) if config.exact_bs else v / r
    return q, float(res.tn_ool.values[0])


def sweep_power(
    config: ChainConfig,
    powers: Sequence[float] | None = None,
    eval_freq=1e6,
    scheme: str | None = None,
) -> list[DesignPoint]:
    """Squeezing at ``eval_freq`` for each out-of-loop power.

    The technical noise stays fixed in absolute terms (the loop sees a fixed
    in-loop power) while the out-of-loop shot noise scales as ``1 / P``.
    ``scheme=None`` evaluates ``config`` as given.
    """
    cfg = config if scheme is None else scheme_config(config, scheme)
    powers = default_powers() if powers is None else np.asarray(powers, dtype=float)
    if np.any(~(powers > 0)):
        raise DomainError("powers must be > 0")
    q, tn = _operating_point(cfg, eval_freq)
    v_b = q + tn / rsn(powers, cfg.laser.wavelength)
    sq = -lin_to_db(np.atleast_1d(v_b))
    label = scheme or "custom"
    return [DesignPoint(float(p), float(s), label) for p, s in zip(np.atleast_1d(powers), sq)]


def max_power_at_target(
    target_squeezing_db,
    config: ChainConfig,
    scheme: str | None = None,
    eval_freq=1e6,
) -> float:
    """Largest out-of-loop power (W) still reaching ``target_squeezing_db``.

    Inverts ``V_b = q + TN * P / (2 h nu)`` directly; the exact beam-splitter
    mode is solved by bracketing root search instead.  Returns ``inf`` when
    the chain has no technical noise at all.
    """
    cfg = config if scheme is None else scheme_config(config, scheme)
    target_var = db_to_lin(-float(target_squeezing_db))
    q, tn = _operating_point(cfg, eval_freq)
    if target_var <= q:
        raise InfeasibleError(
            f"{target_squeezing_db:.3f} dB unreachable: quantum floor alone gives "
            f"{-lin_to_db(q):.3f} dB"
        )
    if tn == 0:
        return math.inf
    two_h_nu = rsn(1.0, cfg.laser.wavelength)
    if not cfg.exact_bs:
        return (target_var - q) * two_h_nu / tn

    def excess(logp):
        p = math.exp(logp)
        return sweep_power(cfg, [p], eval_freq)[0].squeezing_db - target_squeezing_db

    lo, hi = math.log(1e-15), math.log(1e6)
    if excess(lo) < 0:
        raise InfeasibleError(f"{target_squeezing_db:.3f} dB unreachable even at 1 fW")
    if excess(hi) > 0:
        return math.inf  # technical noise too small to matter below 1 MW
    return math.exp(brentq(excess, lo, hi, xtol=1e-14, rtol=1e-13))


def rsn_vs_power(powers, wavelength=1550e-9) -> list[tuple[float, float]]:
    """Relative shot noise in dB/Hz for each power."""
    p = np.atleast_1d(np.asarray(powers, dtype=float))
    levels = lin_to_db(np.atleast_1d(rsn(p, wavelength)))
    return [(float(a), float(b)) for a, b in zip(p, np.atleast_1d(levels))]


def required_inloop_power(target_dbhz, wavelength=1550e-9) -> float:
    """Detected power (W) whose shot noise equals ``target_dbhz``."""
    if not target_dbhz < 0:
        raise DomainError("target floor must be < 0 dB/Hz")
    nu = CONSTANTS.speed_of_light / wavelength
    return 2.0 * CONSTANTS.planck_constant * nu / db_to_lin(target_dbhz)

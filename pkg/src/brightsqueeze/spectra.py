"""Spectral algebra: frequency grids, dB conversion, shot-noise references.

All power spectral densities are one-sided relative-intensity PSDs in 1/Hz,
held in linear units.  Decibels only appear at the edges (configuration and
output), via :func:`db_to_lin` and :func:`lin_to_db`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import constants

from .errors import DomainError, GridMismatchError

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "FrequencyGrid",
    "NoisePsd",
    "rsn",
    "db_to_lin",
    "lin_to_db",
    "incoherent_sum_db",
    "psd_add",
    "psd_scale",
]


@dataclass(frozen=True)
class PhysicalConstants:
    planck_constant: float = constants.h  # J s
    speed_of_light: float = constants.c  # m/s


CONSTANTS = PhysicalConstants()


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Strictly increasing, strictly positive analysis frequencies in Hz."""

    points: np.ndarray

    def __post_init__(self):
        pts = _frozen(np.atleast_1d(self.points))
        if pts.ndim != 1 or pts.size == 0:
            raise DomainError("frequency grid must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(pts)) or np.any(pts <= 0):
            raise DomainError("grid frequencies must be finite and > 0")
        if np.any(np.diff(pts) <= 0):
            raise DomainError("grid frequencies must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def log(cls, f_min=1e3, f_max=1e6, points_per_decade=100):
        """Log-spaced grid with both end points included."""
        if not (0 < f_min < f_max):
            raise DomainError("need 0 < f_min < f_max")
        if points_per_decade < 1:
            raise DomainError("points_per_decade must be >= 1")
        n = int(round(math.log10(f_max / f_min) * points_per_decade)) + 1
        pts = np.logspace(math.log10(f_min), math.log10(f_max), max(n, 2))
        # logspace can land a hair off the nominal end points
        pts[0], pts[-1] = f_min, f_max
        return cls(pts)

    @classmethod
    def single(cls, f):
        return cls(np.array([float(f)]))

    def __len__(self):
        return self.points.size

    def __eq__(self, other):
        if not isinstance(other, FrequencyGrid):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.array_equal(self.points, other.points)
        )

    __hash__ = None

    @property
    def f_min(self) -> float:
        return float(self.points[0])

    @property
    def f_max(self) -> float:
        return float(self.points[-1])

    def contains(self, f) -> bool:
        return self.f_min <= f <= self.f_max


@dataclass(frozen=True, eq=False)
class NoisePsd:
    """One-sided relative-intensity PSD (1/Hz) sampled on a :class:`FrequencyGrid`.

    ``label`` is free text naming the role of the spectrum (free-running,
    out-of-loop, in-loop shot noise, ...).
    """

    grid: FrequencyGrid
    values: np.ndarray
    label: str = field(default="")

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim == 0:
            vals = np.full(len(self.grid), float(vals))
        vals.setflags(write=False)
        if vals.shape != (len(self.grid),):
            raise GridMismatchError(
                f"{vals.shape[0] if vals.ndim else 1} values for a grid of {len(self.grid)} points"
            )
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise DomainError("PSD values must be finite and >= 0")
        object.__setattr__(self, "values", vals)

    @classmethod
    def flat(cls, grid, level, label=""):
        """Frequency-independent PSD at ``level`` (linear, 1/Hz)."""
        return cls(grid, np.full(len(grid), float(level)), label)

    @classmethod
    def from_db(cls, grid, level_db, label=""):
        return cls(grid, db_to_lin(np.broadcast_to(level_db, (len(grid),))), label)

    @property
    def frequencies(self) -> np.ndarray:
        return self.grid.points

    def db(self) -> np.ndarray:
        """Values in dB/Hz; zero entries map to ``-inf``."""
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(self.values)

    def at(self, f) -> float:
        """Value at a grid frequency (log-log interpolated between points)."""
        pts = self.grid.points
        if not self.grid.contains(f):
            raise DomainError(f"{f} Hz lies outside the grid [{pts[0]}, {pts[-1]}]")
        if len(pts) == 1:
            return float(self.values[0])
        if np.any(self.values == 0):
            return float(np.interp(f, pts, self.values))
        return float(np.exp(np.interp(math.log(f), np.log(pts), np.log(self.values))))

    def relabel(self, label):
        return NoisePsd(self.grid, self.values, label)


def rsn(power, wavelength):
    """Relative shot noise ``2 h nu / P`` of a beam of ``power`` W, in 1/Hz.

    Works elementwise on arrays of powers.
    """
    p = np.asarray(power, dtype=float)
    if np.any(~(p > 0)) or not wavelength > 0:
        raise DomainError("power and wavelength must be > 0")
    nu = CONSTANTS.speed_of_light / wavelength
    out = 2.0 * CONSTANTS.planck_constant * nu / p
    return float(out) if out.ndim == 0 else out


def db_to_lin(x):
    x = np.asarray(x, dtype=float)
    out = 10.0 ** (x / 10.0)
    return float(out) if out.ndim == 0 else out


def lin_to_db(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("lin_to_db needs strictly positive input")
    out = 10.0 * np.log10(x)
    return float(out) if out.ndim == 0 else out


def incoherent_sum_db(terms: Sequence[float]) -> float:
    """Power sum of uncorrelated contributions given in dB."""
    t = np.asarray(list(terms), dtype=float)
    if t.size == 0:
        raise DomainError("incoherent sum of an empty sequence")
    # factor out the largest term so tiny contributions don't underflow
    top = t.max()
    if not np.isfinite(top):
        if top == -np.inf:
            return -math.inf
        raise DomainError("terms must be finite or -inf")
    return float(top + 10.0 * np.log10(np.sum(10.0 ** ((t - top) / 10.0))))


def _check_same_grid(a: NoisePsd, b: NoisePsd):
    if a.grid is not b.grid and a.grid != b.grid:
        raise GridMismatchError("spectra live on different frequency grids")


def psd_add(a: NoisePsd, b: NoisePsd, label=None) -> NoisePsd:
    """Pointwise sum of two uncorrelated spectra."""
    _check_same_grid(a, b)
    return NoisePsd(a.grid, a.values + b.values, a.label if label is None else label)


def psd_scale(a: NoisePsd, k, label=None) -> NoisePsd:
    """Apply a power gain ``k`` (scalar or per-point array, linear) to a spectrum."""
    k = np.asarray(k, dtype=float)
    if np.any(k < 0) or not np.all(np.isfinite(k)):
        raise DomainError("scale factor must be finite and >= 0")
    return NoisePsd(a.grid, a.values * k, a.label if label is None else label)

"""Time-domain Monte Carlo check of the closed-loop noise suppression.

Synthesized laser noise is pushed through a discrete-time realization of the
active loop,

    y[n] = x[n] - sqrt(r) * u[n - d],   u = C(y),

with ``C`` the bilinear-transform discretization of the clamped integrator
and ``d`` the loop delay in samples.  The output spectrum is estimated with
Welch's method and compared against the analytic suppression
``1 / |1 + sqrt(r) G(f)|**2`` applied to the input spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from .chain import LaserParams, LoopParams, closed_loop_terms, free_running_psd
from .errors import DomainError, InstabilityError
from .spectra import FrequencyGrid, NoisePsd, db_to_lin
from .squeezer import QuadratureVariance

__all__ = [
    "SimConfig",
    "TimeSeries",
    "DIVERGENCE_FACTOR",
    "gen_noise",
    "integrator_coeffs",
    "simulate_loop",
    "welch_psd",
    "welch_segment_count",
    "OracleResult",
    "VerifyReport",
    "oracle_check",
    "verify",
]

# a loop is declared unstable once any output sample exceeds this multiple of the input rms
DIVERGENCE_FACTOR = 1e6
MIN_SAMPLES = 2**18


@dataclass(frozen=True, eq=False)
class TimeSeries:
    sample_rate: float
    samples: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise DomainError("time series must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(x)):
            raise DomainError("time series contains non-finite samples")
        if not self.sample_rate > 0:
            raise DomainError("sample_rate must be > 0")
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo settings.  ``duration=None`` picks the shortest record that
    still yields ``n_segments`` Welch segments after the warm-up discard."""

    sample_rate: float = 40e6
    duration: float | None = None
    seed: int = 0
    loop: LoopParams = field(default_factory=LoopParams)
    input_floor: float = -125.0  # dB/Hz
    flicker_corner: float = 0.0
    segment_len: int = 2**18
    overlap: float = 0.5
    n_segments: int = 64
    discard: float = 0.1

    def __post_init__(self):
        if self.sample_rate < 20 * self.loop.unity_gain_freq:
            raise DomainError("sample_rate must be at least 20x the unity-gain frequency")
        if self.segment_len < 2 or self.segment_len & (self.segment_len - 1):
            raise DomainError("segment_len must be a power of two")
        if not 0 <= self.overlap < 1:
            raise DomainError("overlap must lie in [0, 1)")
        if not 0 <= self.discard < 1:
            raise DomainError("discard must lie in [0, 1)")
        if self.duration is None:
            step = self.segment_len - int(self.segment_len * self.overlap)
            kept = self.segment_len + (self.n_segments - 1) * step
            n = math.ceil(kept / (1.0 - self.discard))
            object.__setattr__(self, "duration", n / self.sample_rate)
        if self.n_samples < MIN_SAMPLES:
            raise DomainError(f"record must hold at least {MIN_SAMPLES} samples")

    @property
    def n_samples(self) -> int:
        return int(round(self.duration * self.sample_rate))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gen_noise(floor, flicker_corner, n, rate, seed=0) -> TimeSeries:
    """Gaussian relative-intensity noise with one-sided PSD ``S0 (1 + f_c / f)``.

    ``floor`` is ``S0`` in dB/Hz.  The white part has per-sample variance
    ``S0 * rate / 2``; a non-zero ``flicker_corner`` shapes it in the Fourier
    domain.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = _rng(seed)
    sigma = math.sqrt(db_to_lin(floor) * rate / 2.0)
    x = rng.standard_normal(int(n)) * sigma
    if flicker_corner > 0 and n > 1:
        spectrum = np.fft.rfft(x)
        f = np.fft.rfftfreq(int(n), 1.0 / rate)
        f[0] = f[1]
        spectrum *= np.sqrt(1.0 + flicker_corner / f)
        x = np.fft.irfft(spectrum, n=int(n))
    return TimeSeries(rate, x)


def integrator_coeffs(loop: LoopParams, rate):
    """(b, a) of the clamped integrator ``G0 / (1 + s G0 / w_ugf)``, bilinear transform."""
    g0 = loop.dc_gain
    alpha = 2.0 * rate * g0 / (2.0 * math.pi * loop.unity_gain_freq)
    b = np.array([g0, g0]) / (1.0 + alpha)
    a = np.array([1.0, (1.0 - alpha) / (1.0 + alpha)])
    return b, a


def closed_loop_filter(loop: LoopParams, rate, controller=None):
    """Numerator/denominator of the closed-loop map from input to output."""
    b, a = integrator_coeffs(loop, rate) if controller is None else map(np.atleast_1d, controller)
    b = np.asarray(b, dtype=float)
    a = np.asarray(a, dtype=float)
    d = int(round(loop.delay * rate))
    k = math.sqrt(loop.reflectivity)
    den = np.zeros(max(a.size, d + b.size))
    den[: a.size] += a
    den[d : d + b.size] += k * b
    return a, den


def simulate_loop(x: TimeSeries, loop: LoopParams, controller=None, discard=0.1) -> TimeSeries:
    """Closed-loop output for input ``x``; the first ``discard`` fraction is dropped.

    ``controller`` optionally replaces the integrator with explicit ``(b, a)``
    coefficients (e.g. ``([g], [1])`` for a static gain).
    """
    num, den = closed_loop_filter(loop, x.sample_rate, controller)
    with np.errstate(all="ignore"):
        y = signal.lfilter(num, den, x.samples)
    rms = float(np.sqrt(np.mean(x.samples**2)))
    peak = float(np.max(np.abs(y))) if np.all(np.isfinite(y)) else math.inf
    if peak > DIVERGENCE_FACTOR * rms:
        raise InstabilityError(
            f"loop diverged (peak {peak:.3g} > {DIVERGENCE_FACTOR:g} x input rms): {loop}"
        )
    start = int(len(x) * discard)
    return TimeSeries(x.sample_rate, y[start:])


def welch_segment_count(n, segment_len, overlap=0.5) -> int:
    step = segment_len - int(segment_len * overlap)
    return 0 if n < segment_len else 1 + (n - segment_len) // step


def welch_psd(x: TimeSeries, segment_len, overlap=0.5, label="welch") -> NoisePsd:
    """One-sided Welch PSD (1/Hz), periodic Hann window, per-segment mean removal.

    Thin wrapper over :func:`scipy.signal.welch`; the DC bin is dropped so the
    result lives on a strictly positive frequency grid.
    """
    L = int(segment_len)
    if L < 2 or L & (L - 1):
        raise DomainError("segment_len must be a power of two")
    if not 0 <= overlap < 1:
        raise DomainError("overlap must lie in [0, 1)")
    if len(x) < L:
        raise DomainError(f"series of {len(x)} samples is shorter than one segment ({L})")
    f, psd = signal.welch(
        x.samples, fs=x.sample_rate, window="hann", nperseg=L, noverlap=int(L * overlap),
        detrend="constant", return_onesided=True, scaling="density",
    )
    return NoisePsd(FrequencyGrid(f[1:]), psd[1:], label)


def _band_edges(f_lo, f_hi):
    edges = [f_lo]
    for e in (1e4, 1e5, 1e6, 1e7):
        if f_lo < e < f_hi:
            edges.append(e)
    edges.append(f_hi)
    return list(zip(edges[:-1], edges[1:]))


@dataclass
class OracleResult:
    frequencies: np.ndarray
    deviation_db: np.ndarray  # input-referenced estimate vs analytic, per Welch bin
    raw_band_deviation_db: float  # plain output Welch PSD, 1/20-decade averaged
    n_segments: int
    bands: list  # (f_lo, f_hi, max |deviation| dB)

    @property
    def max_deviation_db(self) -> float:
        return float(np.max(np.abs(self.deviation_db)))


def oracle_check(cfg: SimConfig, f_lo=1e3, f_hi=None, seed=None, controller=None) -> OracleResult:
    """Simulate one loop realization and compare with the analytic residual term.

    The output PSD is estimated input-referenced: the Welch spectrum of the
    output divided by the Welch spectrum of the same input realization, times
    the generating input PSD.  This removes the realization's own periodogram
    scatter, which would otherwise dominate at 64 averages.
    """
    rate = cfg.sample_rate
    f_hi = cfg.loop.unity_gain_freq / 4 if f_hi is None else f_hi
    x = gen_noise(cfg.input_floor, cfg.flicker_corner, cfg.n_samples, rate,
                  cfg.seed if seed is None else seed)
    y = simulate_loop(x, cfg.loop, controller=controller, discard=cfg.discard)
    x_kept = TimeSeries(rate, x.samples[len(x) - len(y):])
    pyy = welch_psd(y, cfg.segment_len, cfg.overlap)
    pxx = welch_psd(x_kept, cfg.segment_len, cfg.overlap)
    nseg = welch_segment_count(len(y), cfg.segment_len, cfg.overlap)

    f = pyy.frequencies
    sel = (f >= f_lo) & (f <= f_hi)
    grid = FrequencyGrid(f[sel])
    laser = LaserParams(free_running_level=cfg.input_floor, flicker_corner=cfg.flicker_corner)
    s_in = free_running_psd(laser, grid)
    if controller is None:
        analytic = closed_loop_terms(s_in, cfg.loop, QuadratureVariance.vacuum(grid), laser)["residual"].values
    else:
        b, a = (np.atleast_1d(np.asarray(c, dtype=float)) for c in controller)
        _, h = signal.freqz(b, a, worN=grid.points, fs=rate)
        g = h * np.exp(-2j * np.pi * grid.points * cfg.loop.delay)
        analytic = s_in.values / np.abs(1.0 + math.sqrt(cfg.loop.reflectivity) * g) ** 2
    est = pyy.values[sel] * s_in.values / pxx.values[sel]
    dev = 10.0 * np.log10(est / analytic)

    raw = pyy.values[sel]
    ff = grid.points
    nb = max(1, int(round(20 * math.log10(f_hi / f_lo))))
    edges = np.logspace(math.log10(f_lo), math.log10(f_hi), nb + 1)
    raw_dev = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = (ff >= lo) & (ff <= hi)
        if m.any():
            raw_dev = max(raw_dev, abs(10.0 * math.log10(raw[m].mean() / analytic[m].mean())))

    bands = []
    for lo, hi in _band_edges(f_lo, f_hi):
        m = (ff >= lo) & (ff <= hi)
        bands.append((lo, hi, float(np.max(np.abs(dev[m]))) if m.any() else float("nan")))
    return OracleResult(ff, dev, raw_dev, nseg, bands)


@dataclass
class VerifyReport:
    seed: int
    repetitions: int
    tolerance_db: float
    bands: list  # (f_lo, f_hi, max deviation dB, passed)
    max_deviation_db: float
    raw_band_deviation_db: float
    n_segments: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and all(p for *_, p in self.bands)

    def lines(self):
        out = [
            f"oracle verification: seed={self.seed} reps={self.repetitions} "
            f"segments={self.n_segments} tolerance={self.tolerance_db} dB"
        ]
        for lo, hi, dev, ok in self.bands:
            out.append(f"  {lo:>10.4g} - {hi:<10.4g} Hz  max |dev| {dev:6.3f} dB  {'PASS' if ok else 'FAIL'}")
        out.append(f"  raw Welch (1/20-decade averaged) max |dev| {self.raw_band_deviation_db:.3f} dB")
        for msg in self.failures:
            out.append(f"  FAILURE: {msg}")
        out.append("PASS" if self.passed else "FAIL")
        return out


def verify(seed=0, reps=1, cfg: SimConfig | None = None, f_lo=1e3, f_hi=500e3, tol_db=1.0) -> VerifyReport:
    """Run the oracle ``reps`` times on independent streams split from ``seed``."""
    if reps < 1:
        raise DomainError("repetitions must be >= 1")
    cfg = SimConfig() if cfg is None else cfg
    streams = np.random.SeedSequence(seed).spawn(reps)
    worst = {}
    raw = 0.0
    nseg = 0
    failures = []
    for i, ss in enumerate(streams):
        try:
            res = oracle_check(cfg, f_lo, f_hi, seed=np.random.default_rng(ss))
        except InstabilityError as exc:
            failures.append(f"repetition {i}: {exc}")
            continue
        nseg = res.n_segments
        raw = max(raw, res.raw_band_deviation_db)
        for lo, hi, dev in res.bands:
            worst[(lo, hi)] = max(worst.get((lo, hi), 0.0), dev)
    bands = [(lo, hi, dev, dev < tol_db) for (lo, hi), dev in worst.items()]
    max_dev = max((b[2] for b in bands), default=float("nan"))
    return VerifyReport(seed, reps, tol_db, bands, max_dev, raw, nseg, failures)

"""Acceptance criteria 1-9.

Each criterion prints one ``criterion N: PASS|FAIL`` line with the measured
numbers.  Run under pytest, or directly with ``python tests/test_acceptance.py``
for just the summary lines.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from brightsqueeze.budget import compose_loss, compose_phase
from brightsqueeze.chain import combine_bs
from brightsqueeze.optimizer import max_power_at_target, sweep_power
from brightsqueeze.scenario import config_from_dict, run_scenario
from brightsqueeze.spectra import FrequencyGrid, NoisePsd, incoherent_sum_db, lin_to_db, rsn
from brightsqueeze.squeezer import QuadratureVariance, SqueezerParams, effective_variance
from brightsqueeze.timedomain import verify


def _line(n, ok, detail):
    return f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"


def criterion_1():
    want = {100e-6: -145.9, 1e-3: -155.9, 10e-3: -165.9}
    best = math.inf
    for _ in range(5):
        t0 = time.perf_counter()
        got = {p: float(lin_to_db(rsn(p, 1550e-9))) for p in want}
        best = min(best, time.perf_counter() - t0)
    errs = [abs(got[p] - v) for p, v in want.items()]
    ok = max(errs) <= 0.15 and best < 1e-3
    detail = ", ".join(f"{p * 1e3:g} mW {got[p]:.3f}" for p in want) + f" dB/Hz; {best * 1e6:.0f} us"
    return ok, detail


def criterion_2():
    a = incoherent_sum_db([-11, -21])
    b = incoherent_sum_db([-10, -14, -30])
    ok = abs(a - -10.6) <= 0.05 and abs(b - -8.5) <= 0.05
    return ok, f"{a:.3f} (want -10.6), {b:.3f} (want -8.5), tol 0.05 dB"


def criterion_3():
    loss = compose_loss([3.0, 2.8, 1.0, 3.2])
    phase = compose_phase([2, 8, 11], "linear")
    ok = abs(loss - 10.0) <= 0.8 and abs(phase - 21.0) < 1e-9
    return ok, f"loss {loss:.3f}% (10 +/- 0.8), phase {phase:g} mrad (21)"


def criterion_4():
    g = FrequencyGrid.single(1e5)
    vv = QuadratureVariance.from_db(g, 8.6)
    ref = rsn(1e-3, 1550e-9)
    out = []
    for tn_db in (-10.6, -8.5):
        tn = NoisePsd.flat(g, ref * 10 ** (tn_db / 10))
        out.append(float(lin_to_db(combine_bs(vv, 0.99, tn, ref).variance[0])))
    ok = abs(out[0] - -6.5) <= 0.2 and abs(out[1] - -5.5) <= 0.2
    return ok, f"{out[0]:.3f} dB (-6.5 +/- 0.2), {out[1]:.3f} dB (-5.5 +/- 0.2)"


def criterion_5():
    t0 = time.perf_counter()
    ts = run_scenario("fig2a")
    elapsed = time.perf_counter() - t0
    f = ts.x
    ii, iii, iv, v = (ts[k].values for k in ("II", "III", "IV", "V"))
    checks = {}
    checks["III flat -157"] = np.max(np.abs(iii - -157.0)) <= 0.5
    checks["V floor -176"] = abs(np.min(v) - -176.0) <= 0.5
    low = f <= 1e4
    dev_ii = float(np.max(np.abs(ii[low] - -166.0)))
    rising = bool(np.all(np.diff(ii[~low]) > 0) and ii[-1] > ii[low].max() + 1.0)
    checks["II within 1 dB of -166 below 10 kHz"] = dev_ii <= 1.0
    checks["II rising above 10 kHz"] = rising
    worst_iv = float(np.max(iv[f <= 1e5]))
    checks["IV <= -166 to 100 kHz"] = worst_iv <= -166.0
    checks["runtime < 1 s"] = elapsed < 1.0
    ok = all(checks.values())
    failed = [k for k, c in checks.items() if not c]
    detail = (
        f"III {iii.min():.2f}..{iii.max():.2f}, V min {np.min(v):.2f}, II max dev {dev_ii:.2f} dB, "
        f"IV max {worst_iv:.2f} dB/Hz, {elapsed * 1e3:.0f} ms"
    )
    if failed:
        detail += "; failing: " + ", ".join(failed)
    return ok, detail


def criterion_6():
    cfg = config_from_dict({"preset": "fig2b"})
    chain, f = cfg.chain, cfg.eval_freq
    pa_1mw = sweep_power(chain, [1e-3], f, "passive+active")[0].squeezing_db
    po_100u = sweep_power(chain, [100e-6], f, "passive-only")[0].squeezing_db
    po_2m = sweep_power(chain, [2e-3], f, "passive-only")[0].squeezing_db
    p0 = max_power_at_target(0.0, chain, "passive-only", f)
    curves = {s: np.array([p.squeezing_db for p in sweep_power(chain, cfg.powers, f, s)]) for s in cfg.schemes}
    lim, pa = curves["theoretical-limit"], curves["passive+active"]
    others = np.maximum(curves["passive-only"], curves["active-only"])
    ordered = bool(np.all(lim >= pa - 1e-12) and np.all(pa >= others - 1e-12))
    checks = {
        "passive+active >= 5.3 dB at 1 mW": pa_1mw >= 5.3,
        "passive-only >= 6.3 dB at 100 uW": po_100u >= 6.3,
        "passive-only < 0.5 dB at 2 mW": po_2m < 0.5,
        "P(0 dB) ~ 1.1 mW": abs(p0 - 1.1e-3) <= 0.05e-3,
        "scheme ordering": ordered,
    }
    failed = [k for k, c in checks.items() if not c]
    detail = (
        f"P+A@1mW {pa_1mw:.2f} dB, P@100uW {po_100u:.2f} dB, P@2mW {po_2m:.2f} dB, "
        f"P(0 dB) {p0 * 1e3:.3f} mW, ordering {'ok' if ordered else 'broken'}"
    )
    if failed:
        detail += "; failing: " + ", ".join(failed)
    return all(checks.values()), detail


def criterion_7():
    p = SqueezerParams(pump_ratio=math.sqrt(0.5), total_efficiency=0.9, phase_jitter_rms=21e-3)
    v = effective_variance(p, FrequencyGrid.single(1e3))
    db = float(lin_to_db(v.squeezed[0]))
    return abs(db - -8.6) <= 0.3, f"{db:.3f} dB (-8.6 +/- 0.3)"


def criterion_8():
    t0 = time.perf_counter()
    a = verify(seed=0)
    elapsed = time.perf_counter() - t0
    b = verify(seed=0)
    same = a.lines() == b.lines()
    ok = a.passed and a.max_deviation_db < 1.0 and a.n_segments >= 64 and same and elapsed < 60
    detail = (
        f"max dev {a.max_deviation_db:.3f} dB over 1 kHz-500 kHz, {a.n_segments} segments, "
        f"deterministic {same}, {elapsed:.1f} s"
    )
    return ok, detail


def criterion_9():
    sys.path.insert(0, str(Path(__file__).parent))
    import test_properties as props

    names = [n for n in dir(props) if n.startswith("test_")]
    failed = []
    for name in names:
        fn = getattr(props, name)
        examples = fn._hypothesis_internal_use_settings.max_examples
        if examples < 1000:
            failed.append(f"{name} ({examples} examples)")
            continue
        try:
            fn()
        except Exception as exc:  # noqa: BLE001
            failed.append(f"{name}: {type(exc).__name__}")
    detail = f"{len(names) - len(failed)}/{len(names)} property tests at 1000 examples"
    if failed:
        detail += "; failing: " + ", ".join(failed)
    return not failed, detail


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print("\n" + _line(n, ok, detail))
        return ok
    return _report


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, report):
    ok, detail = CRITERIA[n - 1]()
    assert report(n, ok, detail), detail


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, start=1):
        ok, detail = fn()
        print(_line(i, ok, detail), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)

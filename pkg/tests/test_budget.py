import math

import pytest

from brightsqueeze.budget import (
    budget_report,
    compose_loss,
    compose_phase,
    loss_budget,
    phase_budget,
    technical_noise_total,
)
from brightsqueeze.chain import ChainConfig, LaserParams, LoopParams, PassiveStageParams
from brightsqueeze.errors import DomainError
from brightsqueeze.spectra import FrequencyGrid

TABLE1_LOSS = [3.0, 2.8, 1.0, 3.2]


def test_loss_multiplicative():
    # 1 - 0.97 * 0.972 * 0.99 * 0.968
    assert compose_loss(TABLE1_LOSS) == pytest.approx(9.64575712, abs=1e-8)


def test_loss_linear():
    assert compose_loss(TABLE1_LOSS, "linear") == pytest.approx(10.0)


def test_loss_rejects():
    with pytest.raises(DomainError):
        compose_loss([100.0])
    with pytest.raises(DomainError):
        compose_loss([-1.0])
    with pytest.raises(DomainError):
        compose_loss([1.0], "additive")


def test_loss_empty_is_lossless():
    assert compose_loss([]) == 0.0


def test_phase():
    assert compose_phase([2, 8, 11]) == pytest.approx(21.0)
    assert compose_phase([2, 8, 11], "quadrature") == pytest.approx(math.sqrt(189))
    with pytest.raises(DomainError):
        compose_phase([-1])


def test_budget_objects():
    lb = loss_budget([("a", 3.0), ("b", 2.8)])
    assert lb.efficiency == pytest.approx(0.97 * 0.972)
    pb = phase_budget({"a": 2, "b": 8}.items(), "linear")
    assert pb.total_mrad == 10


def test_technical_noise_total_accepts_pairs():
    assert technical_noise_total([("x", -11.0), ("y", -21.0)]) == pytest.approx(-10.5861, abs=1e-4)
    assert technical_noise_total([-10, -14, -30]) == pytest.approx(-8.5136, abs=1e-4)
    with pytest.raises(DomainError):
        technical_noise_total([])


def _chain(power, loop):
    return ChainConfig(
        laser=LaserParams(power_out_of_loop=power),
        passive=PassiveStageParams(suppression_db=32.0),
        loop=LoopParams() if loop else None,
        detector_noise=-168.0,
    )


def test_report_passive_column():
    nb = budget_report(_chain(1e-4, loop=False))
    d = nb.as_dict()
    # -157 and -168 dB/Hz against -145.912 dB/Hz
    assert d["Amplitude noise"] == pytest.approx(-11.0878, abs=1e-3)
    assert d["Electronic noise"] == pytest.approx(-22.0878, abs=1e-3)
    assert "Residual in-loop noise" not in d
    assert d["Total noise"] == pytest.approx(technical_noise_total(nb.items))


def test_report_active_column():
    d = budget_report(_chain(1e-3, loop=True)).as_dict()
    # in-loop floor at 10 mW over out-of-loop shot noise at 1 mW
    assert d["Amplitude noise"] == pytest.approx(-10.0, abs=1e-9)
    assert d["Residual in-loop noise"] < -30.0


def test_report_rejects_frequency_off_grid():
    with pytest.raises(DomainError):
        budget_report(_chain(1e-3, True), FrequencyGrid.log(1e3, 1e4, 10), ref_freq=5e4)


def test_report_needs_some_noise():
    cfg = ChainConfig(laser=LaserParams(free_running_level=-math.inf))
    with pytest.raises(DomainError):
        budget_report(cfg)

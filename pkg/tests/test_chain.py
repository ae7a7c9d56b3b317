import cmath
import math

import numpy as np
import pytest

from brightsqueeze.chain import (
    ChainConfig,
    LaserParams,
    LoopParams,
    PassiveStageParams,
    closed_loop_psd,
    closed_loop_terms,
    combine_bs,
    evaluate,
    free_running_psd,
    loop_gain,
    loop_suppression,
    passive_gain,
    passive_psd,
)
from brightsqueeze.errors import DomainError, GridMismatchError
from brightsqueeze.spectra import FrequencyGrid, NoisePsd, db_to_lin, lin_to_db, rsn
from brightsqueeze.squeezer import QuadratureVariance

PASSIVE = PassiveStageParams(suppression_db=32.0)
LOOP = LoopParams()
LASER = LaserParams()


def _hand_suppression(f, g0=1e4, fu=2e6, tau=50e-9, r=0.99):
    g = g0 / (1 + 1j * f * g0 / fu) * cmath.exp(-2j * math.pi * f * tau)
    return abs(1 + math.sqrt(r) * g) ** 2


class TestPassive:
    def test_in_band(self):
        g = passive_gain(PASSIVE, np.array([1e3, 3e4, 1e6]))
        np.testing.assert_allclose(g, 10 ** -3.2)

    def test_rolloff_outside_band(self):
        # 20 dB per decade beyond each edge, clamped at no suppression
        assert 10 * math.log10(passive_gain(PASSIVE, 1e7)) == pytest.approx(-12.0)
        assert 10 * math.log10(passive_gain(PASSIVE, 1e2)) == pytest.approx(-12.0)
        assert passive_gain(PASSIVE, 1e9) == pytest.approx(1.0)

    def test_trace_iii_level(self, grid):
        p = passive_psd(free_running_psd(LASER, grid), PASSIVE)
        np.testing.assert_allclose(p.db(), -157.0)

    def test_excess_term(self):
        st = PassiveStageParams(suppression_db=32.0, excess_level=-150.0, excess_corner=1e4)
        g = FrequencyGrid([1e4])
        p = passive_psd(free_running_psd(LASER, g), st)
        assert p.values[0] == pytest.approx(db_to_lin(-157.0) + 0.5 * db_to_lin(-150.0))

    def test_params_validated(self):
        with pytest.raises(DomainError):
            PassiveStageParams(suppression_db=-1.0)
        with pytest.raises(DomainError):
            PassiveStageParams(suppression_db=30.0, band_low=1e6, band_high=1e3)


class TestLoop:
    @pytest.mark.parametrize("f", [1e3, 1e4, 1e5, 1e6])
    def test_suppression_matches_hand_formula(self, f):
        assert loop_suppression(LOOP, f) == pytest.approx(_hand_suppression(f), rel=1e-12)

    def test_gain_magnitude_asymptotes(self):
        assert abs(loop_gain(LOOP, 1.0)) == pytest.approx(1e4, rel=1e-3)
        assert abs(loop_gain(LOOP, 1e5)) == pytest.approx(20.0, rel=1e-3)
        assert abs(loop_gain(LOOP, 2e6)) == pytest.approx(1.0, rel=1e-4)

    def test_open_loop(self):
        lp = LoopParams(dc_gain_db=-math.inf)
        assert lp.dc_gain == 0.0
        assert loop_suppression(lp, 1e4) == pytest.approx(1.0)

    def test_gain_rejects_nonpositive_frequency(self):
        with pytest.raises(DomainError):
            loop_gain(LOOP, 0.0)

    @pytest.mark.parametrize("kw", [{"reflectivity": 0.0}, {"reflectivity": 1.2}, {"inloop_power": 0.0},
                                    {"unity_gain_freq": -1.0}, {"delay": -1e-9}])
    def test_params_validated(self, kw):
        with pytest.raises(DomainError):
            LoopParams(**kw)

    def test_four_terms(self, grid):
        vv = QuadratureVariance.from_db(grid, 8.6)
        tn = passive_psd(free_running_psd(LASER, grid), PASSIVE)
        terms = closed_loop_terms(tn, LOOP, vv, LASER)
        s = np.array([_hand_suppression(f) for f in grid.points])
        rsn_il = rsn(10e-3, 1550e-9)
        np.testing.assert_allclose(terms["residual"].values, db_to_lin(-157.0) / s, rtol=1e-10)
        np.testing.assert_allclose(terms["inloop_shot"].values, rsn_il)
        np.testing.assert_allclose(terms["dark_port"].values, rsn_il * 0.01 * db_to_lin(-8.6) / s, rtol=1e-10)
        np.testing.assert_allclose(terms["electronic"].values, db_to_lin(-168.0) / s, rtol=1e-10)
        total = closed_loop_psd(tn, LOOP, vv, LASER)
        np.testing.assert_allclose(total.values, sum(t.values for t in terms.values()))

    def test_inloop_floor_is_never_beaten(self, grid):
        vv = QuadratureVariance.from_db(grid, 8.6)
        out = closed_loop_psd(free_running_psd(LASER, grid), LOOP, vv, LASER)
        assert np.all(out.values >= rsn(10e-3, 1550e-9))

    def test_grid_mismatch(self, grid):
        vv = QuadratureVariance.from_db(FrequencyGrid.log(1e3, 1e6, 7), 8.6)
        with pytest.raises(GridMismatchError):
            closed_loop_terms(free_running_psd(LASER, grid), LOOP, vv, LASER)


class TestCombine:
    def test_headline_values(self):
        g = FrequencyGrid.single(5e4)
        vv = QuadratureVariance.from_db(g, 8.6)
        ref = rsn(1e-3, 1550e-9)
        for tn_db, expect in ((-10.6, -6.44876), (-8.5, -5.51778)):
            tn = NoisePsd.flat(g, ref * db_to_lin(tn_db))
            res = combine_bs(vv, 0.99, tn, ref)
            assert lin_to_db(res.variance[0]) == pytest.approx(expect, abs=1e-4)
            assert res.squeezing_db[0] == pytest.approx(-expect, abs=1e-4)

    def test_no_technical_noise(self):
        g = FrequencyGrid.single(5e4)
        vv = QuadratureVariance.from_db(g, 8.6)
        res = combine_bs(vv, 0.99, NoisePsd.flat(g, 0.0), 1e-15)
        assert res.variance[0] == pytest.approx(db_to_lin(-8.6) / 0.99)

    def test_exact_mode(self):
        g = FrequencyGrid.single(5e4)
        vv = QuadratureVariance.from_db(g, 10.0)
        res = combine_bs(vv, 0.99, NoisePsd.flat(g, 0.0), 1e-15, exact=True)
        assert res.variance[0] == pytest.approx(0.99 * 0.1 + 0.01)

    @pytest.mark.parametrize("vv_db,gap", [(-10.0, 0.330617), (-11.0, 0.432576)])
    def test_exact_vs_default_gap(self, vv_db, gap):
        # the simplified form overstates squeezing by this much when TN = 0
        g = FrequencyGrid.single(5e4)
        vv = QuadratureVariance.from_db(g, -vv_db)
        z = NoisePsd.flat(g, 0.0)
        a = combine_bs(vv, 0.99, z, 1e-15).squeezing_db[0]
        b = combine_bs(vv, 0.99, z, 1e-15, exact=True).squeezing_db[0]
        assert a - b == pytest.approx(gap, abs=1e-5)

    def test_rejects(self):
        g = FrequencyGrid.single(5e4)
        vv = QuadratureVariance.vacuum(g)
        z = NoisePsd.flat(g, 0.0)
        with pytest.raises(DomainError):
            combine_bs(vv, 0.0, z, 1.0)
        with pytest.raises(DomainError):
            combine_bs(vv, 0.99, z, 0.0)


class TestEvaluate:
    def test_free_running_only(self, grid):
        res = evaluate(ChainConfig(), grid)
        np.testing.assert_allclose(res.technical.db(), -125.0)
        assert res.passive is None and res.loop_terms is None

    def test_detector_noise_added(self, grid):
        cfg = ChainConfig(laser=LaserParams(power_out_of_loop=1e-4), passive=PASSIVE, detector_noise=-168.0)
        res = evaluate(cfg, grid)
        np.testing.assert_allclose(res.tn_ool.values, db_to_lin(-157.0) + db_to_lin(-168.0))

    def test_fig4_headline(self, grid):
        cfg = ChainConfig(laser=LaserParams(power_out_of_loop=1e-4), passive=PASSIVE, detector_noise=-168.0)
        sq = evaluate(cfg, grid).combined.squeezing_db
        # frozen: -8.6 dB / 0.99 plus (-157 (+) -168) relative to -145.91
        np.testing.assert_allclose(sq, 6.508, atol=1e-3)

    def test_flicker_corner(self):
        laser = LaserParams(flicker_corner=1e4)
        p = free_running_psd(laser, FrequencyGrid([1e4]))
        assert p.db()[0] == pytest.approx(-125.0 + 10 * math.log10(2))

    def test_with_power(self):
        cfg = ChainConfig().with_power(5e-3)
        assert cfg.laser.power_out_of_loop == 5e-3

import numpy as np
import pytest
import yaml

from brightsqueeze import presets
from brightsqueeze.errors import ConfigError
from brightsqueeze.scenario import config_from_dict, load_config, resolve_document, run_scenario, schema_help


def test_empty_config_is_rejected():
    with pytest.raises(ConfigError) as exc:
        config_from_dict({})
    assert exc.value.problems[0][0] == "passive/loop"


def test_free_running_mode_allowed():
    ts = run_scenario({"mode": "free-running"})
    assert ts.keys()[0] == "a"


def test_all_problems_listed():
    doc = {"laser": {"power_out_of_loop_mw": 0, "wavelength_nm": "red"}, "passive": {}, "bogus": 1}
    with pytest.raises(ConfigError) as exc:
        resolve_document(doc)
    paths = {p for p, _ in exc.value.problems}
    assert {"laser.power_out_of_loop_mw", "laser.wavelength_nm", "passive.suppression_db", "bogus"} <= paths


def test_preset_override_merges():
    cfg = config_from_dict({"preset": "fig4", "laser": {"power_out_of_loop_mw": 0.5}})
    assert cfg.chain.laser.power_out_of_loop == pytest.approx(5e-4)
    assert cfg.chain.laser.free_running_level == -125.0
    assert cfg.chain.passive.suppression_db == 32.0


def test_unknown_preset():
    with pytest.raises(ConfigError):
        config_from_dict({"preset": "fig9"})


def test_scheme_needs_stage():
    with pytest.raises(ConfigError):
        config_from_dict({"kind": "power-sweep", "passive": {"suppression_db": 30}, "schemes": ["active-only"]})


@pytest.mark.parametrize("name", presets.PRESET_NAMES)
def test_presets_run_deterministically(name):
    a, b = run_scenario(name), run_scenario(name)
    assert a.config_hash == b.config_hash
    for ta, tb in zip(a.traces, b.traces):
        assert np.array_equal(ta.values, tb.values)
    assert a.tables == b.tables


def test_fig2a_labels():
    ts = run_scenario("fig2a")
    assert ts.keys() == ["I", "II", "III", "IV", "V"]
    np.testing.assert_allclose(ts["I"].values, -125.0)


def test_fig5_labels():
    assert run_scenario("fig5").keys() == ["a", "c", "e", "f", "g", "h", "i", "tn_ool"]


def test_table2_rows():
    t = run_scenario("table2").tables["noise_budget"]
    assert t["columns"] == ["source", "Passive (dB)", "Passive & active (dB)"]
    assert [r[0] for r in t["rows"]] == ["Amplitude noise", "Electronic noise", "Residual in-loop noise", "Total noise"]


def test_load_yaml(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text(yaml.safe_dump({"preset": "fig4", "grid": {"points_per_decade": 5}}))
    cfg = load_config(path)
    assert len(cfg.grid) == 16
    assert cfg.name == "s"


def test_load_bad_yaml(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("laser: [unclosed")
    with pytest.raises(ConfigError):
        load_config(path)


def test_schema_help_lists_every_key():
    text = schema_help()
    from brightsqueeze.scenario import SCHEMA, TOP_LEVEL

    for key in TOP_LEVEL:
        assert key in text
    for sec in SCHEMA.values():
        for key in sec:
            assert key in text

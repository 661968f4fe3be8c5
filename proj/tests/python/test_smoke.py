import math

import numpy as np
import pytest

import dqt_transport as dqt

SMALL = {"system": {"num_nodes": 10}, "time_grid": {"t_end": 5.0, "sample_stride": 10}}


def test_default_config_round_trip():
    cfg = dqt.default_config()
    assert cfg["system"]["num_nodes"] == 100
    assert cfg["time_grid"]["dt"] == 0.01


def test_simulate_shapes_and_normalization():
    out = dqt.simulate(SMALL)
    assert out["times"].shape == (51,)
    assert out["occupation"].shape == (10, 51)
    assert np.allclose(out["occupation"].sum(axis=0), 1.0, atol=1e-10)
    assert out["summary"]["t_max"] in out["times"]
    assert math.isnan(out["T_to_ground"][0])


def test_rates_match_single_channel_closed_form():
    cfg = {"system": {"num_nodes": 2, "levels": [1.0, 10.0]},
           "environment": {"levels": [0.0]}, "coupling": {"uniform": 0.05}}
    (shift, rate), _ = dqt.rates(cfg, math.pi / 2)
    assert rate == pytest.approx(0.0025, rel=1e-12)
    assert shift == pytest.approx(0.0025, rel=1e-12)


def test_trace_distance():
    g = np.diag([1.0, 0.0]).astype(complex)
    e = np.diag([0.0, 1.0]).astype(complex)
    assert dqt.trace_distance(g, e) == pytest.approx(1.0)


def test_bad_config_raises():
    with pytest.raises(dqt.ConfigError, match="system.num_nodes"):
        dqt.simulate({"system": {"num_nodes": -1}})


def test_run_writes_artifacts(tmp_path):
    paths = dqt.run(SMALL, tmp_path / "run")
    header = open(paths["occupation_csv"]).readline().strip()
    assert header == "t," + ",".join(f"P_{j}" for j in range(1, 11))

import numpy as np
import pytest

import adaptopt


def test_benchmark_minimizer():
    team = adaptopt.benchmark_objectives()
    assert len(team) == 8
    s = team.minimizer()
    assert np.allclose(s, [-1.0, -1.0], atol=1e-8)
    assert team(s) == pytest.approx(6.0)
    assert np.linalg.norm(team.grad(s)) <= 1e-8


def test_objective_gradient():
    f = adaptopt.Objective(2, [(0.5, 0, 1.0, 2), (1.0, 1, 0.0, 4)])
    x = np.array([0.3, -0.7])
    assert np.allclose(f.grad(x), f.grad_fd(x), atol=1e-6)
    with pytest.raises(ValueError):
        adaptopt.Objective(2, [(1.0, 0, 0.0, 3)])


def test_laplacian_and_connectivity():
    g = adaptopt.ring(4)
    L = adaptopt.laplacian(g)
    assert L.shape == (4, 4)
    assert np.array_equal(L @ np.ones(4), np.zeros(4))
    assert adaptopt.is_connected(g)
    split = adaptopt.Topology(4, [(0, 1, 1.0), (2, 3, 2.0)])
    assert not adaptopt.is_connected(split)
    assert adaptopt.component_count(split) == 2


def test_short_preset_run():
    cfg = adaptopt.load_preset("single_agent_quadratic")
    cfg.t_end = 0.5
    result = adaptopt.run_experiment(cfg)
    record = result.record
    assert len(record) == record.times.shape[0]
    assert record.x.shape[1:] == (1, 2)
    assert set(result.summary) >= {"passed", "exit_code", "checks"}
    assert np.all(np.diff(record.monitors["t"]) > 0)


def test_benchmark_preset_converges():
    cfg = adaptopt.load_preset("benchmark_single")
    result = adaptopt.run_experiment(cfg)
    assert result.summary["passed"]
    assert result.summary["worst_agent_distance"] < 0.05


def test_config_errors():
    assert "benchmark_double" in adaptopt.preset_names()
    with pytest.raises(adaptopt.ConfigError):
        adaptopt.parse_config('{"preset": "benchmark_single", "dt": 0}')
    with pytest.raises(adaptopt.ParseError):
        adaptopt.parse_config('{"preset": "benchmark_single", "velocty": 1}')

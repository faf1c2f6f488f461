import itertools

import numpy as np
import pytest

from sattrack import MountConfig, profile_A, profile_B, simulate
from sattrack.optimizer import (ApsConfig, CandidateError, aps_optimize, pattern_search, rmse)
from sattrack.simulation import SimulationTrace

from conftest import constant_rate_pass


def trace_of(err):
    err = np.asarray(err, dtype=float)
    z = np.zeros_like(err)
    return SimulationTrace(np.arange(err.size) * 0.005, z, z, z, z,
                           np.zeros(err.size, np.int8), err)


@pytest.mark.parametrize("err, expected", [
    ([0.5, 0.5, 0.5], 0.5), ([0.0, 1.0], np.sqrt(0.5)), ([0.0] * 7, 0.0)])
def test_rmse_examples(err, expected):
    assert rmse(trace_of(err)) == pytest.approx(expected, rel=1e-15)


def test_rmse_empty():
    with pytest.raises(ValueError):
        rmse(trace_of([]))


BOUNDS = ((0.1, 10.0), (0.1, 10.0))


def bowl(p):
    return (p[0] - 3.0) ** 2 + (p[1] - 1.0) ** 2


def test_surrogate_converges_to_grid_optimum():
    x, fx, iters, evals, step, history = pattern_search(bowl, (1.0, 5.0), BOUNDS, 2.0, 0.1, 50)
    grid = np.arange(0.1, 10.0001, 0.05)
    oracle = min(itertools.product(grid, grid), key=bowl)
    assert abs(x[0] - oracle[0]) <= 0.1 and abs(x[1] - oracle[1]) <= 0.1
    assert step < 0.1
    assert evals == len({(h.v_az, h.v_el) for h in history})


def test_start_at_optimum_only_halves():
    x, fx, iters, evals, step, history = pattern_search(bowl, (3.0, 1.0), BOUNDS, 2.0, 0.1, 20)
    assert x == (3.0, 1.0) and fx == 0.0
    # 2 -> 1 -> 0.5 -> 0.25 -> 0.125 -> 0.0625: five halvings
    assert iters == 5 and step == 0.0625
    assert sum(h.accepted for h in history) == 1  # only the starting point


def test_search_properties():
    seen = []

    def f(p):
        seen.append(p)
        return bowl(p) + 0.3 * np.sin(3 * p[0]) * np.cos(2 * p[1])

    x, fx, iters, evals, step, history = pattern_search(f, (9.5, 0.2), BOUNDS, 2.0, 0.1, 20)
    assert all(0.1 <= a <= 10 and 0.1 <= b <= 10 for a, b in seen)
    assert len(seen) == evals <= 4 * iters + 1
    accepted = [h.rmse for h in history if h.accepted]
    assert all(b < a for a, b in zip(accepted, accepted[1:]))
    assert fx == accepted[-1] == min(h.rmse for h in history)
    again = pattern_search(f, (9.5, 0.2), BOUNDS, 2.0, 0.1, 20)
    assert again[:5] == (x, fx, iters, evals, step)


def test_iteration_cap():
    res = pattern_search(bowl, (10.0, 10.0), BOUNDS, 2.0, 1e-6, 3)
    assert res[2] == 3


def test_parallel_matches_serial():
    a = pattern_search(bowl, (1.0, 5.0), BOUNDS, 2.0, 0.1, 20, workers=1)
    b = pattern_search(bowl, (1.0, 5.0), BOUNDS, 2.0, 0.1, 20, workers=4)
    assert a[:5] == b[:5]


def test_candidate_failure_propagates():
    def f(p):
        if p[0] > 2.5:
            raise RuntimeError("boom")
        return bowl(p)

    with pytest.raises(CandidateError, match="boom") as info:
        pattern_search(f, (1.0, 1.0), BOUNDS, 2.0, 0.1, 20)
    assert info.value.point[0] > 2.5


def test_aps_config_validation():
    with pytest.raises(ValueError):
        ApsConfig(initial_step=0.1, min_step=0.2)
    with pytest.raises(ValueError):
        ApsConfig(max_iterations=0)


def test_aps_not_worse_than_baselines(tmp_path):
    cfg = MountConfig()
    traj = constant_rate_pass(2.0, 0.5, duration=30.0)
    report = aps_optimize(traj, cfg)
    ra = rmse(simulate(traj, cfg, profile_A(cfg)))
    rb = rmse(simulate(traj, cfg, profile_B(traj)))
    assert report.best_rmse <= min(ra, rb) + 1e-9
    assert report.best_rmse == rmse(simulate(traj, cfg, report.best_profile))
    assert 0.1 <= report.best_profile.v_az <= cfg.v_max_az
    assert 0.1 <= report.best_profile.v_el <= cfg.v_max_el

    report.write(tmp_path / "r.txt", tmp_path / "h.csv")
    text = (tmp_path / "r.txt").read_text()
    for key in ("v_az", "v_el", "rmse_deg", "iterations", "evaluations", "final_step"):
        assert f"{key} = " in text
    rows = (tmp_path / "h.csv").read_text().splitlines()
    assert rows[0] == "iter,v_az,v_el,rmse_deg,accepted"
    assert len(rows) == report.evaluations + 1

import numpy as np
import pytest

from perflab.errors import DomainError
from perflab.sim import SimConfig
from perflab.sim.sweep import mesh_axes, mesh_sweep, node_summary, run_seed, sweep_tasks

BASE = SimConfig(s=12, t_max=40, n_agents=20, n_urban=10, n_fossil=200.0, n_food=200.0, n_eco=200.0, lam=2,
                 seed=4)


def test_corner_runs():
    rows = mesh_sweep(BASE, 2, 1)
    assert len(rows) == 8
    corners = {(r.alpha3, r.alpha5, r.beta_alpha) for r in rows}
    assert corners == {(a, b, c) for a in (0.0, 1.0) for b in (0.0, 1.0) for c in (1.0, 5.0)}
    assert [r.node_idx for r in rows] == list(range(8))


def test_task_count_and_axes():
    assert len(sweep_tasks(BASE, 3, 2)) == 54
    a3, a5, ba = mesh_axes(5)
    assert np.allclose(a3, [0, 0.25, 0.5, 0.75, 1]) and np.allclose(ba, [1, 2, 3, 4, 5])
    with pytest.raises(DomainError):
        sweep_tasks(BASE, 1, 1)
    with pytest.raises(DomainError):
        sweep_tasks(BASE, 2, 0)


def test_seeds_distinct_and_stable():
    seeds = [t[5] for t in sweep_tasks(BASE, 3, 3)]
    assert len(set(seeds)) == len(seeds)
    assert run_seed(4, 0, 0) == run_seed(4, 0, 0) != run_seed(5, 0, 0)


def test_jobs_do_not_change_results():
    assert mesh_sweep(BASE, 2, 2, jobs=1) == mesh_sweep(BASE, 2, 2, jobs=2)


def test_node_summary_bounds():
    rows = mesh_sweep(BASE, 2, 3)
    summ = node_summary(rows)
    assert len(summ) == 8
    for node, a3, a5, ba, runs, mean, sd, n_tmax in summ:
        assert runs == 3 and 0 <= n_tmax <= runs
        assert 0 <= mean <= BASE.t_max and sd >= 0

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from perflab.errors import ConfigError, DomainError
from perflab.sim import (BACKEND, SimConfig, _pykernel, chebyshev_torus, choose_destination, consume,
                         format_config, init_world, line_of_sight, parse_config, run_simulation,
                         step_function, update_lifespan, world_step)
from perflab.sim.world import AGENT_FIELDS, _empty_agents, convert

KERNELS = {"python": _pykernel.agent_phase}
if BACKEND == "cython":
    from perflab.sim import _kernel
    KERNELS["cython"] = _kernel.agent_phase

SMALL = dict(s=20, t_max=60, n_agents=60, n_urban=40, n_fossil=800.0, n_food=800.0, n_eco=800.0)


# -- geometry and local rules ---------------------------------------------------

def test_chebyshev_torus():
    assert chebyshev_torus((0, 0), (3, 4), 100) == 4
    assert chebyshev_torus((0, 0), (99, 99), 100) == 1
    assert chebyshev_torus((7, 7), (7, 7), 100) == 0
    with pytest.raises(DomainError):
        chebyshev_torus((0, 100), (0, 0), 100)


@given(st.integers(0, 29), st.integers(0, 29), st.integers(0, 29), st.integers(0, 29))
def test_chebyshev_symmetric_bounded(a, b, c, d):
    s = 30
    x = chebyshev_torus((a, b), (c, d), s)
    assert x == chebyshev_torus((c, d), (a, b), s)
    assert 0 <= x <= s // 2


def test_line_of_sight():
    assert len(line_of_sight((50, 50), 3, 100)) == 49
    los = line_of_sight((5, 5), 1, 100)
    assert len(los) == 9 and (5, 5) in los
    assert len(line_of_sight((0, 9), 3, 10)) == 49
    assert all(chebyshev_torus((0, 9), p, 10) <= 3 for p in line_of_sight((0, 9), 3, 10))


def test_choose_destination():
    F = np.zeros((20, 20))
    E = np.zeros((20, 20))
    F[7, 8] = 5.0
    for u in (0.0, 0.5, 0.999):
        assert choose_destination((5, 5), 0.5, F, E, 3, u) == (7, 8)
    F[:] = 0
    for u in np.linspace(0, 0.999, 17):
        d = choose_destination((5, 5), 0.5, F, E, 3, u)
        assert d != (5, 5) and chebyshev_torus((5, 5), d, 20) == 1
    E[4, 4] = 100.0
    F[6, 6] = 1.0
    assert choose_destination((5, 5), 0.0, F, E, 3, 0.3) == (6, 6)
    assert choose_destination((5, 5), 1.0, F, E, 3, 0.3) == (4, 4)
    # ties are split uniformly across the tied set
    F[:] = 0
    E[:] = 0
    F[3, 3] = F[7, 7] = 2.0
    picks = {choose_destination((5, 5), 0.0, F, E, 3, u) for u in (0.1, 0.9)}
    assert picks == {(3, 3), (7, 7)}


def test_step_function():
    assert step_function(2.0, 2.0, 14.3) == 0.0
    assert step_function(8.15, 2.0, 14.3) == pytest.approx(0.5)
    assert step_function(24.3, 2.0, 14.3) == 1.0


def test_update_lifespan_examples():
    c = SimConfig()
    assert update_lifespan(1, 1, 0, c) == pytest.approx(100.0)
    assert update_lifespan(0, 0, 0, c) == pytest.approx(39.2)
    assert update_lifespan(0, 0, 20, c) == 0.0


@given(st.floats(0, 5), st.floats(0, 5), st.floats(0, 50))
def test_lifespan_clamped(e, f, g):
    v = update_lifespan(e, f, g, SimConfig())
    assert 0.0 <= v <= 100.0


def test_consume():
    assert consume(0.5, 0.3, 1.0, 0.999, 10, 10, 10)[2] is True
    assert consume(0.5, 0.3, 0.0, 0.0, 10, 10, 10)[2] is False
    assert consume(0.5, 0.3, 1.0, 0.2, 0.1, 10, 10)[0] == 0.1
    assert consume(0.5, 0.3, 0.0, 0.2, 0.1, 10, 0.05)[1] == 0.05


def test_convert_involution():
    assert convert(*convert(0.25, 0)) == (0.25, 0)
    a8, g = convert(*convert(0.3, 1))
    assert a8 == pytest.approx(0.3) and g == 1


# -- config ------------------------------------------------------------------

def test_config_round_trip_and_errors():
    c = SimConfig(seed=7, s=30)
    assert parse_config(format_config(c)) == c
    text = "".join(l for l in format_config(c).splitlines(True) if not l.startswith("xi6"))
    with pytest.raises(ConfigError, match="xi6"):
        parse_config(text)
    with pytest.raises(ConfigError, match="alpha3"):
        SimConfig(alpha3=1.5)
    with pytest.raises(ConfigError, match="beta_alpha"):
        SimConfig(beta_alpha=6.0)
    with pytest.raises(ConfigError, match="xi6"):
        SimConfig(xi5=15.0)
    with pytest.raises(ConfigError, match="lambda"):
        parse_config("lambda = 2.5", require_all=False)
    with pytest.raises(ConfigError):
        parse_config("bogus = 1", require_all=False)
    assert parse_config("s = 30", require_all=False).s == 30
    assert c.config_hash() == SimConfig(seed=7, s=30).config_hash() != SimConfig().config_hash()


# -- kernel-level scenarios -------------------------------------------------------

def _call(kernel, agents, s=5, E=None, F=None, draws=None, lam=1, xi=(24, 100, 0.8, 0.6, 2, 14.3)):
    n = len(agents)
    ss = s * s
    ag = _empty_agents(2 * n + 4)
    for k, a in enumerate(agents):
        base = dict(life=100.0, a3=0.0, a4=0.0, a5=0.0, a6=0.1, a7=0.1, a8=0.0, alive=1)
        base.update(a)
        for f, v in base.items():
            ag[f][k] = v
    G = np.zeros(ss, dtype=np.int64)
    for k in range(n):
        G[ag["pi"][k] * s + ag["pj"][k]] += 1
    R = np.full(ss, 10.0)
    E = np.zeros(ss) if E is None else E
    F = np.full(ss, 10.0) if F is None else F
    qF = np.zeros(ss)
    draws = np.full((n, 8), 0.5) if draws is None else np.asarray(draws, dtype=float)
    order = np.arange(n, dtype=np.int64)
    cap = ag["age"].size
    bufs = [np.empty(2 * ss, dtype=np.int64), np.empty(cap, dtype=np.int64), np.empty(cap, dtype=np.int64),
            np.empty(2 * ss, dtype=np.int64)]
    m, fossil = kernel(n, order, draws, *(ag[f] for f in AGENT_FIELDS), G, R, E, F, qF, *bufs, s, lam, *xi, 0)
    return ag, G, m, fossil, qF


@pytest.mark.parametrize("name", list(KERNELS))
def test_lone_cooperator_only_cares(name):
    ag, G, m, _, _ = _call(KERNELS[name], [dict(pi=2, pj=2, a5=1.0)])
    assert ag["cared"][0] == 1 and m == 1
    assert ag["in_e"][0] == pytest.approx(0.1) and ag["in_f"][0] == pytest.approx(0.1)


@pytest.mark.parametrize("name", list(KERNELS))
def test_share_halves_intake(name):
    ag, _, _, _, _ = _call(KERNELS[name], [dict(pi=2, pj=2, a5=1.0), dict(pi=2, pj=2, a5=1.0, a6=0.0, a7=0.0)])
    # agent 0 gives half to agent 1; agent 1 then gives half of its own (zero) take back
    assert ag["in_e"][0] == pytest.approx(0.05) and ag["in_e"][1] == pytest.approx(0.05)


@pytest.mark.parametrize("name", list(KERNELS))
def test_competitor_converts_and_double_flip(name):
    draws = np.full((3, 8), 0.5)
    ag, _, _, _, _ = _call(KERNELS[name], [dict(pi=2, pj=2, a8=0.9, grp=1), dict(pi=2, pj=2, a8=0.2, grp=0, a5=1.0)],
                           draws=draws[:2])
    assert ag["a8"][1] == pytest.approx(0.8) and ag["grp"][1] == 1
    # A converts T and pushes it onto C's site, where C converts it back
    ag, _, _, _, _ = _call(KERNELS[name], [dict(pi=2, pj=2, a8=0.75, grp=1), dict(pi=1, pj=1, a8=0.125, grp=0),
                                           dict(pi=2, pj=2, a8=0.25, grp=0, a5=1.0)],
                           draws=[[0.5] * 5 + [0.0, 0.0, 0.0], [0.5] * 5 + [0.0, 0.0, 0.0], [0.5] * 8])
    assert (ag["pi"][2], ag["pj"][2]) != (2, 2)
    assert ag["a8"][2] == 0.25 and ag["grp"][2] == 0


@pytest.mark.parametrize("name", list(KERNELS))
def test_push_moves_same_group_neighbour(name):
    ag, G, _, _, _ = _call(KERNELS[name], [dict(pi=2, pj=2, grp=0), dict(pi=2, pj=2, grp=0, a5=1.0)],
                           draws=[[0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.0]] + [[0.5] * 8])
    assert (ag["pi"][1], ag["pj"][1]) == (1, 1)
    assert G.reshape(5, 5)[1, 1] == 1 and G.reshape(5, 5)[2, 2] == 1


@pytest.mark.parametrize("name", list(KERNELS))
def test_reproduction_clones(name):
    ag, G, m, _, _ = _call(KERNELS[name], [dict(pi=1, pj=3, a4=1.0, a5=1.0, a8=0.7, a6=0.2)])
    assert m == 2
    assert ag["a8"][1] == 0.7 and ag["a6"][1] == 0.2 and ag["age"][1] == 0
    assert (ag["pi"][1], ag["pj"][1]) == (1, 3) and G.sum() == 2


@pytest.mark.parametrize("name", list(KERNELS))
def test_fossil_take_supply_limited(name):
    E = np.zeros(25)
    E[12] = 0.1
    ag, _, _, fossil, _ = _call(KERNELS[name], [dict(pi=2, pj=2, a8=1.0, a6=0.5)], E=E)
    assert fossil == pytest.approx(0.1) and E[12] == 0.0


@pytest.mark.parametrize("name", list(KERNELS))
def test_crowding_kills(name):
    agents = [dict(pi=0, pj=0, a6=0.0, a7=0.0)] * 20
    ag, G, m, _, _ = _call(KERNELS[name], agents, F=np.zeros(25))
    # with lifespan 0 each agent dies on its own turn while the crowd stays above xi6
    assert ag["alive"][:m].sum() < 20


# -- world dynamics --------------------------------------------------------------

def test_grid_update_examples():
    c = SimConfig(s=5, n_agents=0, n_urban=0, n_fossil=0.0, n_food=0.0, n_eco=0.0, lam=1, t_max=1)
    w = init_world(c)
    w.B[...] = 0.0
    w.B[0, 0] = 5.0
    world_step(w)
    assert w.B[0, 0] == pytest.approx(15.0) and w.n == 0
    c = SimConfig(s=5, n_agents=1, n_urban=0, n_fossil=0.0, n_food=0.0, n_eco=0.0, lam=1, alpha3=0.0,
                  alpha4=0.0, alpha5=0.0)
    w = init_world(c)
    w.B[...] = 0.0
    i, j = w.agents["pi"][0], w.agents["pj"][0]
    w.B[i, j] = 12.0
    world_step(w)
    assert w.B[i, j] == pytest.approx(10.8)


def test_empty_world_fixed_point():
    c = SimConfig(s=10, n_agents=0, t_max=30, n_urban=10, n_fossil=100.0, n_food=50.0, n_eco=50.0, lam=2)
    r = run_simulation(c)
    assert r.t_e == 0 and not r.reached_t_max
    w = init_world(c)
    E0 = w.E.copy()
    for _ in range(30):
        world_step(w)
    assert np.array_equal(w.E, E0) and w.n == 0
    assert w.B.max() <= c.betaK * (1 + c.beta1)


def test_tmax_zero():
    r = run_simulation(SimConfig(t_max=0, **{k: v for k, v in SMALL.items() if k != "t_max"}))
    assert r.t_e == 0 and r.reached_t_max and r.population.size == 1


def test_extinction_bound():
    c = SimConfig(s=10, n_agents=50, n_urban=0, n_fossil=0.0, n_food=0.0, n_eco=0.0, gamma=0.0, alpha4=0.0,
                  xi1=2.0, xi2=5.0, t_max=100, lam=2)
    r = run_simulation(c)
    assert r.t_e <= math.ceil(c.xi2)


@pytest.mark.parametrize("name", list(KERNELS))
def test_world_invariants(name):
    c = SimConfig(seed=3, **SMALL)
    checks = []

    def cb(w):
        assert np.array_equal(w.recount(), w.G)
        assert np.all(w.R >= 0) and np.all(w.R <= c.gamma)
        assert np.all(w.B >= 0) and np.all(w.F >= 0)
        a = w.agent_view()
        assert np.all((a["life"] >= 0) & (a["life"] <= c.xi2))
        assert abs(w.fossil_initial - w.E.sum() - w.fossil_consumed) <= 1e-9 * max(1.0, w.fossil_initial)
        checks.append(w.t)

    r = run_simulation(c, kernel=KERNELS[name], callback=cb)
    assert len(checks) == r.t_e


def test_determinism_and_seed_sensitivity():
    c = SimConfig(seed=11, **SMALL)
    assert run_simulation(c) == run_simulation(c)
    assert run_simulation(c) != run_simulation(c.replace(seed=12))


@pytest.mark.skipif(len(KERNELS) < 2, reason="compiled kernel not built")
def test_backends_identical():
    c = SimConfig(seed=5, **SMALL)
    a = run_simulation(c, kernel=KERNELS["python"])
    b = run_simulation(c, kernel=KERNELS["cython"])
    assert a == b


def test_init_world_layout():
    c = SimConfig(s=30, n_agents=200, n_urban=50, seed=1)
    w = init_world(c)
    assert w.E.sum() == pytest.approx(c.n_fossil)
    assert np.count_nonzero(w.E) == 50
    assert w.B.sum() == pytest.approx(c.n_eco) and w.F.sum() == pytest.approx(c.n_food)
    a = w.agent_view()
    on_urban = np.isin(a["pi"] * 30 + a["pj"], w.urban).sum()
    assert on_urban >= 100
    assert np.all((a["a6"] > 0) & (a["a6"] <= 1))
    assert np.allclose(a["a7"], 1 - np.exp(-5 * a["a6"]))
    assert np.array_equal(a["grp"], (a["a8"] > 0.5).astype(int))


def test_demand_intake_mode_runs():
    c = SimConfig(seed=2, lifespan_intake="demand", **SMALL)
    r = run_simulation(c)
    assert r.population[0] == 60


def test_extinct_runs_compare_equal():
    c = SimConfig(s=10, n_agents=30, n_urban=0, n_fossil=0.0, n_food=0.0, n_eco=0.0, alpha4=0.0, xi2=5.0,
                  xi1=1.0, t_max=50, lam=2, seed=1)
    a, b = run_simulation(c), run_simulation(c)
    assert a.population[-1] == 0 and np.isnan(a.mean_lifespan[-1])
    assert a == b
    for name, k in KERNELS.items():
        assert run_simulation(c, kernel=k) == a

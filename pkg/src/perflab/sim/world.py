"""Toroidal lattice world: state, initialization, one turn and full runs.

Turn order: refill R to gamma, shuffle agents, run the agent phase (move,
reproduce, consume, social action, lifespan, ageing and death), then update
the ecosystem and food grids and drop dead agents from the roster.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from . import _pykernel
from .config import SimConfig

NEIGHBORS = _pykernel.NEIGHBORS
step_function = _pykernel.step_function

AGENT_FIELDS = ("age", "life", "a3", "a4", "a5", "a6", "a7", "a8", "grp", "pi", "pj",
                "alive", "in_e", "in_f", "cared")
_DTYPES = dict(age=np.int64, grp=np.int64, pi=np.int64, pj=np.int64, alive=np.int8, cared=np.int8)


def _empty_agents(cap):
    return {k: np.zeros(cap, dtype=_DTYPES.get(k, np.float64)) for k in AGENT_FIELDS}


@dataclass
class WorldState:
    config: SimConfig
    rng: np.random.Generator
    G: np.ndarray  # agent counts
    B: np.ndarray  # ecosystem richness
    R: np.ndarray  # renewable stock
    E: np.ndarray  # fossil stock
    F: np.ndarray  # food
    agents: dict   # struct of arrays, first n entries live
    n: int
    t: int = 0
    fossil_initial: float = 0.0
    fossil_consumed: float = 0.0
    urban: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def s(self) -> int:
        return self.config.s

    @property
    def population(self) -> int:
        return self.n

    def agent_view(self) -> dict:
        return {k: v[: self.n] for k, v in self.agents.items()}

    def recount(self) -> np.ndarray:
        """Agent counts per site, recomputed from the roster."""
        s = self.s
        g = np.zeros(s * s, dtype=np.int64)
        a = self.agent_view()
        np.add.at(g, a["pi"] * s + a["pj"], 1)
        return g.reshape(s, s)


# -- geometry ---------------------------------------------------------------

def chebyshev_torus(p1, p2, s: int) -> int:
    for c in (*p1, *p2):
        if not 0 <= c < s or int(c) != c:
            raise DomainError(f"coordinate {c} outside [0, {s})")
    d = 0
    for u, v in zip(p1, p2):
        k = abs(int(u) - int(v))
        d = max(d, min(k, s - k))
    return d


def line_of_sight(pos, lam: int, s: int) -> set:
    i, j = pos
    return {((i + di) % s, (j + dj) % s) for di in range(-lam, lam + 1) for dj in range(-lam, lam + 1)}


def choose_destination(pos, a8: float, F, E, lam: int, u: float):
    """Target site for a moving agent, given one uniform draw ``u``.

    Argmax of F + a8*E over the line of sight with a uniform tie-break; a
    random Moore neighbour when everything in sight is empty.
    """
    F = np.asarray(F, dtype=float)
    s = F.shape[0]
    ti, tj, _ = _pykernel.pick_destination(int(pos[0]), int(pos[1]), float(a8), F.ravel().tolist(),
                                           np.asarray(E, dtype=float).ravel().tolist(), s, int(lam), u)
    return ti, tj


def update_lifespan(e, f, density, c: SimConfig) -> float:
    """Lifespan from this turn's intake product and local density, clamped to [0, xi2]."""
    return _pykernel.lifespan_value(float(e), float(f), float(density), c.xi1, c.xi2, c.xi3, c.xi4, c.xi5, c.xi6)


def consume(a6, a7, a8, x, E_site, R_site, F_site):
    """Supply-limited takes. Returns (energy, food, from_fossil)."""
    fossil = a8 > x
    stock = E_site if fossil else R_site
    return min(a6, stock), min(a7, F_site), fossil


def convert(a8, grp):
    return 1.0 - a8, 1 - grp


# -- initialization -----------------------------------------------------------

def _truncated_lognormal(rng, n, mu=-2.88, sigma=1.22):
    out = np.empty(n)
    filled = 0
    while filled < n:
        x = rng.lognormal(mu, sigma, size=2 * (n - filled) + 8)
        x = x[x <= 1.0]
        k = min(x.size, n - filled)
        out[filled:filled + k] = x[:k]
        filled += k
    return out


def _spread(rng, total, cells):
    w = rng.random(cells)
    tot = w.sum()
    return total * w / tot if tot > 0 else np.zeros(cells)


def init_world(config: SimConfig, rng: np.random.Generator | None = None) -> WorldState:
    c = config
    rng = np.random.default_rng(c.seed) if rng is None else rng
    s, ss = c.s, c.s * c.s
    urban = np.sort(rng.choice(ss, size=c.n_urban, replace=False)).astype(np.int64)
    E = np.zeros(ss)
    if c.n_urban:
        E[urban] = c.n_fossil / c.n_urban
    B = _spread(rng, c.n_eco, ss)
    F = _spread(rng, c.n_food, ss)
    R = np.full(ss, float(c.gamma))

    n = c.n_agents
    ag = _empty_agents(max(2 * n, 16))
    n_on_urban = n // 2 if c.n_urban else 0
    sites = np.concatenate([urban[rng.integers(0, max(c.n_urban, 1), size=n_on_urban)] if n_on_urban else
                            np.zeros(0, dtype=np.int64),
                            rng.integers(0, ss, size=n - n_on_urban)]).astype(np.int64)
    ag["pi"][:n] = sites // s
    ag["pj"][:n] = sites % s
    ag["a3"][:n] = c.alpha3
    ag["a4"][:n] = c.alpha4
    ag["a5"][:n] = c.alpha5
    a6 = _truncated_lognormal(rng, n)
    ag["a6"][:n] = a6
    ag["a7"][:n] = 1.0 - np.exp(-5.0 * a6)
    a8 = rng.beta(c.beta_alpha, 6.0 - c.beta_alpha, size=n)
    ag["a8"][:n] = a8
    ag["grp"][:n] = (a8 > 0.5).astype(np.int64)
    ag["life"][:n] = c.xi2
    ag["alive"][:n] = 1
    G = np.zeros(ss, dtype=np.int64)
    np.add.at(G, sites, 1)
    w = WorldState(c, rng, G.reshape(s, s), B.reshape(s, s), R.reshape(s, s), E.reshape(s, s),
                   F.reshape(s, s), ag, n, fossil_initial=float(E.sum()), urban=urban)
    return w


# -- dynamics -------------------------------------------------------------------

def _ensure_capacity(w: WorldState):
    cap = w.agents["age"].size
    if cap >= 2 * w.n:
        return
    new = _empty_agents(max(2 * w.n, 2 * cap))
    for k, v in w.agents.items():
        new[k][: w.n] = v[: w.n]
    w.agents = new


def world_step(w: WorldState, kernel=None) -> WorldState:
    """Advance one turn in place (and return the world)."""
    from . import agent_phase as default_kernel

    kernel = default_kernel if kernel is None else kernel
    c, s = w.config, w.config.s
    ss = s * s
    w.R[...] = c.gamma
    n = w.n
    _ensure_capacity(w)
    order = w.rng.permutation(n).astype(np.int64)
    draws = w.rng.random((n, _pykernel.NDRAWS))
    F0 = w.F.copy()
    qF = np.zeros(ss)
    ag = w.agents
    ag["in_e"][:] = 0.0
    ag["in_f"][:] = 0.0
    ag["cared"][:] = 0
    cap = ag["age"].size
    head = np.empty(2 * ss, dtype=np.int64)
    cnt = np.empty(2 * ss, dtype=np.int64)
    nxt = np.empty(cap, dtype=np.int64)
    prv = np.empty(cap, dtype=np.int64)
    m, fossil = kernel(n, order, draws, ag["age"], ag["life"], ag["a3"], ag["a4"], ag["a5"], ag["a6"],
                       ag["a7"], ag["a8"], ag["grp"], ag["pi"], ag["pj"], ag["alive"], ag["in_e"],
                       ag["in_f"], ag["cared"], w.G.reshape(-1), w.R.reshape(-1), w.E.reshape(-1),
                       w.F.reshape(-1), qF, head, nxt, prv, cnt, s, int(c.lam),
                       c.xi1, c.xi2, c.xi3, c.xi4, c.xi5, c.xi6, 0 if c.lifespan_intake == "obtained" else 1)
    w.fossil_consumed += fossil

    # grid dynamics
    live = ag["alive"][:m] == 1
    sites = (ag["pi"][:m] * s + ag["pj"][:m])[live]
    weight = 1.0 - c.omega * ag["cared"][:m][live]
    destroy = np.zeros(ss)
    np.add.at(destroy, sites, c.beta2 * weight)
    B = w.B.reshape(-1)
    B_old = B.copy()
    gate = (B_old > 0) & (B_old < c.betaK)
    Rf, Ef = w.R.reshape(-1), w.E.reshape(-1)
    F_new = c.phi1 * F0.reshape(-1) + c.phi2 * (Ef * B_old * Rf) + c.phi3 * (B_old * Rf) - qF
    B_new = B_old + np.where(gate, c.beta1 * B_old, 0.0) - destroy
    w.B[...] = np.maximum(B_new, 0.0).reshape(s, s)
    w.F[...] = np.maximum(F_new, 0.0).reshape(s, s)

    # compact the roster
    keep = np.nonzero(live)[0]
    k = keep.size
    for name, v in ag.items():
        v[:k] = v[keep]
    w.n = k
    w.t += 1
    return w


@dataclass
class RunSummary:
    t_e: int
    reached_t_max: bool
    population: np.ndarray       # index t = after t turns (0 = initial)
    mean_lifespan: np.ndarray
    sum_E: np.ndarray
    sum_B: np.ndarray
    sum_F: np.ndarray
    group0: np.ndarray
    group1: np.ndarray
    occupied_sites: np.ndarray
    max_stack: np.ndarray
    fossil_initial: float
    fossil_consumed: float
    config_hash: str = ""

    COLUMNS = ("t", "population", "mean_lifespan", "sum_E", "sum_B", "sum_F", "group0", "group1",
               "occupied_sites", "max_stack")

    def rows(self):
        for t in range(self.population.size):
            yield (t, int(self.population[t]), float(self.mean_lifespan[t]), float(self.sum_E[t]),
                   float(self.sum_B[t]), float(self.sum_F[t]), int(self.group0[t]), int(self.group1[t]),
                   int(self.occupied_sites[t]), int(self.max_stack[t]))

    def __eq__(self, other):
        if not isinstance(other, RunSummary):
            return NotImplemented
        # mean lifespan is NaN once the population is extinct; NaN == NaN here
        series = ("population", "mean_lifespan", "sum_E", "sum_B", "sum_F", "group0", "group1",
                  "occupied_sites", "max_stack")
        return (self.t_e == other.t_e and self.reached_t_max == other.reached_t_max
                and all(np.array_equal(getattr(self, k), getattr(other, k), equal_nan=True) for k in series)
                and self.fossil_initial == other.fossil_initial and self.fossil_consumed == other.fossil_consumed)


def _snapshot(w: WorldState):
    a = w.agent_view()
    return (w.n, float(a["life"].mean()) if w.n else float("nan"), float(w.E.sum()), float(w.B.sum()),
            float(w.F.sum()), int(np.count_nonzero(a["grp"] == 0)), int(np.count_nonzero(a["grp"] == 1)),
            int(np.count_nonzero(w.G)), int(w.G.max()) if w.G.size else 0)


def run_simulation(config: SimConfig, kernel=None, callback=None) -> RunSummary:
    """Run until extinction or t_max. ``callback(world)`` is called after every turn."""
    w = init_world(config)
    snaps = [_snapshot(w)]
    while w.t < config.t_max and w.n > 0:
        world_step(w, kernel)
        snaps.append(_snapshot(w))
        if callback is not None:
            callback(w)
    cols = list(zip(*snaps))
    ints = lambda x: np.asarray(x, dtype=np.int64)
    flts = lambda x: np.asarray(x, dtype=float)
    return RunSummary(
        t_e=w.t, reached_t_max=bool(w.n > 0 and w.t >= config.t_max),
        population=ints(cols[0]), mean_lifespan=flts(cols[1]), sum_E=flts(cols[2]), sum_B=flts(cols[3]),
        sum_F=flts(cols[4]), group0=ints(cols[5]), group1=ints(cols[6]), occupied_sites=ints(cols[7]),
        max_stack=ints(cols[8]), fossil_initial=w.fossil_initial, fossil_consumed=w.fossil_consumed,
        config_hash=config.config_hash(),
    )

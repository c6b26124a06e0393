"""Three-dimensional initialization sweeps over (alpha3, alpha5, beta_alpha)."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .config import SimConfig
from .world import run_simulation

SWEEP_HEADER = ("node_idx", "alpha3", "alpha5", "beta_alpha", "run", "seed", "t_e", "reached_tmax")
NODE_HEADER = ("node_idx", "alpha3", "alpha5", "beta_alpha", "runs", "mean_t_e", "sd_t_e", "n_tmax")


@dataclass(frozen=True)
class SweepRow:
    node_idx: int
    alpha3: float
    alpha5: float
    beta_alpha: float
    run: int
    seed: int
    t_e: int
    reached_tmax: bool

    def as_tuple(self):
        return (self.node_idx, self.alpha3, self.alpha5, self.beta_alpha, self.run, self.seed,
                self.t_e, int(self.reached_tmax))


def mesh_axes(m: int):
    return np.linspace(0.0, 1.0, m), np.linspace(0.0, 1.0, m), np.linspace(1.0, 5.0, m)


def run_seed(master: int, node_idx: int, run: int) -> int:
    """Per-run seed from a counter scheme; independent of scheduling."""
    return int(np.random.SeedSequence([master, node_idx, run]).generate_state(1)[0])


def sweep_tasks(base: SimConfig, m: int, n: int):
    if m < 2:
        raise DomainError("need at least 2 nodes per dimension")
    if n < 1:
        raise DomainError("need at least 1 run per node")
    a3s, a5s, bas = mesh_axes(m)
    tasks = []
    for i3, a3 in enumerate(a3s):
        for i5, a5 in enumerate(a5s):
            for ia, ba in enumerate(bas):
                node = (i3 * m + i5) * m + ia
                for r in range(n):
                    tasks.append((node, float(a3), float(a5), float(ba), r, run_seed(base.seed, node, r)))
    return tasks


def _run_task(args):
    base, (node, a3, a5, ba, r, seed) = args
    cfg = base.replace(alpha3=a3, alpha5=a5, beta_alpha=ba, seed=seed)
    res = run_simulation(cfg)
    return SweepRow(node, a3, a5, ba, r, seed, res.t_e, res.reached_t_max)


def mesh_sweep(base: SimConfig, m: int, n: int, jobs: int = 1) -> list[SweepRow]:
    """m**3 nodes times n seeded runs, rows ordered by (node, run)."""
    tasks = [(base, t) for t in sweep_tasks(base, m, n)]
    if jobs <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def node_summary(rows: list[SweepRow]):
    """Per node: (node_idx, alpha3, alpha5, beta_alpha, runs, mean t_e, sd t_e, n reaching t_max)."""
    by = {}
    for r in rows:
        by.setdefault(r.node_idx, []).append(r)
    out = []
    for node in sorted(by):
        rs = by[node]
        te = np.array([r.t_e for r in rs], dtype=float)
        out.append((node, rs[0].alpha3, rs[0].alpha5, rs[0].beta_alpha, len(rs), float(te.mean()),
                    float(te.std(ddof=1)) if te.size > 1 else 0.0, sum(r.reached_tmax for r in rs)))
    return out

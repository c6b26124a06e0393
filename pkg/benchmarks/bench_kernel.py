"""Compare the compiled and pure-Python agent kernels on identical runs.

    python3 benchmarks/bench_kernel.py [--s 50] [--turns 200] [--repeat 3]
"""

import argparse
import time

from perflab.sim import BACKEND, SimConfig, _pykernel, run_simulation


def best_of(cfg, kernel, repeat):
    times, res = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = run_simulation(cfg, kernel=kernel)
        times.append(time.perf_counter() - t0)
    return min(times), res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--s", type=int, default=50)
    ap.add_argument("--turns", type=int, default=200)
    ap.add_argument("--agents", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args()
    cfg = SimConfig(s=a.s, t_max=a.turns, n_agents=a.agents, seed=a.seed, alpha4=0.01)
    t_py, r_py = best_of(cfg, _pykernel.agent_phase, a.repeat)
    agent_turns = int(r_py.population[:-1].sum())
    print(f"python  {t_py:8.3f} s  {agent_turns / t_py:12.0f} agent-turns/s  ({r_py.t_e} turns)")
    if BACKEND != "cython":
        print("compiled kernel not built; only the fallback was timed")
        return
    from perflab.sim import _kernel
    t_cy, r_cy = best_of(cfg, _kernel.agent_phase, a.repeat)
    print(f"cython  {t_cy:8.3f} s  {agent_turns / t_cy:12.0f} agent-turns/s")
    print(f"speed-up {t_py / t_cy:.1f}x, identical summaries: {r_py == r_cy}")


if __name__ == "__main__":
    main()

"""Multi-agent energy, food and ecosystem simulator on a toroidal lattice.

The agent phase runs in a compiled kernel when the extension is built and
falls back to a pure-Python implementation otherwise. Set
``PERFLAB_KERNEL=python`` to force the fallback.
"""

import os

from . import _pykernel

try:
    if os.environ.get("PERFLAB_KERNEL", "").lower() == "python":
        raise ImportError("python kernel requested")
    from ._kernel import agent_phase
    BACKEND = "cython"
except ImportError:
    agent_phase = _pykernel.agent_phase
    BACKEND = "python"

from .config import SimConfig, format_config, load_config, parse_config  # noqa: E402
from .world import (RunSummary, WorldState, chebyshev_torus, choose_destination, consume,  # noqa: E402
                    init_world, line_of_sight, run_simulation, step_function, update_lifespan,
                    world_step)

__all__ = ["BACKEND", "agent_phase", "SimConfig", "parse_config", "load_config", "format_config",
           "RunSummary", "WorldState", "chebyshev_torus", "choose_destination", "consume", "init_world",
           "line_of_sight", "run_simulation", "step_function", "update_lifespan", "world_step"]

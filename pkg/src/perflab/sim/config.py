"""Simulator configuration: defaults, validation and the key=value file format."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from ..errors import ConfigError


@dataclass(frozen=True)
class SimConfig:
    gamma: float = 10.0       # renewable production per site and turn
    lam: int = 3              # line of sight (file key: lambda)
    omega: float = 0.5        # care: fraction of destruction avoided
    beta1: float = 2.0        # ecosystem renewal rate
    beta2: float = 1.2        # destruction per agent
    betaK: float = 10.0       # ecosystem capacity gating growth
    phi1: float = 0.1         # food carry-over
    phi2: float = 0.6         # food production from fossil, ecosystem and renewable
    phi3: float = 0.001       # food production from ecosystem and renewable
    xi1: float = 24.0         # minimum lifespan
    xi2: float = 100.0        # maximum lifespan
    xi3: float = 0.8          # weight of consumption on lifespan
    xi4: float = 0.6          # weight of density on lifespan
    xi5: float = 2.0          # density below which crowding has no effect
    xi6: float = 14.3         # density above which crowding is maximal
    s: int = 100
    t_max: int = 1500
    n_agents: int = 100
    n_fossil: float = 10000.0
    n_food: float = 10000.0
    n_eco: float = 10000.0
    n_urban: int = 422
    seed: int = 0
    alpha3: float = 0.5       # move probability
    alpha4: float = 0.02      # reproduction probability
    alpha5: float = 0.5       # cooperation probability
    beta_alpha: float = 3.0   # first shape of the energy-profile Beta law (second = 6 - it)
    lifespan_intake: str = "obtained"   # or "demand"

    def __post_init__(self):
        validate(self)

    def replace(self, **kw) -> "SimConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d

    def config_hash(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()[:16]


# file key -> attribute
_KEYMAP = {f.name: f.name for f in fields(SimConfig)}
_KEYMAP["lambda"] = "lam"
del _KEYMAP["lam"]
OPTIONAL_KEYS = ("seed", "lifespan_intake")
REQUIRED_KEYS = tuple(k for k in _KEYMAP if k not in OPTIONAL_KEYS)
_INT_KEYS = {"lam", "s", "t_max", "n_agents", "n_urban", "seed"}


def _check(cond, key, msg):
    if not cond:
        raise ConfigError(f"{key}: {msg}", key)


def validate(c: SimConfig) -> None:
    for k in ("alpha3", "alpha4", "alpha5", "xi3", "xi4", "omega", "phi1"):
        v = getattr(c, k)
        _check(0.0 <= v <= 1.0, k, f"must lie in [0, 1], got {v}")
    _check(0 < c.beta_alpha < 6, "beta_alpha", f"must lie in (0, 6), got {c.beta_alpha}")
    _check(c.xi5 < c.xi6, "xi6", "xi5 must be smaller than xi6")
    _check(0 <= c.xi1 <= c.xi2, "xi1", "need 0 <= xi1 <= xi2")
    _check(c.s >= 3, "s", "lattice side must be at least 3")
    _check(c.lam >= 1, "lambda", "line of sight must be at least 1")
    _check(c.lam == int(c.lam), "lambda", "line of sight must be an integer")
    _check(c.s >= 2 * c.lam + 1, "s", "lattice side must be at least 2*lambda + 1")
    _check(c.t_max >= 0, "t_max", "must be non-negative")
    _check(c.n_agents >= 0, "n_agents", "must be non-negative")
    _check(0 <= c.n_urban <= c.s * c.s, "n_urban", "must lie in [0, s*s]")
    _check(c.n_urban > 0 or c.n_fossil == 0, "n_urban", "fossil stock needs at least one urban patch")
    for k in ("gamma", "beta1", "beta2", "betaK", "phi2", "phi3", "n_fossil", "n_food", "n_eco"):
        _check(getattr(c, k) >= 0, k, "must be non-negative")
    _check(c.lifespan_intake in ("obtained", "demand"), "lifespan_intake", "must be 'obtained' or 'demand'")


def parse_config(text: str, base: SimConfig | None = None, require_all: bool = True) -> SimConfig:
    """Parse flat ``key = value`` lines (``#`` starts a comment).

    Every table key is required unless ``require_all`` is false, in which
    case missing keys keep the values of ``base`` (defaults if omitted).
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value", None)
        key, val = (p.strip() for p in line.split("=", 1))
        if key not in _KEYMAP:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", key)
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}", key)
        values[key] = val
    if require_all:
        missing = [k for k in REQUIRED_KEYS if k not in values]
        if missing:
            raise ConfigError(f"missing key(s): {', '.join(missing)}", missing[0])
    kw = {}
    for key, val in values.items():
        attr = _KEYMAP[key]
        try:
            if attr == "lifespan_intake":
                kw[attr] = val
            elif attr in _INT_KEYS:
                f = float(val)
                if f != int(f):
                    raise ValueError
                kw[attr] = int(f)
            else:
                kw[attr] = float(val)
        except ValueError:
            raise ConfigError(f"{key}: invalid value {val!r}", key) from None
    return replace(base or SimConfig(), **kw) if base is not None else SimConfig(**kw)


def load_config(path, require_all: bool = True) -> SimConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"), require_all=require_all)


def format_config(c: SimConfig) -> str:
    d = c.to_dict()
    order = [k for k in _KEYMAP]
    return "".join(f"{k} = {d[k]}\n" for k in order)

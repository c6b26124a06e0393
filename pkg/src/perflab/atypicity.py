"""Atypicity of yearly best performances.

Three descriptors per yearly best: distance to the other nine of the top 10
(d1), years until it is bettered (d2) and its leverage on the spread of all
top-10 marks of the event (d3). Each is min-max scaled within a discipline and
combined as the Euclidean norm A.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError, PerflabWarning
from .series import PerformanceSeries


@dataclass(frozen=True)
class YearTop10:
    event_id: str
    year: int
    values: tuple[float, ...]

    def __post_init__(self):
        v = tuple(float(x) for x in self.values)
        if len(v) != 10:
            raise DomainError(f"{self.event_id} {self.year}: exactly 10 values required, got {len(v)}")
        if min(v) <= 0:
            raise DomainError("values must be positive")
        if any(a < b for a, b in zip(v, v[1:])):
            raise DomainError("values must be sorted in descending order")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class AtypicityRecord:
    event_id: str
    year: int
    d1: float
    d2: float
    d2_censored: bool
    d3: float
    u1: float = 0.0
    u2: float = 0.0
    u3: float = 0.0
    A: float = 0.0
    top5_d1: bool = False
    top5_d2: bool = False
    top5_d3: bool = False


def descriptor_d1(top10: YearTop10) -> float:
    v = np.asarray(top10.values)
    peers = v[1:].mean()
    d = (v[0] - peers) / peers
    if d < 0:
        warnings.warn(f"{top10.event_id} {top10.year}: best below peer mean; d1 floored at 0",
                      PerflabWarning, stacklevel=2)
        return 0.0
    return float(d)


def descriptor_d2(event_history: dict, year: int) -> tuple[float, bool]:
    """Calendar years until a strictly better yearly best; censored at the last year."""
    if year not in event_history:
        raise KeyError(f"year {year} not in history")
    best = event_history[year]
    later = sorted(y for y in event_history if y > year)
    for y in later:
        if event_history[y] > best:
            return float(y - year), False
    last = max(event_history)
    return float(last - year), True


def descriptor_d3(event_values, bp_value: float) -> float:
    """Relative increase of the standard deviation caused by including the best.

    ``event_values`` contains the best itself; one occurrence is removed.
    """
    v = np.asarray(event_values, dtype=float)
    if v.size < 20:
        raise InsufficientDataError("at least 20 values are required")
    idx = np.nonzero(v == bp_value)[0]
    if idx.size == 0:
        raise DomainError("best value not found among the event values")
    without = np.delete(v, idx[0])
    s_without = np.std(without)
    if s_without == 0:
        raise DomainError("zero spread without the best value")
    return float(max(0.0, (np.std(v) - s_without) / s_without))


def _minmax(values, name):
    v = np.asarray(values, dtype=float)
    lo, hi = v.min(), v.max()
    if hi == lo:
        warnings.warn(f"descriptor {name} is constant; uniformized to 0", PerflabWarning, stacklevel=3)
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def atypicity_A(records) -> tuple[list[AtypicityRecord], dict[int, float]]:
    """Uniformize descriptors over one discipline and flag the top 5%.

    Returns the completed records and the mean A per year.
    """
    records = list(records)
    if len(records) < 20:
        raise InsufficientDataError("at least 20 best-performance records are required")
    d = {k: np.array([getattr(r, k) for r in records], dtype=float) for k in ("d1", "d2", "d3")}
    u = {k: _minmax(d[k], k) for k in d}
    thr = {k: np.percentile(d[k], 95) for k in d}
    A = np.sqrt(u["d1"] ** 2 + u["d2"] ** 2 + u["d3"] ** 2)
    out = []
    for i, r in enumerate(records):
        out.append(AtypicityRecord(
            r.event_id, r.year, r.d1, r.d2, r.d2_censored, r.d3,
            float(u["d1"][i]), float(u["d2"][i]), float(u["d3"][i]), float(A[i]),
            bool(d["d1"][i] >= thr["d1"]), bool(d["d2"][i] >= thr["d2"]), bool(d["d3"][i] >= thr["d3"]),
        ))
    by_year = defaultdict(list)
    for r in out:
        by_year[r.year].append(r.A)
    yearly = {y: float(np.mean(v)) for y, v in sorted(by_year.items())}
    return out, yearly


def top10_from_series(series: PerformanceSeries) -> list[YearTop10]:
    """Group a listing into yearly top 10s, oriented so larger is better.

    Chronometric marks are inverted (1/time is proportional to speed).
    Years with fewer than 10 marks are skipped.
    """
    by_year = defaultdict(list)
    for m in series.marks:
        by_year[m.date.year].append(1.0 / m.value if series.meta.chronometric else m.value)
    out = []
    for y in sorted(by_year):
        vals = sorted(by_year[y], reverse=True)
        if len(vals) >= 10:
            out.append(YearTop10(series.meta.event_id, y, tuple(vals[:10])))
    return out


def event_descriptors(tops: list[YearTop10]) -> list[AtypicityRecord]:
    """d1, d2 and d3 for every year of one event."""
    if not tops:
        return []
    history = {t.year: t.values[0] for t in tops}
    pool = np.concatenate([t.values for t in tops])
    out = []
    for t in tops:
        d2, cens = descriptor_d2(history, t.year)
        out.append(AtypicityRecord(t.event_id, t.year, descriptor_d1(t), d2, cens,
                                   descriptor_d3(pool, t.values[0])))
    return out

"""Performance series data model, CSV ingestion and descriptive indicators."""

from __future__ import annotations

import csv
import datetime as dt
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import signal

from .errors import CSVFormatError, DomainError, PerflabWarning

UNITS = ("seconds", "meters", "kilometers", "kilograms", "rating")
RECORD_HEADER = ("event_id", "discipline", "chronometric", "unit", "date", "value", "performer_id")
CAREER_HEADER = ("athlete_id", "birth_date", "performance_date", "value")
LIFESPAN_HEADER = ("person_id", "birth_date", "death_date")


@dataclass(frozen=True)
class EventMeta:
    event_id: str
    discipline: str
    chronometric: bool
    unit: str

    def __post_init__(self):
        if not self.event_id:
            raise DomainError("event_id must be non-empty")
        if self.unit not in UNITS:
            raise DomainError(f"unknown unit {self.unit!r}; expected one of {', '.join(UNITS)}")


@dataclass(frozen=True)
class Mark:
    date: dt.date
    value: float
    performer_id: str | None = None

    def __post_init__(self):
        if not (self.value > 0 and np.isfinite(self.value)):
            raise DomainError(f"mark value must be positive, got {self.value}")

    @property
    def year(self) -> float:
        """Decimal year of the mark date."""
        return decimal_year(self.date)


@dataclass(frozen=True)
class PerformanceSeries:
    """Ordered marks of one event.

    With ``record=True`` the values must strictly improve in the event's
    polarity (smaller for chronometric events, larger otherwise).
    """

    meta: EventMeta
    marks: tuple[Mark, ...]
    record: bool = True

    def __post_init__(self):
        object.__setattr__(self, "marks", tuple(self.marks))
        for prev, nxt in zip(self.marks, self.marks[1:]):
            if nxt.date < prev.date:
                raise DomainError(f"{self.meta.event_id}: dates must be non-decreasing")
            if self.record and not improves(prev.value, nxt.value, self.meta.chronometric):
                raise DomainError(
                    f"{self.meta.event_id}: mark {nxt.value} on {nxt.date} does not improve on {prev.value}"
                )

    def __len__(self):
        return len(self.marks)

    @property
    def values(self) -> np.ndarray:
        return np.array([m.value for m in self.marks], dtype=float)

    @property
    def years(self) -> np.ndarray:
        return np.array([m.year for m in self.marks], dtype=float)

    def subseries(self, start: int, end: int) -> "PerformanceSeries":
        """Marks ``start..end`` inclusive."""
        return PerformanceSeries(self.meta, self.marks[start:end + 1], self.record)


@dataclass(frozen=True)
class AgeTaggedMark:
    age: float
    value: float
    year: int

    def __post_init__(self):
        if self.age < 0:
            raise DomainError("age must be non-negative")
        if not self.value > 0:
            raise DomainError("value must be positive")


def improves(prev: float, nxt: float, chronometric: bool) -> bool:
    return nxt < prev if chronometric else nxt > prev


def decimal_year(d: dt.date) -> float:
    start = dt.date(d.year, 1, 1)
    days = (dt.date(d.year + 1, 1, 1) - start).days
    return d.year + (d - start).days / days


# --- indicators -------------------------------------------------------------

def exact_age(birth: dt.date, performance: dt.date) -> float:
    """Age in years as dY + dM/12 + dD/365.25 with signed component differences."""
    if performance < birth:
        raise DomainError(f"performance date {performance} precedes birth date {birth}")
    dy = performance.year - birth.year
    dm = performance.month - birth.month
    dd = performance.day - birth.day
    return dy + dm / 12.0 + dd / 365.25


def lambda_indicator(new_wr_count: int, official_event_count: int) -> float:
    """Annual ratio of new records to the number of official events."""
    if official_event_count < 1:
        raise DomainError("official event count must be at least 1")
    if new_wr_count < 0:
        raise DomainError("record count must be non-negative")
    return new_wr_count / official_event_count


def kappa_step(wr_prev: float, wr_next: float) -> float:
    """Relative improvement of a record over its predecessor."""
    if not wr_prev > 0:
        raise DomainError(f"previous record must be positive, got {wr_prev}")
    return abs(wr_next - wr_prev) / wr_prev


def normalize_time(t, t_i: float, t_f: float):
    """Map ``t`` from [t_i, t_f] onto [0, 1]."""
    if not t_f > t_i:
        raise DomainError(f"t_f ({t_f}) must exceed t_i ({t_i})")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < t_i) or np.any(t_arr > t_f):
        raise DomainError(f"time outside [{t_i}, {t_f}]")
    out = (t_arr - t_i) / (t_f - t_i)
    return float(out) if out.ndim == 0 else out


def wheel_to_speed(revolutions_per_day: float) -> float:
    """Convert wheel revolutions per day to mean running speed (m/s).

    Assumes 0.7215 m per revolution and 16 h of activity per day.
    """
    if revolutions_per_day < 0:
        raise DomainError("revolutions must be non-negative")
    return 0.7215 * revolutions_per_day / (16 * 3600)


def smooth_lowpass(series, normalized_cutoff: float = 0.1) -> np.ndarray:
    """Zero-phase second-order Butterworth low-pass (display smoothing)."""
    x = np.asarray(series, dtype=float)
    if x.size < 5:
        raise DomainError("series needs at least 5 values")
    if not 0 < normalized_cutoff < 1:
        raise DomainError("normalized cutoff must lie in (0, 1)")
    b, a = signal.butter(2, normalized_cutoff)
    return signal.filtfilt(b, a, x, padlen=min(3 * max(len(a), len(b)), x.size - 1))


def kappa_series(series: PerformanceSeries) -> np.ndarray:
    v = series.values
    return np.array([kappa_step(p, n) for p, n in zip(v[:-1], v[1:])])


def lambda_by_year(all_series) -> list[tuple[int, int, int, float]]:
    """(year, new records, active events, lambda) for every year in range.

    An event counts as official from the year of its first listed mark.
    """
    all_series = list(all_series)
    if not all_series:
        return []
    first = {s.meta.event_id: min(m.date.year for m in s.marks) for s in all_series if s.marks}
    counts: dict[int, int] = {}
    for s in all_series:
        for m in s.marks:
            counts[m.date.year] = counts.get(m.date.year, 0) + 1
    lo, hi = min(first.values()), max(counts)
    rows = []
    for y in range(lo, hi + 1):
        n_events = sum(1 for f in first.values() if f <= y)
        n_new = counts.get(y, 0)
        rows.append((y, n_new, n_events, lambda_indicator(n_new, n_events)))
    return rows


# --- CSV ingestion ------------------------------------------------------------

def _parse_date(text: str, row: int, name: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise CSVFormatError(f"invalid {name} {text!r}", row) from None


def _parse_float(text: str, row: int, name: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise CSVFormatError(f"invalid {name} {text!r}", row) from None
    if not np.isfinite(v):
        raise CSVFormatError(f"non-finite {name}", row)
    return v


def _parse_bool(text: str, row: int) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "t", "y"):
        return True
    if t in ("0", "false", "no", "f", "n"):
        return False
    raise CSVFormatError(f"invalid chronometric flag {text!r}", row)


def _read_rows(path, header):
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            head = next(reader)
        except StopIteration:
            raise CSVFormatError("empty file", 1) from None
        head = [h.strip() for h in head]
        missing = [h for h in header if h not in head]
        if missing:
            raise CSVFormatError(f"missing column(s) {', '.join(missing)}", 1)
        idx = [head.index(h) for h in header]
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) != len(head):
                raise CSVFormatError(f"expected {len(head)} fields, got {len(raw)}", lineno)
            yield lineno, [raw[i].strip() for i in idx]


def read_records(path, record: bool = True) -> dict[str, PerformanceSeries]:
    """Read a record-series CSV into one series per event.

    Marks are sorted by date. For record series, a mark tying its predecessor
    is dropped with a warning; any other non-improving mark is an error.
    With ``record=False`` (top-10 listings) no polarity check is made.
    """
    metas: dict[str, EventMeta] = {}
    marks: dict[str, list[tuple[dt.date, int, Mark]]] = {}
    for lineno, (eid, disc, chrono, unit, date, value, perf) in _read_rows(path, RECORD_HEADER):
        if not eid:
            raise CSVFormatError("empty event_id", lineno)
        try:
            meta = EventMeta(eid, disc, _parse_bool(chrono, lineno), unit)
        except DomainError as exc:
            raise CSVFormatError(str(exc), lineno) from None
        if metas.setdefault(eid, meta) != meta:
            raise CSVFormatError(f"event {eid} metadata differs from earlier rows", lineno)
        v = _parse_float(value, lineno, "value")
        if v <= 0:
            raise CSVFormatError(f"value must be positive, got {v}", lineno)
        mark = Mark(_parse_date(date, lineno, "date"), v, perf or None)
        marks.setdefault(eid, []).append((mark.date, lineno, mark))

    out = {}
    for eid, items in marks.items():
        items.sort(key=lambda it: (it[0], it[1]))
        meta = metas[eid]
        kept: list[Mark] = []
        for _, lineno, m in items:
            if record and kept:
                prev = kept[-1].value
                if m.value == prev:
                    warnings.warn(f"{eid}: tied mark {m.value} on {m.date} dropped (line {lineno})",
                                  PerflabWarning, stacklevel=2)
                    continue
                if not improves(prev, m.value, meta.chronometric):
                    raise CSVFormatError(f"{eid}: mark {m.value} does not improve on {prev}", lineno)
            kept.append(m)
        out[eid] = PerformanceSeries(meta, tuple(kept), record)
    return out


def read_career(path) -> dict[str, list[AgeTaggedMark]]:
    """Read a career CSV into age-tagged marks per athlete."""
    out: dict[str, list[AgeTaggedMark]] = {}
    for lineno, (aid, birth, perf, value) in _read_rows(path, CAREER_HEADER):
        b = _parse_date(birth, lineno, "birth_date")
        p = _parse_date(perf, lineno, "performance_date")
        v = _parse_float(value, lineno, "value")
        try:
            out.setdefault(aid, []).append(AgeTaggedMark(exact_age(b, p), v, p.year))
        except DomainError as exc:
            raise CSVFormatError(str(exc), lineno) from None
    return out


def read_lifespans(path) -> np.ndarray:
    """Read ``person_id,birth_date,death_date`` rows as (birth year, lifespan) points."""
    pts = []
    for lineno, (_, birth, death) in _read_rows(path, LIFESPAN_HEADER):
        b = _parse_date(birth, lineno, "birth_date")
        d = _parse_date(death, lineno, "death_date")
        try:
            pts.append((decimal_year(b), exact_age(b, d)))
        except DomainError as exc:
            raise CSVFormatError(str(exc), lineno) from None
    return np.array(pts, dtype=float).reshape(-1, 2)


def write_records(path, series_list) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_HEADER)
        for s in series_list:
            for m in s.marks:
                w.writerow([s.meta.event_id, s.meta.discipline, int(s.meta.chronometric),
                            s.meta.unit, m.date.isoformat(), repr(m.value), m.performer_id or ""])

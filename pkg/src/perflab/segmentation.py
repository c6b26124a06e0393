"""Record-series segmentation into progression periods, gains and drops."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PerflabWarning
from .fitting import FitResult, lm_fit
from .models import exp_wr_fixed_delta
from .series import PerformanceSeries

MIN_MARKS = 3
MIN_YEARS = 6.0
# adjusted R2 differences below this are treated as a plateau
R2_TOL = 1e-10


@dataclass(frozen=True)
class Period:
    start_index: int
    end_index: int
    fit: FitResult | None
    years: tuple[float, float]

    @property
    def n_marks(self) -> int:
        return self.end_index - self.start_index + 1

    @property
    def delta(self) -> float:
        return self.fit.meta["delta"]

    @property
    def a(self) -> float:
        return float(self.fit.params[0])

    @property
    def b(self) -> float:
        return float(self.fit.params[1])

    def exp_params(self) -> tuple[float, float, float]:
        return (self.delta, self.a, self.b)


@dataclass(frozen=True)
class PeriodSegmentation:
    series: PerformanceSeries
    periods: tuple[Period, ...]

    @property
    def boundaries(self) -> list[int]:
        """Index of the last mark of every period but the final one."""
        return [p.end_index for p in self.periods[:-1]]

    @property
    def last(self) -> Period:
        return self.periods[-1]


def fit_window(years, values) -> FitResult:
    """Fit the exponential on normalised time with the amplitude fixed to first - last."""
    years = np.asarray(years, dtype=float)
    values = np.asarray(values, dtype=float)
    t = (years - years[0]) / (years[-1] - years[0])
    spec = exp_wr_fixed_delta(values[0] - values[-1])
    return lm_fit(spec, t, values)


def _window_r2(years, values, i, j) -> float:
    if j - i + 1 <= 3 or years[j] <= years[i]:
        return float("nan")
    f = fit_window(years[i:j + 1], values[i:j + 1])
    return f.adj_r2


def _admissible(years, i, j, min_marks, min_years) -> bool:
    return j - i + 1 >= min_marks and years[j] - years[i] >= min_years


def split_periods(series: PerformanceSeries, min_marks: int = MIN_MARKS,
                  min_years: float = MIN_YEARS) -> PeriodSegmentation:
    """Greedy forward split on strict local maxima of the adjusted R2 sequence.

    The window of the current period starts with three marks and grows one
    mark at a time. When the adjusted R2 of the exponential fit peaks (strictly
    above both neighbours) at some end mark, the period closes there, provided
    the closed period and the remaining tail both keep at least ``min_marks``
    marks and ``min_years`` years. The sequence restarts with each period.
    """
    years, values = series.years, series.values
    n = len(values)
    if n < min_marks or (n and years[-1] - years[0] < min_years):
        warnings.warn(f"{series.meta.event_id}: series too short to split; single period kept",
                      PerflabWarning, stacklevel=2)
        fit = fit_window(years, values) if n >= 3 and years[-1] > years[0] else None
        yrs = (float(years[0]), float(years[-1])) if n else (float("nan"), float("nan"))
        return PeriodSegmentation(series, (Period(0, n - 1, fit, yrs),))

    bounds = []
    start = 0
    while True:
        r2 = {}
        split_at = None
        for end in range(start + 2, n):
            r2[end] = _window_r2(years, values, start, end)
            e = end - 1
            if e - 1 not in r2:
                continue
            prev, mid, nxt = r2[e - 1], r2[e], r2[end]
            if np.isnan(prev) or np.isnan(mid) or np.isnan(nxt):
                continue
            if mid > prev + R2_TOL and mid > nxt + R2_TOL:
                if (_admissible(years, start, e, min_marks, min_years)
                        and _admissible(years, e + 1, n - 1, min_marks, min_years)):
                    split_at = e
                    break
        if split_at is None:
            bounds.append((start, n - 1))
            break
        bounds.append((start, split_at))
        start = split_at + 1

    periods = tuple(
        Period(i, j, fit_window(years[i:j + 1], values[i:j + 1]), (float(years[i]), float(years[j])))
        for i, j in bounds
    )
    return PeriodSegmentation(series, periods)


def gains(means: dict, year: int) -> float:
    """Relative improvement (%) of a chronometric yearly mean over the previous year."""
    try:
        prev, cur = means[year - 1], means[year]
    except KeyError as exc:
        raise KeyError(f"year {exc.args[0]} missing from the yearly means") from None
    if prev <= 0:
        raise DomainError("means must be positive")
    return (prev - cur) / prev * 100.0


def predicted_drop(y_hat: float, m_ref: float) -> float:
    """Gap (%) between a model prediction and the observed mark."""
    if m_ref <= 0:
        raise DomainError("reference mark must be positive")
    return (y_hat - m_ref) / m_ref * 100.0


def predicted_drop_from_period(period: Period, m_ref: float, target_year: float) -> float:
    """Extrapolate a period fit to ``target_year`` and compare with ``m_ref``."""
    t_i, t_f = period.years
    t = (target_year - t_i) / (t_f - t_i)
    delta, a, b = period.exp_params()
    y_hat = delta * np.exp(-a * t) + b
    return predicted_drop(float(y_hat), m_ref)

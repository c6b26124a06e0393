"""Asymptote forecasts: limit year, Monte Carlo credibility, progression ranges."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CovarianceUnavailableError, DomainError
from .fitting import FitResult
from .models import exp_wr_inverse, progress_ratios
from .segmentation import PeriodSegmentation, split_periods
from .series import PerformanceSeries

LIMIT_FRACTION = 1 / 2000


@dataclass(frozen=True)
class McCredibility:
    median_year: float
    p2_5: float
    p97_5: float
    asymptote_ci: tuple[float, float]
    asymptote_median: float
    n_draws: int
    n_rejected: int


@dataclass(frozen=True)
class LimitForecast:
    event_id: str
    asymptote_b: float
    year_9995: float
    ci_low: float
    ci_high: float
    median_year: float
    beta: float
    beta_prime: float
    asymptote_ci: tuple[float, float] = (float("nan"), float("nan"))
    n_periods: int = 1


def exp_params(fit) -> tuple[float, float, float]:
    """(delta, a, b) from a fit with either a free or a fixed amplitude."""
    if isinstance(fit, FitResult):
        if "delta" in fit.meta:
            return float(fit.meta["delta"]), float(fit.params[0]), float(fit.params[1])
        return tuple(float(v) for v in fit.params[:3])
    delta, a, b = fit
    return float(delta), float(a), float(b)


def target_value(b: float, chronometric: bool, fraction: float = LIMIT_FRACTION) -> float:
    return b + b * fraction if chronometric else b - b * fraction


def limit_year(fit, chronometric: bool, period_years: tuple[float, float],
               fraction: float = LIMIT_FRACTION) -> float:
    """Calendar year at which the fitted curve comes within ``fraction`` of its asymptote."""
    t_i, t_f = period_years
    if not t_f > t_i:
        raise DomainError("period must span a positive time")
    p = exp_params(fit)
    t_norm = exp_wr_inverse(p, target_value(p[2], chronometric, fraction))
    return t_i + t_norm * (t_f - t_i)


def _ab_moments(fit: FitResult):
    if fit.covariance is None:
        raise CovarianceUnavailableError(
            f"{fit.model_id}: coefficient covariance unavailable; refit with more marks or a better start")
    cov = np.asarray(fit.covariance, dtype=float)
    if "delta" in fit.meta:
        return np.array(fit.params[:2], dtype=float), cov[:2, :2]
    return np.array(fit.params[1:3], dtype=float), cov[1:3, 1:3]


def mc_credibility(fit: FitResult, draws: int = 10000, seed=0, *, chronometric: bool = True,
                   period_years: tuple[float, float] = (0.0, 1.0),
                   fraction: float = LIMIT_FRACTION) -> McCredibility:
    """Quantiles of the limit year and asymptote under a bivariate normal on (a, b).

    The amplitude is held at its data-determined value. Draws with a <= 0 or
    b <= 0 are rejected and redrawn, up to 10 * ``draws`` attempts in total.
    """
    if draws < 1000:
        raise DomainError("at least 1000 draws are required")
    delta = exp_params(fit)[0]
    mean, cov = _ab_moments(fit)
    t_i, t_f = period_years
    rng = np.random.default_rng(seed)
    kept = []
    n_kept = attempts = 0
    while n_kept < draws:
        if attempts >= 10 * draws:
            raise DomainError(f"only {n_kept} of {draws} draws fell in the valid region")
        batch = min(draws - n_kept, 10 * draws - attempts)
        ab = rng.multivariate_normal(mean, cov, size=batch, method="svd")
        attempts += batch
        ok = (ab[:, 0] > 0) & (ab[:, 1] > 0)
        kept.append(ab[ok])
        n_kept += int(ok.sum())
    ab = np.concatenate(kept)[:draws]
    a, b = ab[:, 0], ab[:, 1]
    ratio = (target_value(b, chronometric, fraction) - b) / delta
    if np.any(ratio <= 0):
        raise DomainError("limit unreachable for the fitted amplitude sign")
    years = t_i + (-np.log(ratio) / a) * (t_f - t_i)
    q = np.percentile(years, [2.5, 50.0, 97.5])
    bq = np.percentile(b, [2.5, 50.0, 97.5])
    return McCredibility(float(q[1]), float(q[0]), float(q[2]), (float(bq[0]), float(bq[2])),
                         float(bq[1]), draws, attempts - draws)


def beta_ratios(bp_i: float, bp_f: float, b: float) -> tuple[float, float]:
    """First and last best performance as a percentage of the asymptote."""
    if b <= 0:
        raise DomainError("asymptote must be positive")
    if bp_i <= 0 or bp_f <= 0:
        raise DomainError("performances must be positive")
    return bp_i / b * 100.0, bp_f / b * 100.0


def forecast_event(series: PerformanceSeries, draws: int = 10000, seed=0,
                   segmentation: PeriodSegmentation | None = None) -> LimitForecast:
    """Segment, fit the last period and forecast its limit with credibility bounds."""
    seg = split_periods(series) if segmentation is None else segmentation
    last = seg.last
    if last.fit is None:
        raise DomainError(f"{series.meta.event_id}: last period could not be fitted")
    chrono = series.meta.chronometric
    year = limit_year(last.fit, chrono, last.years)
    mc = mc_credibility(last.fit, draws, seed, chronometric=chrono, period_years=last.years)
    v = series.values
    bp, bpp = progress_ratios(exp_params(last.fit), v[0], v[-1], chrono)
    return LimitForecast(series.meta.event_id, last.b, year, mc.p2_5, mc.p97_5, mc.median_year,
                         bp * 100.0, bpp * 100.0, mc.asymptote_ci, len(seg.periods))

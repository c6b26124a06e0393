"""Parametric progression and age-performance models.

Every model is a vectorised ``f(params, x)`` plus a registered
:class:`~perflab.fitting.ModelSpec` with bounds and a data-driven starting
point. Starting points come from a coarse profile search: the nonlinear
rates are scanned on a grid scaled to the data span and the coefficients that
enter linearly are solved exactly at every grid node.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np
from scipy import optimize, special

from .errors import DomainError
from .fitting import ModelSpec

EPS = 1e-9
INF = np.inf


class ExpWrParams(NamedTuple):
    delta: float
    a: float
    b: float


class GompertzParams(NamedTuple):
    a: float
    b: float
    c: float
    d: float


class MooreParams(NamedTuple):
    a: float
    b: float
    c: float
    d: float


class MooreRevParams(NamedTuple):
    A: float
    b: float
    c: float
    t1: float


class PopModel1Params(NamedTuple):
    A: float
    alpha10: float
    gamma1: float
    gamma2: float
    t_d: float


class PopModel2Params(NamedTuple):
    A: float
    alpha10: float
    gamma1: float
    gamma2: float
    d: float


class DoublePeakParams(NamedTuple):
    """Two peaks as (a1, b1, c1, a2, b2, c2).

    Gaussian: a = height, b = centre, c = width.
    Lorentzian: a = full width, b = centre, c = area.
    """

    a1: float
    b1: float
    c1: float
    a2: float
    b2: float
    c2: float


def _x(x):
    return np.asarray(x, dtype=float)


def _scalar(out):
    return float(out) if np.ndim(out) == 0 else out


# --- model functions -------------------------------------------------------------

def exp_wr_eval(p, t):
    delta, a, b = p
    with np.errstate(over="ignore"):
        return _scalar(delta * np.exp(-a * _x(t)) + b)


def exp_wr_inverse(p, y) -> float:
    """Normalised time at which the exponential reaches ``y``."""
    delta, a, b = p
    if a <= 0:
        raise DomainError("rate a must be positive")
    ratio = (y - b) / delta if delta != 0 else 0.0
    if not ratio > 0:
        raise DomainError(f"value {y} is not reachable (asymptote {b})")
    return float(-np.log(ratio) / a)


def progress_ratios(p, wr_i: float, wr_f: float, chronometric: bool) -> tuple[float, float]:
    """Progression of the first and last marks relative to the asymptote."""
    b = p[2] if len(p) == 3 else p
    if min(wr_i, wr_f, b) <= 0:
        raise DomainError("marks and asymptote must be positive")
    if chronometric:
        return b / wr_i, b / wr_f
    return wr_i / b, wr_f / b


def linear_eval(p, x):
    m, q = p
    return _scalar(m * _x(x) + q)


def chapman_richards_eval(p, x):
    t1, t2, t3, t4 = p
    with np.errstate(invalid="ignore", over="ignore"):
        return _scalar(t1 - t2 * np.power(-np.expm1(-t3 * _x(x)), t4))


def _antisym_shape(t3, t4, x):
    z = t3 * (x - t4)
    with np.errstate(over="ignore"):
        return np.where(z >= 0, np.exp(-np.abs(z)), 2.0 - np.exp(-np.abs(z)))


def antisym_exp_eval(p, x):
    t1, t2, t3, t4 = p
    return _scalar(t1 + t2 * _antisym_shape(t3, t4, _x(x)))


def gompertz_eval(p, t):
    """a*exp(b*exp(c*t)) + d.

    Record progressions use b<0, c<0 (rising to a+d); decreasing species
    curves flip the sign of a. Signs are left to the caller's bounds.
    """
    a, b, c, d = p
    with np.errstate(over="ignore", invalid="ignore"):
        return _scalar(a * np.exp(b * np.exp(c * _x(t))) + d)


def richards_eval(p, x):
    """Generalised logistic with seven coefficients."""
    t1, t2, t3, t4, t5, t6, t7 = p
    if t4 <= 0 or t7 <= 0:
        raise DomainError("theta4 and theta7 must be positive")
    z = -t5 * (_x(x) - t6) + np.log(t4)
    with np.errstate(over="ignore"):
        return _scalar(t1 + (t2 - t3) * np.exp(-np.logaddexp(0.0, z) / t7))


def richards5_eval(p, x):
    """Identifiable Richards form (theta3 = 0, theta4 = 1)."""
    t1, t2, t5, t6, t7 = p
    z = -t5 * (_x(x) - t6)
    with np.errstate(over="ignore"):
        return _scalar(t1 + t2 * np.exp(-np.logaddexp(0.0, z) / t7))


def moore_eval(p, t):
    a, b, c, d = p
    t = _x(t)
    with np.errstate(over="ignore"):
        return _scalar(-a * np.expm1(b * t) - c * np.expm1(d * t))


def moore_peak_analytic(p) -> float:
    """Vertex of the biphasic curve, where both exponential slopes balance."""
    a, b, c, d = p
    return float(np.log(-a * b / (c * d)) / (d - b))


def moore_rev_eval(p, t):
    A, b, c, t1 = p
    t = _x(t)
    with np.errstate(over="ignore", invalid="ignore"):
        return _scalar(A * np.expm1(b * t) * np.expm1(c * (t - t1)))


def pop_model1_eval(p, t):
    A, alpha10, g1, g2, td = p
    t = _x(t)
    with np.errstate(over="ignore", invalid="ignore"):
        return _scalar(-A * np.exp(-(alpha10 / g1) * np.exp(-g1 * t)) * np.expm1(g2 * (t - td)))


def pop_model2_eval(p, t):
    A, alpha10, g1, g2, d = p
    t = _x(t)
    with np.errstate(over="ignore", invalid="ignore"):
        return _scalar(A * np.exp(-(alpha10 / g1) * np.exp(-g1 * t) - d * np.exp(g2 * t)))


def quadratic_temp_eval(p, T):
    a, b, c = p
    T = _x(T)
    return _scalar(-a * T + b * T * T + c)


def quadratic_temp_vertex(a: float, b: float, c: float = 0.0):
    """(T*, kind) with kind 'minimum' or 'maximum'; (None, None) when b = 0."""
    if b == 0:
        return None, None
    return a / (2 * b), ("minimum" if b > 0 else "maximum")


def gaussian_peak(a, b, c, x):
    return a * np.exp(-(((_x(x) - b) / c) ** 2))


def lorentzian_peak(a, b, c, x):
    u = 2.0 * (_x(x) - b) / a
    return c * (2.0 / (a * np.pi)) / (1.0 + u * u)


def double_gauss_eval(p, x):
    a1, b1, c1, a2, b2, c2 = p
    return _scalar(gaussian_peak(a1, b1, c1, x) + gaussian_peak(a2, b2, c2, x))


def double_lorentz_eval(p, x):
    a1, b1, c1, a2, b2, c2 = p
    return _scalar(lorentzian_peak(a1, b1, c1, x) + lorentzian_peak(a2, b2, c2, x))


def double_peak_eval(p, x, family: str = "gaussian"):
    if family == "gaussian":
        return double_gauss_eval(p, x)
    if family == "lorentzian":
        return double_lorentz_eval(p, x)
    raise DomainError(f"unknown peak family {family!r}")


def _erf_diff(u_lo, u_hi):
    """erf(u_hi) - erf(u_lo) without cancellation in the tails."""
    if u_lo >= 0:
        return special.erfc(u_lo) - special.erfc(u_hi)
    if u_hi <= 0:
        return special.erfc(-u_hi) - special.erfc(-u_lo)
    return special.erf(u_hi) - special.erf(u_lo)


def gaussian_area(a, b, c, lo, hi) -> float:
    if c <= 0:
        raise DomainError("Gaussian width must be positive")
    return 0.5 * np.sqrt(np.pi) * a * c * _erf_diff((lo - b) / c, (hi - b) / c)


def lorentzian_area(a, b, c, lo, hi) -> float:
    if a <= 0:
        raise DomainError("Lorentzian width must be positive")
    return c / np.pi * (np.arctan(2 * (hi - b) / a) - np.arctan(2 * (lo - b) / a))


def double_peak_area(p, lo: float, hi: float, family: str = "gaussian") -> tuple[float, float, float]:
    """Total area over [lo, hi] and the percentage carried by each peak."""
    if not hi > lo:
        raise DomainError("hi must exceed lo")
    area = {"gaussian": gaussian_area, "lorentzian": lorentzian_area}.get(family)
    if area is None:
        raise DomainError(f"unknown peak family {family!r}")
    a1, b1, c1, a2, b2, c2 = p
    f1 = area(a1, b1, c1, lo, hi)
    f2 = area(a2, b2, c2, lo, hi)
    total = f1 + f2
    if total == 0:
        raise DomainError("zero total area")
    return float(total), float(100.0 * f1 / total), float(100.0 * f2 / total)


def expansion_surface_eval(phi1: float, phi2: float, mr_params, age, t):
    """Logistic calendar-time factor times the revisited age curve."""
    if phi1 <= 0:
        raise DomainError("phi1 must be positive")
    factor = 1.0 / (1.0 + phi1 * np.exp(-phi2 * _x(t)))
    return _scalar(factor * moore_rev_eval(mr_params, age))


# --- peaks and roots ---------------------------------------------------------------

@dataclass(frozen=True)
class PeakRoots:
    peak_age: float | None
    peak_value: float | None
    roots: tuple[float, ...]

    @property
    def peak_found(self) -> bool:
        return self.peak_age is not None


AGE_MODELS = ("moore", "moore_rev", "pop1", "pop2")


def peak_and_roots(model_id: str, params, search_interval=(0.0, 100.0)) -> PeakRoots:
    """Interior maximum and zero crossings of an age-performance curve.

    A grid of 1001 nodes brackets the maximum, which golden-section search
    then refines; each sign change is refined by Brent's method. Missing
    peaks or roots are reported as None / empty, never raised.
    """
    if model_id not in AGE_MODELS:
        raise DomainError(f"{model_id!r} is not an age-performance model ({', '.join(AGE_MODELS)})")
    lo, hi = map(float, search_interval)
    if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
        raise DomainError("search interval must be finite with hi > lo")
    fun = REGISTRY[model_id].eval
    p = np.asarray(params, dtype=float)
    grid = np.linspace(lo, hi, 1001)
    vals = np.asarray(fun(p, grid), dtype=float)

    peak_age = peak_value = None
    finite = np.isfinite(vals)
    if finite.any():
        i = int(np.nanargmax(np.where(finite, vals, -np.inf)))
        if 0 < i < grid.size - 1:
            res = optimize.minimize_scalar(lambda t: -fun(p, t), bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                           method="golden", options={"xtol": 1e-12})
            peak_age = float(res.x)
            peak_value = float(fun(p, peak_age))

    roots = []
    if model_id in ("moore", "moore_rev") and lo <= 0.0 <= hi:
        roots.append(0.0)
    for j in range(grid.size - 1):
        v0, v1 = vals[j], vals[j + 1]
        if not (np.isfinite(v0) and np.isfinite(v1)):
            continue
        if v0 == 0.0:
            r = float(grid[j])
        elif v0 * v1 < 0:
            r = float(optimize.brentq(lambda t: fun(p, t), grid[j], grid[j + 1], xtol=1e-14, rtol=1e-15))
        else:
            continue
        if not any(abs(r - q) < 1e-9 for q in roots):
            roots.append(r)
    if vals[-1] == 0.0 and not any(abs(hi - q) < 1e-9 for q in roots):
        roots.append(hi)
    return PeakRoots(peak_age, peak_value, tuple(sorted(roots)))


# --- starting points ---------------------------------------------------------------

def _profile(x, y, thetas, design):
    """Best grid node for a partially linear model.

    ``design(T, x)`` maps a (G, q) array of nonlinear parameters to the
    (G, n, m) stack of columns multiplying the linear coefficients, which are
    solved exactly at every node. Returns (theta, coef) with the lowest RSS.
    """
    T = np.atleast_2d(np.asarray(list(thetas), dtype=float))
    with np.errstate(all="ignore"):
        X = np.asarray(design(T, x), dtype=float)
        ok = np.all(np.isfinite(X), axis=(1, 2))
        X = np.where(ok[:, None, None], X, 0.0)
        Xt = X.transpose(0, 2, 1)
        XtX = Xt @ X
        Xty = Xt @ y
        m = XtX.shape[-1]
        if m == 1:
            coef = Xty / (XtX[:, 0] * (1 + 1e-13) + 1e-300)
        else:
            ridge = 1e-13 * np.trace(XtX, axis1=1, axis2=2)[:, None, None] * np.eye(m) + 1e-300 * np.eye(m)
            coef = np.linalg.solve(XtX + ridge, Xty[..., None])[..., 0]
        rss = np.sum(((X @ coef[..., None])[..., 0] - y) ** 2, axis=1)
    rss = np.where(ok & np.isfinite(rss), rss, np.inf)
    g = int(np.argmin(rss))
    if not np.isfinite(rss[g]):
        raise DomainError("no finite starting point found")
    return T[g], coef[g]


def _polish(fun, bounds, x, y, starts, max_iter=60):
    """Short bounded LM runs from several starts; returns the best end point."""
    from .fitting import lm_fit

    k = len(starts[0])
    spec = ModelSpec("_start", k, fun, bounds, lambda x, y: starts[0])
    tss = float(np.sum((y - y.mean()) ** 2))

    def start_rss(p):
        with np.errstate(all="ignore"):
            r = float(np.sum((y - spec(np.clip(p, spec.lower, spec.upper), x)) ** 2))
        return r if np.isfinite(r) else np.inf

    best = None
    # most promising start first; stop once a start is already an exact fit
    for p0 in sorted(starts, key=start_rss):
        try:
            f = lm_fit(spec, x, y, p0=p0, max_iter=max_iter)
        except DomainError:
            continue
        if best is None or f.rss < best.rss:
            best = f
        if best.rss <= 1e-16 * tss:
            break
    return starts[0] if best is None else best.params


def _cols(*cols):
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def _span(x):
    r = float(np.ptp(x))
    return r if r > 0 else 1.0


def _xmax(x):
    return max(float(np.abs(x).max()), 1e-12)


def _guess_linear(x, y):
    coef, *_ = np.linalg.lstsq(np.column_stack([x, np.ones_like(x)]), y, rcond=None)
    return coef


def _guess_exp_wr(x, y):
    # the conventional start a = 3 on normalised time is one of the nodes
    x0, xr = float(x.min()), _span(x)
    rates = np.concatenate([[3.0], np.geomspace(0.02, 60, 50)]) / xr
    (a,), (dshift, b) = _profile(x, y, rates[:, None],
                                 lambda T, x: _cols(np.exp(-T[:, :1] * (x - x0)), 1.0))
    return np.array([dshift * np.exp(a * x0), a, max(b, EPS)])


def _guess_chapman(x, y):
    xm = _xmax(x)
    grid = product(np.geomspace(0.05, 60, 30) / xm, np.geomspace(0.1, 20, 20))
    (t3, t4), (t1, t2) = _profile(x, y, grid, lambda T, x: _cols(
        1.0, -np.power(-np.expm1(-T[:, :1] * x), T[:, 1:2])))
    return np.array([t1, t2, t3, t4])


def _guess_antisym(x, y):
    xr = _span(x)
    grid = product(np.geomspace(0.05, 100, 30) / xr, np.linspace(x.min(), x.max(), 31))
    (t3, t4), (t1, t2) = _profile(x, y, grid, lambda T, x: _cols(
        1.0, _antisym_shape(T[:, :1], T[:, 1:2], x)))
    return np.array([t1, t2, t3, t4])


def _guess_gompertz(x, y):
    # the classic start (d = min, a = range, b = c = -1) is one of the nodes;
    # each sign quadrant of (b, c) is a separate basin, so polish the best of each
    x0, xr = float(x.min()), _span(x)
    bmag = np.geomspace(0.02, 30, 16)
    cmag = np.geomspace(0.05, 60, 18) / xr
    starts = [np.array([np.ptp(y), -1.0, -1.0, y.min()])]
    for sb, sc in product((-1.0, 1.0), (-1.0, 1.0)):
        (bsh, c), (a, d) = _profile(x, y, product(sb * bmag, sc * cmag), lambda T, x: _cols(
            np.exp(T[:, :1] * np.exp(T[:, 1:2] * (x - x0))), 1.0))
        starts.append(np.array([a, bsh * np.exp(-c * x0), c, d]))
    return _polish(gompertz_eval, REGISTRY["gompertz"].bounds, x, y, starts)


def _guess_richards(x, y):
    lo, hi, xr = float(x.min()), float(x.max()), _span(x)
    mags = np.geomspace(0.5, 80, 10) / xr
    starts = []
    for sgn in (-1.0, 1.0):
        grid = product(sgn * mags, np.linspace(lo - 0.2 * xr, hi + 0.2 * xr, 13), np.geomspace(0.1, 10, 9))
        (t5, t6, t7), (t1, t2) = _profile(x, y, grid, lambda T, x: _cols(
            1.0, np.exp(-np.logaddexp(0.0, -T[:, :1] * (x - T[:, 1:2])) / T[:, 2:3])))
        starts.append(np.array([t1, t2, t5, t6, t7]))
    return _polish(richards5_eval, REGISTRY["richards"].bounds, x, y, starts)


def _guess_moore(x, y):
    # the classic start rates 0.1 / 0.01 are one of the nodes
    xm = _xmax(x)
    bs = np.concatenate([[-0.1], -np.geomspace(0.1, 60, 24) / xm])
    ds = np.concatenate([[0.01], np.geomspace(0.02, 12, 24) / xm])
    (b, d), (a, c) = _profile(x, y, product(bs, ds), lambda T, x: _cols(
        -np.expm1(T[:, :1] * x), -np.expm1(T[:, 1:2] * x)))
    return np.array([max(a, EPS), b, max(c, EPS), d])


def _root_guess(x, y):
    """Location where the data cross from positive to non-positive, if any."""
    order = np.argsort(x)
    xs, ys = x[order], y[order]
    idx = np.nonzero((ys[:-1] > 0) & (ys[1:] <= 0))[0]
    if idx.size:
        j = idx[-1]
        return float(xs[j] + (xs[j + 1] - xs[j]) * ys[j] / (ys[j] - ys[j + 1]))
    return None


def _guess_moore_rev(x, y):
    xm = _xmax(x)
    t1s = list(np.linspace(0.6, 3.0, 14) * xm)
    r = _root_guess(x, y)
    if r is not None:
        t1s = [r] + t1s
    grid = product(np.concatenate([[-0.1], -np.geomspace(0.2, 60, 16) / xm]),
                   np.concatenate([[0.01], np.geomspace(0.2, 60, 16) / xm]), t1s)
    (b, c, t1), (A,) = _profile(x, y, grid, lambda T, x: _cols(
        np.expm1(T[:, :1] * x) * np.expm1(T[:, 1:2] * (x - T[:, 2:3]))))
    return np.array([max(A, EPS), b, c, t1])


def _guess_pop1(x, y):
    xm = _xmax(x)
    tds = list(np.linspace(0.8, 3.0, 8) * xm)
    r = _root_guess(x, y)
    if r is not None:
        tds = [r] + tds
    rates = np.geomspace(0.5, 60, 10) / xm
    grid = product(np.geomspace(0.1, 50, 10), rates, rates, tds)
    (k, g1, g2, td), (A,) = _profile(x, y, grid, lambda T, x: _cols(
        -np.exp(-T[:, :1] * np.exp(-T[:, 1:2] * x)) * np.expm1(T[:, 2:3] * (x - T[:, 3:4]))))
    return np.array([max(A, EPS), k * g1, g1, g2, td])


def _guess_pop2(x, y):
    xm = _xmax(x)
    rates = np.geomspace(0.5, 60, 10) / xm
    grid = product(np.geomspace(0.1, 50, 10), rates, rates, np.geomspace(1e-4, 5, 10))
    (k, g1, g2, d), (A,) = _profile(x, y, grid, lambda T, x: _cols(
        np.exp(-T[:, :1] * np.exp(-T[:, 1:2] * x) - T[:, 3:4] * np.exp(T[:, 2:3] * x))))
    return np.array([max(A, EPS), k * g1, g1, g2, d])


def _guess_quad(x, y):
    coef, *_ = np.linalg.lstsq(np.column_stack([-x, x * x, np.ones_like(x)]), y, rcond=None)
    return coef


def _peak_seeds(x, y):
    """Centres of the two largest local maxima of the lightly smoothed data."""
    order = np.argsort(x)
    xs, ys = x[order], y[order]
    sm = np.convolve(np.pad(ys, 1, mode="edge"), np.ones(3) / 3, mode="valid")
    cand = list(np.nonzero((sm[1:-1] > sm[:-2]) & (sm[1:-1] >= sm[2:]))[0] + 1)
    if sm[0] > sm[1]:
        cand.append(0)
    if sm[-1] > sm[-2]:
        cand.append(len(sm) - 1)
    cand.sort(key=lambda i: -sm[i])
    xr = _span(xs)
    if len(cand) >= 2:
        b1, b2 = sorted((xs[cand[0]], xs[cand[1]]))
    elif cand:
        c = xs[cand[0]]
        b1, b2 = c - 0.1 * xr, c + 0.1 * xr
    else:
        b1, b2 = xs[0] + xr / 3, xs[0] + 2 * xr / 3
    return float(b1), float(b2), xr


def _guess_double_gauss(x, y):
    b1, b2, xr = _peak_seeds(x, y)
    widths = np.geomspace(0.01, 0.8, 18) * xr
    (c1, c2), (a1, a2) = _profile(x, y, product(widths, widths), lambda T, x: _cols(
        gaussian_peak(1.0, b1, T[:, :1], x), gaussian_peak(1.0, b2, T[:, 1:2], x)))
    return np.array([a1, b1, c1, a2, b2, c2])


def _guess_double_lorentz(x, y):
    b1, b2, xr = _peak_seeds(x, y)
    widths = np.geomspace(0.01, 0.8, 18) * xr
    (w1, w2), (c1, c2) = _profile(x, y, product(widths, widths), lambda T, x: _cols(
        lorentzian_peak(T[:, :1], b1, 1.0, x), lorentzian_peak(T[:, 1:2], b2, 1.0, x)))
    return np.array([w1, b1, c1, w2, b2, c2])


def exp_wr_fixed_delta(delta: float) -> ModelSpec:
    """Exponential with the amplitude held at ``delta``; (a, b) are free."""
    delta = float(delta)

    def f(p, t):
        return delta * np.exp(-p[0] * t) + p[1]

    def guess(x, y):
        rates = np.concatenate([[3.0], np.geomspace(0.02, 60, 50)]) / _span(x)
        best = None
        for a in rates:
            b = float(np.mean(y - delta * np.exp(-a * x)))
            s = float(np.sum((y - delta * np.exp(-a * x) - b) ** 2))
            if best is None or s < best[0]:
                best = (s, a, b)
        return np.array([best[1], max(best[2], EPS)])

    return ModelSpec("exp_wr", 2, f, [(EPS, INF), (EPS, INF)], guess, ("a", "b"), {"delta": delta})


# --- registry -------------------------------------------------------------------

REGISTRY: dict[str, ModelSpec] = {
    "exp_wr": ModelSpec("exp_wr", 3, exp_wr_eval, [(-INF, INF), (EPS, INF), (EPS, INF)],
                        _guess_exp_wr, ("delta", "a", "b")),
    "chapman_richards": ModelSpec("chapman_richards", 4, chapman_richards_eval,
                                  [(-INF, INF), (-INF, INF), (EPS, INF), (EPS, INF)],
                                  _guess_chapman, ("theta1", "theta2", "theta3", "theta4")),
    "antisym_exp": ModelSpec("antisym_exp", 4, antisym_exp_eval,
                             [(-INF, INF), (-INF, INF), (EPS, INF), (-INF, INF)],
                             _guess_antisym, ("theta1", "theta2", "theta3", "theta4")),
    "gompertz": ModelSpec("gompertz", 4, gompertz_eval, [(-INF, INF)] * 4, _guess_gompertz,
                          ("a", "b", "c", "d")),
    "richards": ModelSpec("richards", 5, richards5_eval,
                          [(-INF, INF), (-INF, INF), (-INF, INF), (-INF, INF), (EPS, INF)],
                          _guess_richards, ("theta1", "theta2", "theta5", "theta6", "theta7"),
                          {"theta3": 0.0, "theta4": 1.0}),
    "moore": ModelSpec("moore", 4, moore_eval, [(EPS, INF), (-INF, -EPS), (EPS, INF), (EPS, INF)],
                       _guess_moore, ("a", "b", "c", "d")),
    "moore_rev": ModelSpec("moore_rev", 4, moore_rev_eval, [(EPS, INF), (-INF, -EPS), (EPS, INF), (EPS, INF)],
                           _guess_moore_rev, ("A", "b", "c", "t1")),
    "pop1": ModelSpec("pop1", 5, pop_model1_eval, [(EPS, INF)] * 5, _guess_pop1,
                      ("A", "alpha10", "gamma1", "gamma2", "t_d")),
    "pop2": ModelSpec("pop2", 5, pop_model2_eval, [(EPS, INF)] * 5, _guess_pop2,
                      ("A", "alpha10", "gamma1", "gamma2", "d")),
    "quad_temp": ModelSpec("quad_temp", 3, quadratic_temp_eval, [(-INF, INF)] * 3, _guess_quad, ("a", "b", "c")),
    "double_gauss": ModelSpec("double_gauss", 6, double_gauss_eval,
                              [(-INF, INF), (-INF, INF), (EPS, INF)] * 2, _guess_double_gauss,
                              ("a1", "b1", "c1", "a2", "b2", "c2")),
    "double_lorentz": ModelSpec("double_lorentz", 6, double_lorentz_eval,
                                [(EPS, INF), (-INF, INF), (-INF, INF)] * 2, _guess_double_lorentz,
                                ("a1", "b1", "c1", "a2", "b2", "c2")),
    "linear": ModelSpec("linear", 2, linear_eval, [(-INF, INF)] * 2, _guess_linear, ("slope", "intercept")),
}


def get_model(model_id: str) -> ModelSpec:
    try:
        return REGISTRY[model_id]
    except KeyError:
        raise DomainError(f"unknown model {model_id!r}; registered: {', '.join(REGISTRY)}") from None


def gompertz_spec(bounds) -> ModelSpec:
    """Gompertz spec with call-site sign bounds, e.g. b<0, c<0 for records."""
    base = REGISTRY["gompertz"]
    return ModelSpec(base.model_id, 4, base.eval, list(bounds), base.initial_guess, base.param_names)

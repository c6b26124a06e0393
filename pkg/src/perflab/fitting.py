"""Box-bounded Levenberg-Marquardt fitting and information criteria."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError

_LAMBDA_MAX = 1e16


@dataclass(frozen=True)
class ModelSpec:
    """A parametric model ready for fitting.

    ``eval(params, x)`` must be vectorised in ``x``. ``initial_guess(x, y)``
    returns a starting vector. ``meta`` is copied into every FitResult (used
    for parameters held fixed by a closure, e.g. a data-determined offset).
    """

    model_id: str
    n_params: int
    eval: Callable[[np.ndarray, np.ndarray], np.ndarray]
    bounds: Sequence[tuple[float, float]]
    initial_guess: Callable[[np.ndarray, np.ndarray], np.ndarray]
    param_names: tuple[str, ...] = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_params < 1:
            raise DomainError("n_params must be >= 1")
        if len(self.bounds) != self.n_params:
            raise DomainError("one (lower, upper) pair per parameter is required")
        for lo, hi in self.bounds:
            if not lo < hi:
                raise DomainError(f"invalid bounds ({lo}, {hi})")
        if not self.param_names:
            object.__setattr__(self, "param_names", tuple(f"p{i + 1}" for i in range(self.n_params)))

    @property
    def lower(self) -> np.ndarray:
        return np.array([b[0] for b in self.bounds], dtype=float)

    @property
    def upper(self) -> np.ndarray:
        return np.array([b[1] for b in self.bounds], dtype=float)

    def __call__(self, params, x):
        return np.asarray(self.eval(np.asarray(params, dtype=float), np.asarray(x, dtype=float)), dtype=float)


@dataclass(frozen=True)
class FitResult:
    model_id: str
    params: np.ndarray
    rss: float
    adj_r2: float
    rmse: float
    covariance: np.ndarray | None
    n_obs: int
    converged: bool
    param_names: tuple[str, ...] = ()
    meta: dict = field(default_factory=dict)
    n_iter: int = 0
    rss_history: tuple[float, ...] = ()

    @property
    def k(self) -> int:
        return len(self.params)

    @property
    def covariance_available(self) -> bool:
        return self.covariance is not None

    @property
    def stderr(self) -> np.ndarray | None:
        if self.covariance is None:
            return None
        return np.sqrt(np.clip(np.diag(self.covariance), 0, None))

    def param(self, name: str) -> float:
        if name in self.meta:
            return float(self.meta[name])
        return float(self.params[self.param_names.index(name)])

    def aicc(self) -> float:
        return aicc(self.rss, self.n_obs, self.k)

    def sbic(self) -> float:
        return sbic(self.rss, self.n_obs, self.k)


def jacobian(f, p, x, lower=None, upper=None) -> np.ndarray:
    """Central finite-difference Jacobian of ``f(p, x)`` with respect to ``p``.

    Step per coordinate is max(1e-6, 1e-6*|p|); near a bound the difference
    becomes one-sided so the model is never evaluated outside the box.
    """
    p = np.asarray(p, dtype=float)
    lower = np.full(p.size, -np.inf) if lower is None else lower
    upper = np.full(p.size, np.inf) if upper is None else upper
    J = np.empty((np.size(x), p.size))
    for i in range(p.size):
        h = max(1e-6, 1e-6 * abs(p[i]))
        lo_ok, hi_ok = p[i] - h >= lower[i], p[i] + h <= upper[i]
        pp, pm = p.copy(), p.copy()
        if lo_ok and hi_ok:
            pp[i] += h
            pm[i] -= h
            J[:, i] = (f(pp, x) - f(pm, x)) / (2 * h)
        elif hi_ok:
            pp[i] += h
            J[:, i] = (f(pp, x) - f(p, x)) / h
        else:
            pm[i] -= h
            J[:, i] = (f(p, x) - f(pm, x)) / h
    return J


def _rss(spec, p, x, y):
    r = y - spec(p, x)
    s = float(r @ r)
    return (s if np.isfinite(s) else np.inf), r


def lm_fit(spec: ModelSpec, x, y, p0=None, *, max_iter: int = 500, ftol: float = 1e-10,
           xtol: float = 1e-10, lambda0: float = 1e-3) -> FitResult:
    """Fit ``spec`` to (x, y) by Levenberg-Marquardt with box projection.

    Damping starts at ``lambda0`` and is multiplied by 10 on a rejected step
    and divided by 10 on an accepted one. Converges when the relative RSS
    decrease falls below ``ftol`` or the step norm below ``xtol`` (both on a
    near Gauss-Newton step), or when no descent is possible at any damping.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    k = spec.n_params
    n = y.size
    if x.shape[0] != n:
        raise DomainError("x and y lengths differ")
    if n < k + 1:
        raise InsufficientDataError(f"{spec.model_id} needs at least {k + 1} points, got {n}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("x and y must be finite")

    lo, hi = spec.lower, spec.upper
    p = np.clip(np.asarray(spec.initial_guess(x, y) if p0 is None else p0, dtype=float), lo, hi)
    rss, r = _rss(spec, p, x, y)
    if not np.isfinite(rss):
        raise DomainError(f"{spec.model_id}: model is not finite at the initial guess")
    history = [rss]
    lam = lambda0
    converged = rss == 0.0
    it = 0
    while not converged and it < max_iter:
        it += 1
        J = jacobian(spec, p, x, lo, hi)
        A = J.T @ J
        g = J.T @ r
        d = np.diag(A).copy()
        d[d <= 0] = max(float(d.max()) * 1e-12, 1e-300) if d.max() > 0 else 1.0
        while True:
            try:
                step = np.linalg.solve(A + lam * np.diag(d), g)
            except np.linalg.LinAlgError:
                step = None
            if step is not None and np.all(np.isfinite(step)):
                p_new = np.clip(p + step, lo, hi)
                rss_new, r_new = _rss(spec, p_new, x, y)
            else:
                rss_new = np.inf
            if rss_new < rss:
                near_gn = lam <= 1.0
                dp = np.linalg.norm(p_new - p)
                small_f = (rss - rss_new) <= ftol * rss
                small_x = dp <= xtol * (np.linalg.norm(p) + xtol)
                p, r, rss = p_new, r_new, rss_new
                history.append(rss)
                lam = max(lam / 10.0, 1e-12)
                if rss == 0.0 or (near_gn and (small_f or small_x)):
                    converged = True
                break
            lam *= 10.0
            if lam > _LAMBDA_MAX:
                # no descent at any damping: numerically stationary
                converged = True
                break

    return _finish(spec, p, x, y, rss, converged, it, history)


def _finish(spec, p, x, y, rss, converged, it, history) -> FitResult:
    n, k = y.size, spec.n_params
    J = jacobian(spec, p, x, spec.lower, spec.upper)
    A = J.T @ J
    cov = None
    if np.all(np.isfinite(A)):
        with np.errstate(all="ignore"):
            cond = np.linalg.cond(A)
        if np.isfinite(cond) and cond < 1e15:
            cov = rss / (n - k) * np.linalg.inv(A)
            cov = 0.5 * (cov + cov.T)
    tss = float(np.sum((y - y.mean()) ** 2))
    adj = adjusted_r2(rss, y, k) if (tss > 0 and n > k + 1) else float("nan")
    return FitResult(
        model_id=spec.model_id, params=p.copy(), rss=float(rss), adj_r2=adj,
        rmse=float(np.sqrt(rss / (n - k))), covariance=cov, n_obs=n, converged=bool(converged),
        param_names=spec.param_names, meta=dict(spec.meta), n_iter=it, rss_history=tuple(history),
    )


def adjusted_r2(rss: float, y, k: int) -> float:
    """1 - (rss/(n-k-1)) / (TSS/(n-1)) with TSS centred on the mean."""
    y = np.asarray(y, dtype=float)
    n = y.size
    if n <= k + 1:
        raise InsufficientDataError(f"adjusted R2 needs n > k+1 (n={n}, k={k})")
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss <= 0:
        raise DomainError("zero-variance data")
    return 1.0 - (rss / (n - k - 1)) / (tss / (n - 1))


def aicc(rss: float, n: int, k: int) -> float:
    """Small-sample corrected Akaike criterion."""
    if n <= k + 1:
        raise DomainError(f"AICc needs n > k+1 (n={n}, k={k})")
    if not rss > 0:
        raise DomainError("rss must be positive")
    return n * np.log(rss / n) + 2 * k + 2 * k * (k + 1) / (n - k - 1)


def sbic(rss: float, n: float, k: int) -> float:
    """Schwarz Bayesian criterion."""
    if not rss > 0:
        raise DomainError("rss must be positive")
    if n < 2:
        raise DomainError("SBIC needs n >= 2")
    return n * np.log(rss / n) + k * np.log(n)


@dataclass(frozen=True)
class CriterionRow:
    model_id: str
    k: int
    rss: float
    aicc: float
    sbic: float
    delta_aicc: float
    delta_sbic: float


@dataclass(frozen=True)
class CriterionTable:
    rows: tuple[CriterionRow, ...]

    def best(self) -> CriterionRow:
        return self.rows[0]

    def sorted(self) -> "CriterionTable":
        return CriterionTable(tuple(sorted(self.rows, key=lambda r: (r.delta_aicc, r.delta_sbic, r.model_id))))


def criterion_table(fits: Sequence[FitResult]) -> CriterionTable:
    """AICc/SBIC per fit with deltas to the minimum (best rows carry 0)."""
    if not fits:
        raise DomainError("at least one fit is required")
    ns = {f.n_obs for f in fits}
    if len(ns) != 1:
        raise DomainError(f"fits are on different sample sizes: {sorted(ns)}")
    # a perfect fit has rss = 0; floor it so the criteria stay finite
    tiny = np.finfo(float).tiny
    a = np.array([aicc(max(f.rss, tiny), f.n_obs, f.k) for f in fits])
    s = np.array([sbic(max(f.rss, tiny), f.n_obs, f.k) for f in fits])
    da, ds = a - a.min(), s - s.min()
    rows = [CriterionRow(f.model_id, f.k, f.rss, float(ai), float(si), float(dai), float(dsi))
            for f, ai, si, dai, dsi in zip(fits, a, s, da, ds)]
    return CriterionTable(tuple(rows))

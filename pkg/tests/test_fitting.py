import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from perflab.errors import DomainError, InsufficientDataError
from perflab.fitting import (ModelSpec, adjusted_r2, aicc, criterion_table, jacobian, lm_fit, sbic)
from perflab.models import REGISTRY


def _spec(f, k, guess=None, bounds=None):
    return ModelSpec("m", k, f, bounds or [(-np.inf, np.inf)] * k, guess or (lambda x, y: np.ones(k)))


def test_information_criteria_hand_values():
    # n*ln(rss/n) + 2k + 2k(k+1)/(n-k-1) with n=10, k=2, rss=1
    assert aicc(1, 10, 2) == pytest.approx(10 * np.log(0.1) + 4 + 12 / 7, abs=1e-12)
    assert aicc(1, 10, 2) == pytest.approx(-17.3116, abs=1e-3)
    assert sbic(1, 10, 2) == pytest.approx(-18.4207, abs=1e-3)
    with pytest.raises(DomainError):
        aicc(1, 3, 2)
    with pytest.raises(DomainError):
        sbic(0, 10, 2)


def test_adjusted_r2():
    y = np.array([1.0, 2.0, 3.0, 5.0, 8.0])
    tss = np.sum((y - y.mean()) ** 2)
    assert adjusted_r2(0.0, y, 2) == 1.0
    assert adjusted_r2(1.0, y, 1) == pytest.approx(1 - (1 / 3) / (tss / 4))
    with pytest.raises(InsufficientDataError):
        adjusted_r2(0.1, y[:3], 2)
    with pytest.raises(DomainError):
        adjusted_r2(0.1, np.ones(5), 1)


def test_jacobian_matches_symbolic():
    t, a, b, c, d = sp.symbols("t a b c d")
    expr = -a * (sp.exp(b * t) - 1) - c * (sp.exp(d * t) - 1)
    grads = [sp.lambdify((a, b, c, d, t), sp.diff(expr, v), "numpy") for v in (a, b, c, d)]
    p = np.array([7.17, -0.084, 1.84, 0.014])
    x = np.linspace(5, 80, 30)
    J = jacobian(REGISTRY["moore"], p, x)
    exact = np.column_stack([np.broadcast_to(g(*p, x), x.shape) for g in grads])
    assert np.allclose(J, exact, rtol=1e-6, atol=1e-6)


def test_jacobian_one_sided_at_bound():
    calls = []

    def f(p, x):
        calls.append(p.copy())
        return p[0] * x

    spec = _spec(f, 1, bounds=[(0.0, 1.0)])
    J = jacobian(spec, np.array([0.0]), np.arange(3.0), spec.lower, spec.upper)
    assert np.allclose(J[:, 0], np.arange(3.0))
    assert all(c[0] >= 0 for c in calls)


def test_lm_recovers_linear():
    x = np.linspace(0, 1, 10)
    fit = lm_fit(REGISTRY["linear"], x, 3 * x - 2)
    assert fit.converged and fit.rss < 1e-20
    assert np.allclose(fit.params, [3, -2])


def test_lm_respects_bounds():
    spec = _spec(lambda p, x: p[0] * x, 1, lambda x, y: np.array([0.5]), [(0.0, 1.0)])
    x = np.linspace(0, 1, 10)
    fit = lm_fit(spec, x, 5 * x)
    assert fit.params[0] == pytest.approx(1.0)


def test_lm_rss_history_monotone():
    x = np.linspace(5, 80, 40)
    y = REGISTRY["moore"](np.array([7.17, -0.084, 1.84, 0.014]), x)
    fit = lm_fit(REGISTRY["moore"], x, y + 0.01 * np.sin(x))
    h = np.array(fit.rss_history)
    assert np.all(np.diff(h) <= 0)


def test_lm_insufficient_data():
    with pytest.raises(InsufficientDataError):
        lm_fit(REGISTRY["exp_wr"], [0, 1, 2], [3, 2, 1])
    with pytest.raises(DomainError):
        lm_fit(REGISTRY["linear"], [0, 1, np.nan], [1, 2, 3])


def test_covariance_unavailable_when_singular():
    # second parameter does not enter the model
    spec = _spec(lambda p, x: p[0] * x + 0 * p[1], 2)
    fit = lm_fit(spec, np.arange(5.0), 2 * np.arange(5.0))
    assert not fit.covariance_available and fit.stderr is None


def test_criterion_table_deltas():
    x = np.linspace(0, 1, 20)
    y = 1 + 2 * x + 0.1 * np.sin(17 * x)
    fits = [lm_fit(REGISTRY[m], x, y) for m in ("linear", "exp_wr", "quad_temp")]
    tab = criterion_table(fits).sorted()
    assert tab.best().delta_aicc == 0.0
    assert min(r.delta_sbic for r in tab.rows) == 0.0
    assert all(r.delta_aicc >= 0 for r in tab.rows)
    with pytest.raises(DomainError):
        criterion_table([fits[0], lm_fit(REGISTRY["linear"], x[:10], y[:10])])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.01, 100), min_size=2, max_size=6), st.floats(-1e3, 1e3))
def test_delta_invariant_under_shift(rss, shift):
    # deltas depend on differences only
    a = np.array([aicc(r, 20, 2) for r in rss])
    d1 = a - a.min()
    d2 = (a + shift) - (a + shift).min()
    assert np.allclose(d1, d2, atol=1e-9)
    assert np.sum(d1 == 0) >= 1


@settings(max_examples=25, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(5, 40))
def test_linear_fit_is_exact(m, q, n):
    x = np.linspace(-1, 1, n)
    fit = lm_fit(REGISTRY["linear"], x, m * x + q)
    assert np.allclose(fit.params, [m, q], atol=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 1e3))
def test_rss_scales_quadratically(c):
    x = np.linspace(0, 1, 15)
    y = x ** 2
    f1 = lm_fit(REGISTRY["linear"], x, y)
    f2 = lm_fit(REGISTRY["linear"], x, c * y)
    assert f2.rss == pytest.approx(c * c * f1.rss, rel=1e-6)

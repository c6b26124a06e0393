"""Seeded synthetic designs shared by the unit and acceptance tests."""

import numpy as np


def _u(rng, lo, hi):
    return float(rng.uniform(lo, hi))


def _sgn(rng):
    return 1.0 if rng.random() < 0.5 else -1.0


def sample(model_id, rng):
    """(true_params, x) for a noise-free recovery problem."""
    u = lambda lo, hi: _u(rng, lo, hi)
    if model_id == "linear":
        return np.array([_sgn(rng) * u(0.5, 5), u(1, 10)]), np.linspace(0, 10, 20)
    if model_id == "exp_wr":
        return np.array([_sgn(rng) * u(0.5, 5), u(0.5, 8), u(5, 50)]), np.linspace(0, 1, 20)
    if model_id == "chapman_richards":
        return np.array([u(5, 20), _sgn(rng) * u(1, 5), u(0.2, 2), u(0.5, 3)]), np.linspace(0, 10, 40)
    if model_id == "antisym_exp":
        return np.array([u(5, 10), _sgn(rng) * u(1, 3), u(0.3, 2), u(3, 7)]), np.linspace(0, 10, 40)
    if model_id == "gompertz":
        return np.array([u(1, 5), -u(0.5, 3), -u(0.2, 1.5), u(1, 5)]), np.linspace(0, 10, 40)
    if model_id == "richards":
        return np.array([u(1, 5), u(2, 6), u(0.5, 2), u(4, 6), u(0.5, 2)]), np.linspace(0, 10, 50)
    if model_id == "moore":
        return np.array([u(5, 10), -u(0.05, 0.15), u(1, 3), u(0.01, 0.03)]), np.linspace(5, 80, 40)
    if model_id == "moore_rev":
        t1 = u(80, 110)
        return np.array([u(5, 15), -u(0.05, 0.3), u(0.02, 0.08), t1]), np.linspace(1, 100, 40)
    if model_id == "pop1":
        return np.array([u(50, 150), u(0.5, 2), u(0.1, 0.4), u(0.03, 0.1), u(80, 120)]), np.linspace(0, 100, 50)
    if model_id == "pop2":
        return np.array([u(50, 150), u(0.5, 2), u(0.1, 0.4), u(0.03, 0.1), u(0.01, 0.1)]), np.linspace(0, 100, 50)
    if model_id == "quad_temp":
        return np.array([u(0.3, 1), u(0.01, 0.05), u(3, 8)]), np.linspace(0, 30, 25)
    if model_id == "double_gauss":
        b1 = u(18, 26)
        return np.array([u(1, 3), b1, u(1.5, 3), u(1, 3), b1 + u(9, 13), u(1.5, 3)]), np.linspace(0, 52, 105)
    if model_id == "double_lorentz":
        b1 = u(18, 26)
        return np.array([u(2, 5), b1, u(5, 15), u(2, 5), b1 + u(9, 13), u(5, 15)]), np.linspace(0, 52, 105)
    raise KeyError(model_id)


def two_regime_series(rng, n1=12, n2=12, start_year=1950):
    """Yearly chronometric record marks: a fast e^{-3t} regime, then a slow
    e^{-t} regime shifted down by an onset step of 25-50% of its amplitude.

    Returns (years, values, index of the last mark of the first regime).
    """
    t1 = np.arange(n1) / (n1 - 1)
    v1 = rng.uniform(9.8, 10.2) + rng.uniform(1.5, 2.5) * np.exp(-3 * t1)
    d2 = rng.uniform(0.6, 1.0)
    step = rng.uniform(0.25, 0.5) * d2
    t2 = np.arange(1, n2 + 1) / n2
    v2 = v1[-1] - step - d2 + d2 * np.exp(-t2)
    years = start_year + np.arange(n1 + n2)
    return years, np.concatenate([v1, v2]), n1 - 1


def one_regime_series(rng, n=24, start_year=1950):
    t = np.arange(n) / (n - 1)
    b = rng.uniform(9.5, 10.5)
    d = rng.uniform(1.0, 3.0)
    a = rng.uniform(1.0, 5.0)
    return start_year + np.arange(n), b + d * np.exp(-a * t)

import numpy as np
import pytest

from hyperbasis import domain


def pair(params, seed):
    a, b = domain.sample_points(params, count=2, seed=seed)
    return a, b


def points_arrays(params, count, seed, margin=0.05):
    pts = domain.sample_points(params, count=count, seed=seed, margin=margin)
    x = np.stack([np.asarray(p.x) for p in pts])
    t = np.array([p.t for p in pts])
    return x, t


def poly_coeffs(fn, degree):
    """Exact coefficients of a polynomial given as a callable (linear solve)."""
    nodes = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
    V = np.vander(nodes, degree + 1, increasing=True)
    return np.linalg.solve(V, fn(nodes))


def poly_derivative(coeffs):
    k = np.arange(1, len(coeffs))
    return coeffs[1:] * k


def poly_eval(coeffs, x):
    if len(coeffs) == 0:
        return np.zeros_like(np.asarray(x, dtype=float))
    return np.polynomial.polynomial.polyval(x, coeffs)


@pytest.fixture(autouse=True)
def _no_quad_env(monkeypatch):
    monkeypatch.delenv("HYPERBASIS_QUAD_POINTS", raising=False)

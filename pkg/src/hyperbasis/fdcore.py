"""Central finite-difference stencils shared by the operator checks.

First and second derivatives use 5-point central stencils; mixed second
derivatives use the 4-point cross stencil.  Steps are on unit-scale
coordinates, so truncation and round-off balance near h ~ 1e-4.
"""

from __future__ import annotations

import numpy as np

DEFAULT_STEP = 1e-4


def d1(f, x: np.ndarray, i: int, h: float) -> np.ndarray:
    """First partial derivative along coordinate i at rows of x."""
    e = np.zeros(x.shape[1])
    e[i] = h
    return (f(x - 2 * e) - 8 * f(x - e) + 8 * f(x + e) - f(x + 2 * e)) / (12 * h)


def d2(f, x: np.ndarray, i: int, h: float) -> np.ndarray:
    e = np.zeros(x.shape[1])
    e[i] = h
    return (
        -f(x - 2 * e) + 16 * f(x - e) - 30 * f(x) + 16 * f(x + e) - f(x + 2 * e)
    ) / (12 * h * h)


def d_cross(f, x: np.ndarray, i: int, j: int, h: float) -> np.ndarray:
    ei = np.zeros(x.shape[1])
    ei[i] = h
    ej = np.zeros(x.shape[1])
    ej[j] = h
    return (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4 * h * h)


def grad_hess(f, x: np.ndarray, h: float = DEFAULT_STEP):
    """Gradient and Hessian of f at each row of x by central differences.

    f maps an (N, k) array of points to an (N,) array of values.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, k = x.shape
    grad = np.empty((n, k))
    hess = np.empty((n, k, k))
    for i in range(k):
        grad[:, i] = d1(f, x, i, h)
        hess[:, i, i] = d2(f, x, i, h)
    for i in range(k):
        for j in range(i + 1, k):
            hij = d_cross(f, x, i, j, h)
            hess[:, i, j] = hij
            hess[:, j, i] = hij
    return grad, hess

"""Spherical harmonics on S^{d-1} and classical orthogonal polynomials on B^d.

Explicit trigonometric harmonics for d = 2 and associated-Legendre style
harmonics for d = 3, both orthonormal under the normalized surface measure.
Ball bases are radial-Jacobi times harmonic, orthonormal under the normalized
(1-|x|^2)^{mu-1/2} measure.  Everything evaluates through homogeneous
polynomial recurrences, so the scaled forms t^m P(x/t) stay finite at t -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import poly1d
from .errors import ArgumentError, CapabilityError, ParameterError
from .fdcore import DEFAULT_STEP, d1, d2, grad_hess
from .poly1d import Family1D, poch

__all__ = [
    "BallBasis",
    "BallPoly",
    "Harmonic",
    "HarmonicBasis",
    "ball_basis",
    "ball_diffop_residual",
    "ball_kernel",
    "ball_rule",
    "harmonic_dim",
    "harmonics",
    "laplace_beltrami_eigencheck",
    "sphere_kernel",
    "sphere_rule",
]


def harmonic_dim(d: int, m: int) -> int:
    """dim of the degree-m spherical-harmonic space in d variables."""
    if m < 0:
        return 0
    return math.comb(m + d - 1, m) - (math.comb(m + d - 3, m - 2) if m >= 2 else 0)


def _circular(x: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Re((x1 + i x2)^m), Im(...): homogeneous degree-m harmonics in 2 vars."""
    z = x[..., 0] + 1j * x[..., 1]
    zm = z**m
    return zm.real, zm.imag


def _gegenbauer_hom(j: int, lam: float, z: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """r^j C_j^lam(z/r) through the homogenized recurrence (r2 = r^2)."""
    if j == 0:
        return np.ones_like(z)
    prev = np.ones_like(z)
    cur = 2 * lam * z
    for k in range(1, j):
        prev, cur = cur, (2 * (k + lam) * z * cur - (k + 2 * lam - 1) * r2 * prev) / (k + 1)
    return cur


class Harmonic:
    """One orthonormal spherical harmonic, degree m, homogeneous evaluation."""

    def __init__(self, d: int, m: int, raw, norm: float, label: str):
        self.d = d
        self.m = m
        self._raw = raw
        self._scale = 1.0 / math.sqrt(norm)
        self.label = label

    def __call__(self, x) -> np.ndarray:
        """Homogeneous evaluation Y(x) = |x|^m Y(x/|x|) at ambient points."""
        x = np.asarray(x, dtype=float)
        return self._scale * self._raw(x)

    def on_sphere(self, xi) -> np.ndarray:
        return self(xi)


@dataclass(frozen=True)
class HarmonicBasis:
    d: int
    m: int
    elements: tuple[Harmonic, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def _raw_harmonics_d2(m: int):
    if m == 0:
        return [(lambda x: np.ones(x.shape[:-1]), "1")]
    return [
        (lambda x, m=m: _circular(x, m)[0], f"re(z^{m})"),
        (lambda x, m=m: _circular(x, m)[1], f"im(z^{m})"),
    ]


def _raw_harmonics_d3(m: int):
    """Degree-m solid harmonics in 3 vars: A_k/B_k(x1,x2) * Gegenbauer in x3."""
    out = []

    def make(k: int, part: int):
        def raw(x, k=k, part=part, m=m):
            r2 = np.sum(x * x, axis=-1)
            g = _gegenbauer_hom(m - k, k + 0.5, x[..., 2], r2)
            if k == 0:
                return g
            return _circular(x, k)[part] * g

        return raw

    out.append((make(0, 0), f"P_{m}"))
    for k in range(1, m + 1):
        out.append((make(k, 0), f"re(z^{k})*C_{m - k}"))
        out.append((make(k, 1), f"im(z^{k})*C_{m - k}"))
    return out


@lru_cache(maxsize=256)
def harmonics(d: int, m: int) -> HarmonicBasis:
    """Orthonormal basis of the degree-m harmonics on S^{d-1} (d = 2 or 3)."""
    if d not in (2, 3):
        raise CapabilityError(f"harmonics provided for d in {{2, 3}}, got d={d}")
    if m < 0:
        raise ArgumentError("degree must be >= 0")
    raw = _raw_harmonics_d2(m) if d == 2 else _raw_harmonics_d3(m)
    pts, w = sphere_rule(d, 2 * m + 1)
    elements = []
    for fn, label in raw:
        vals = fn(pts)
        norm = float(np.dot(w, vals * vals))
        elements.append(Harmonic(d, m, fn, norm, label))
    basis = HarmonicBasis(d, m, tuple(elements))
    if len(basis) != harmonic_dim(d, m):
        raise AssertionError("harmonic basis size mismatch")
    return basis


@lru_cache(maxsize=256)
def sphere_rule(d: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature (points, weights) for the normalized measure on S^{d-1}.

    Exact for spherical polynomials up to the given degree.  d = 2 is an
    equispaced-angle rule, d = 3 a Gauss x equispaced product.
    """
    if d == 2:
        npts = max(4, degree + 1)
        th = 2 * np.pi * np.arange(npts) / npts
        pts = np.stack([np.cos(th), np.sin(th)], axis=-1)
        return pts, np.full(npts, 1.0 / npts)
    if d == 3:
        ncos = max(2, (degree + 2) // 2)
        nphi = max(4, degree + 1)
        rule = poly1d.gauss_rule(("jacobi", 0.0, 0.0), ncos)
        u, wu = rule.nodes, rule.weights
        phi = 2 * np.pi * np.arange(nphi) / nphi
        s = np.sqrt(1 - u * u)
        pts = np.stack(
            [
                np.outer(s, np.cos(phi)).ravel(),
                np.outer(s, np.sin(phi)).ravel(),
                np.outer(u, np.ones(nphi)).ravel(),
            ],
            axis=-1,
        )
        w = np.outer(wu, np.full(nphi, 1.0 / nphi)).ravel()
        return pts, w
    raise CapabilityError(f"sphere rule provided for d in {{2, 3}}, got d={d}")


def sphere_kernel(d: int, n: int, xi, eta):
    """Reproducing kernel of degree-n harmonics: Z_n^{(d-2)/2}(<xi, eta>)."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    for v in (xi, eta):
        if np.max(np.abs(np.sum(v * v, axis=-1) - 1.0)) > 1e-10:
            raise ArgumentError("sphere_kernel requires unit vectors")
    return poly1d.zn_eval((d - 2) / 2.0, n, np.sum(xi * eta, axis=-1))


def laplace_beltrami_eigencheck(d: int, m: int, Y: Harmonic, points, h: float = DEFAULT_STEP):
    """Max FD residual of Delta_0 Y = -m(m+d-2) Y over points on S^{d-1}."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if d == 2:
        th = np.arctan2(pts[:, 1], pts[:, 0]).reshape(-1, 1)

        def f(a):
            return Y.on_sphere(np.stack([np.cos(a[:, 0]), np.sin(a[:, 0])], axis=-1))

        lb = d2(f, th, 0, h)
        vals = f(th)
    elif d == 3:
        th = np.arccos(np.clip(pts[:, 2], -1, 1))
        ph = np.arctan2(pts[:, 1], pts[:, 0])
        ang = np.stack([th, ph], axis=-1)

        def f(a):
            st = np.sin(a[:, 0])
            return Y.on_sphere(
                np.stack([st * np.cos(a[:, 1]), st * np.sin(a[:, 1]), np.cos(a[:, 0])], axis=-1)
            )

        st = np.sin(th)
        if np.min(np.abs(st)) < 0.05:
            raise ArgumentError("points too close to the poles for the FD chart")
        lb = d2(f, ang, 0, h) + (np.cos(th) / st) * d1(f, ang, 0, h) + d2(f, ang, 1, h) / st**2
        vals = f(ang)
    else:
        raise CapabilityError("finite-difference route provided for d in {2, 3}")
    return float(np.max(np.abs(lb + m * (m + d - 2) * vals)))


# ---------------------------------------------------------------------------
# ball polynomials
# ---------------------------------------------------------------------------


class BallPoly:
    """One orthonormal ball polynomial: radial Jacobi factor times harmonic."""

    def __init__(self, d: int, n: int, mu: float, j: int, harmonic: Harmonic, ell: int):
        self.d = d
        self.n = n
        self.mu = mu
        self.j = j
        self.ell = ell
        self.harmonic = harmonic
        m_y = n - 2 * j
        self._jac_a = mu - 0.5
        self._jac_b = m_y + (d - 2) / 2.0
        # moment ratio E[s^{m_y}] times the shifted Jacobi norm
        h = poch(d / 2.0, m_y) / poch(mu + (d + 1) / 2.0, m_y) * poly1d.norm_sq(
            Family1D.jacobi(self._jac_a, self._jac_b), j
        )
        self._scale = 1.0 / math.sqrt(h)

    @property
    def index(self) -> tuple[int, int]:
        return (self.j, self.ell)

    def _radial_hom(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """v^j P_j^{(a,b)}(u/v) by the homogenized Jacobi recurrence."""
        a, b, j = self._jac_a, self._jac_b, self.j
        if j == 0:
            return np.ones_like(u)
        prev = np.ones_like(u)
        cur = (a + 1) * v + (a + b + 2) * (u - v) / 2.0
        for k in range(1, j):
            c = 2 * k + a + b
            a1 = 2 * (k + 1) * (k + a + b + 1) * c
            a2 = (c + 1) * (a * a - b * b)
            a3 = (c + 1) * c * (c + 2)
            a4 = 2 * (k + a) * (k + b) * (c + 2)
            prev, cur = cur, ((a2 * v + a3 * u) * cur - a4 * v * v * prev) / a1
        return cur

    def on_ball(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        r2 = np.sum(y * y, axis=-1)
        return self._scale * self._radial_hom(2 * r2 - 1.0, np.ones_like(r2)) * self.harmonic(y)

    def scaled(self, x, t) -> np.ndarray:
        """t^n P(x/t), evaluated as a polynomial in (x, t) (finite at t=0)."""
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        r2 = np.sum(x * x, axis=-1)
        return self._scale * self._radial_hom(2 * r2 - t * t, t * t) * self.harmonic(x)

    def __call__(self, y):
        return self.on_ball(y)


@dataclass(frozen=True)
class BallBasis:
    d: int
    n: int
    mu: float
    elements: tuple[BallPoly, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


@lru_cache(maxsize=512)
def ball_basis(d: int, n: int, mu: float) -> BallBasis:
    """Orthonormal basis of degree-n orthogonal polynomials on B^d."""
    if not mu > -0.5:
        raise ParameterError(f"ball weight needs mu > -1/2, got {mu}")
    if n < 0:
        raise ArgumentError("degree must be >= 0")
    elements = []
    for j in range(n // 2 + 1):
        hb = harmonics(d, n - 2 * j)
        for ell, yh in enumerate(hb):
            elements.append(BallPoly(d, n, mu, j, yh, ell))
    basis = BallBasis(d, n, mu, tuple(elements))
    if len(basis) != math.comb(n + d - 1, n):
        raise AssertionError("ball basis size mismatch")
    return basis


@lru_cache(maxsize=256)
def ball_rule(d: int, mu: float, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature for the normalized (1-|x|^2)^{mu-1/2} measure on B^d."""
    nrad = max(2, degree // 2 + 2)
    srule = poly1d.gauss_rule(("jacobi01", (d - 2) / 2.0, mu - 0.5), nrad)
    spts, sw = sphere_rule(d, degree)
    r = np.sqrt(srule.nodes)
    pts = r[:, None, None] * spts[None, :, :]
    w = np.outer(srule.weights, sw)
    return pts.reshape(-1, d), w.ravel()


def ball_kernel(d: int, n: int, mu: float, x, y, route: str = "sum", npoints: int = 48):
    """Degree-n reproducing kernel on B^d by basis sum or one-integral form."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if route == "sum":
        basis = ball_basis(d, n, mu)
        return sum(p.on_ball(x) * p.on_ball(y) for p in basis)
    if route == "integral":
        if mu < 0:
            raise ParameterError("integral route needs mu >= 0")
        v, w = poly1d.symmetric_beta_nodes(mu, npoints)
        rx = np.sqrt(np.maximum(0.0, 1 - np.sum(x * x, axis=-1)))
        ry = np.sqrt(np.maximum(0.0, 1 - np.sum(y * y, axis=-1)))
        arg = np.multiply.outer(np.sum(x * y, axis=-1), np.ones_like(v)) + np.multiply.outer(
            rx * ry, v
        )
        vals = poly1d.zn_eval(mu + (d - 1) / 2.0, n, arg)
        return np.tensordot(vals, w, axes=([-1], [0]))
    raise ArgumentError(f"unknown route {route!r}")


def ball_diffop_residual(d: int, n: int, mu: float, u, points, h: float = DEFAULT_STEP):
    """Max FD residual of the ball operator identity for u in V_n(B^d)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if np.max(np.sum(pts * pts, axis=-1)) >= 1.0:
        raise ArgumentError("interior points required")

    def f(z):
        return u(z)

    grad, hess = grad_hess(f, pts, h)
    lap = np.trace(hess, axis1=1, axis2=2)
    xg = np.einsum("ni,ni->n", pts, grad)
    xg2 = np.einsum("ni,nij,nj->n", pts, hess, pts) + xg
    vals = f(pts)
    res = lap - xg2 - (2 * mu + d - 1) * xg + n * (n + 2 * mu + d - 1) * vals
    return float(np.max(np.abs(res)))

"""Reproducing kernels on the four domains by three routes.

* ``kernel_sum``            -- summation over an orthogonal basis
* ``addition_surface/solid``-- the closed integral (addition-formula) route
* ``closed_forms``          -- the stated special-case formulas
plus parity splitting, the hyperboloid-to-cone transfer, Poisson kernels of
the Gegenbauer families, and Mehler formulas for the Hermite families.

Every integral route is evaluated against *probability* measures built by
normalizing each weight factor, which pins the composite constants: all
routes return exactly 1 at n = 0.  Degenerate parameters (gamma = 0, mu = 0,
beta at its boundary) switch automatically to the two-point-average or
point-mass limit of the corresponding factor.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from . import bases, poly1d
from .domain import PointCH, WeightParams
from .errors import ArgumentError, CapabilityError, ParameterError

__all__ = [
    "addition_solid",
    "addition_surface",
    "addition_tensor",
    "closed_forms",
    "hyperboloid_transfer",
    "kernel_lambda",
    "kernel_sum",
    "mehler_solid",
    "mehler_surface",
    "parity_split",
    "poisson_gegenbauer",
    "poisson_series",
]

_PARITIES = {"full": None, "even": 0, "odd": 1}


def _pt(p) -> tuple[np.ndarray, float]:
    if isinstance(p, PointCH):
        return p.as_arrays()
    x, t = p
    return np.asarray(x, dtype=float), float(t)


def _sign(v: float) -> float:
    # measure-zero choice at 0, fixed for determinism
    return -1.0 if v < 0 else 1.0


def _npoints(n: int, npoints: int | None) -> int:
    return npoints if npoints is not None else max(24, 2 * n + 8)


# ---------------------------------------------------------------------------
# summation route
# ---------------------------------------------------------------------------


def _degree_elements(params: WeightParams, n: int, parity: int | None) -> Iterable:
    if params.rho == 0 or parity == 0:
        if parity is None:
            return bases.basis(params, n)
        return bases.parity_basis(params, n, parity)
    # odd blocks on a hyperboloid: generic Christoffel route (surface only)
    if params.kind != "surface":
        raise CapabilityError("odd-parity solid hyperboloid kernels are not provided")
    gen = bases.build_generic_surface(params, n)
    if parity == 1:
        return [e for e in gen if e.index.parity == 1]
    return gen


def kernel_sum(params: WeightParams, n: int, p, q, parity: str = "full") -> float:
    """P_n(p, q) as a sum Q(p) Q(q) / h over the indicated parity block."""
    if parity not in _PARITIES:
        raise ArgumentError(f"parity must be one of {sorted(_PARITIES)}")
    xp, tp = _pt(p)
    xq, tq = _pt(q)
    total = 0.0
    for el in _degree_elements(params, n, _PARITIES[parity]):
        if el.norm_sq is None:
            raise ParameterError("kernel sums need normalizable weight parameters")
        total += el(xp, tp) * el(xq, tq) / el.norm_sq
    return float(total)


def kernel_sum_grid(
    params: WeightParams, n: int, p, xq: np.ndarray, tq: np.ndarray, parity: str = "full"
) -> np.ndarray:
    """P_n(p, q_i) over a batch of second points, by basis summation."""
    if parity not in _PARITIES:
        raise ArgumentError(f"parity must be one of {sorted(_PARITIES)}")
    xp, tp = _pt(p)
    out = np.zeros(len(np.atleast_1d(tq)))
    for el in _degree_elements(params, n, _PARITIES[parity]):
        if el.norm_sq is None:
            raise ParameterError("kernel sums need normalizable weight parameters")
        out += el(xp, tp) * el(xq, tq) / el.norm_sq
    return out


def parity_split(params: WeightParams, n: int, p, q) -> tuple[float, float]:
    """(even, odd) parts of P_n via reflection in the second point's t."""
    if not params.double:
        raise CapabilityError("parity split needs an even weight in t")
    xq, tq = _pt(q)
    plus = kernel_sum(params, n, p, (xq, tq))
    minus = kernel_sum(params, n, p, (xq, -tq))
    return (plus + minus) / 2.0, (plus - minus) / 2.0


# ---------------------------------------------------------------------------
# addition-formula (integral) route
# ---------------------------------------------------------------------------


def kernel_lambda(params: WeightParams) -> float:
    """Index of the one-variable kernel Z_n in the addition formula."""
    mu = params.mu if params.mu is not None else 0.0
    gamma = params.gamma if params.gamma is not None else 0.0
    return params.beta + gamma + mu + (params.d - 1) / 2.0


def _require_even_range(params: WeightParams):
    if params.family != "gegenbauer":
        raise CapabilityError("the addition formula is for the Gegenbauer-type weights")
    if params.kind == "surface":
        if params.beta < 0 or params.gamma < 0:
            raise ParameterError("surface addition formula needs beta >= 0 and gamma >= 0")
    else:
        if params.beta < 0.5 or params.gamma < 0 or params.mu < 0:
            raise ParameterError(
                "solid addition formula needs beta >= 1/2 and gamma, mu >= 0"
            )


def addition_tensor_batch(params: WeightParams, p, xq: np.ndarray, tq: np.ndarray, npoints: int):
    """Batched addition-measure arguments against many second points.

    Returns (xi, w): xi has shape (len(tq), M) and w is a probability vector
    of length M; T g(p, q_i) = xi_g = (g(xi) @ w).
    """
    _require_even_range(params)
    xp, tp = _pt(p)
    xq = np.atleast_2d(np.asarray(xq, dtype=float))
    tq = np.atleast_1d(np.asarray(tq, dtype=float)).copy()
    d, rho, beta = params.d, params.rho, params.beta
    if rho > 0:
        tp = _sign(tp) * math.sqrt(max(0.0, tp * tp - rho * rho))
        tq = np.sign(tq) * np.sqrt(np.maximum(0.0, tq * tq - rho * rho))
    ip = xq @ xp
    ct = math.sqrt(max(0.0, 1.0 - tp * tp))
    cs = np.sqrt(np.maximum(0.0, 1.0 - tq * tq))
    st = tp * tq
    v, wv = poly1d.symmetric_beta_nodes(params.gamma, npoints)
    if params.kind == "surface":
        z1, w1 = poly1d.onesided_jacobi_nodes((d - 2) / 2.0, beta - 1.0, npoints)
        if len(z1) == 1 and z1[0] == -1.0:
            z2, w2 = np.zeros(1), np.ones(1)  # (1+z1)/2 factor vanishes
        else:
            rule2 = poly1d.gauss_rule(("gegenbauer", beta), npoints)
            z2, w2 = rule2.nodes, rule2.weights
        xi = (
            (1 - z1[None, :, None, None]) / 2.0 * ip[:, None, None, None]
            + (1 + z1[None, :, None, None]) / 2.0 * z2[None, None, :, None] * st[:, None, None, None]
            + v[None, None, None, :] * (ct * cs)[:, None, None, None]
        )
        w = w1[:, None, None] * w2[None, :, None] * wv[None, None, :]
        return xi.reshape(len(tq), -1), w.ravel()
    mu = params.mu
    rp = math.sqrt(max(0.0, tp * tp - float(np.dot(xp, xp))))
    rq = np.sqrt(np.maximum(0.0, tq * tq - np.sum(xq * xq, axis=-1)))
    z1, w1 = poly1d.onesided_jacobi_nodes(mu + (d - 1) / 2.0, beta - 1.5, npoints)
    if len(z1) == 1 and z1[0] == -1.0:
        z2, w2 = np.zeros(1), np.ones(1)  # (1+z1)/2 factor vanishes
    else:
        rule2 = poly1d.gauss_rule(("gegenbauer", beta - 0.5), npoints)
        z2, w2 = rule2.nodes, rule2.weights
    u, wu = poly1d.symmetric_beta_nodes(mu, npoints)
    Z1 = z1[None, :, None, None, None]
    Z2 = z2[None, None, :, None, None]
    U = u[None, None, None, :, None]
    V = v[None, None, None, None, :]
    xi = (
        (1 - Z1) / 2.0 * (ip[:, None, None, None, None] + U * (rp * rq)[:, None, None, None, None])
        + (1 + Z1) / 2.0 * Z2 * st[:, None, None, None, None]
        + V * (ct * cs)[:, None, None, None, None]
    )
    w = (
        w1[:, None, None, None]
        * w2[None, :, None, None]
        * wu[None, None, :, None]
        * wv[None, None, None, :]
    )
    return xi.reshape(len(tq), -1), w.ravel()


def addition_tensor(params: WeightParams, p, q, npoints: int):
    """Arguments xi(p, q; u) and weights of the even-kernel addition measure.

    Returns (xi, w) with w a probability vector; every even-parity kernel,
    Poisson kernel, and the translation operator integrate a profile g as
    sum(g(xi) * w).  rho > 0 enters through t -> sqrt(t^2 - rho^2).
    """
    xq, tq = _pt(q)
    xi, w = addition_tensor_batch(params, p, xq[None, :], np.array([tq]), npoints)
    return xi[0], w


def _odd_shift(params: WeightParams) -> tuple[WeightParams, float]:
    """Shifted parameters and constant of the odd-to-even kernel reduction."""
    alpha = kernel_lambda(params) - params.gamma
    c = (alpha + params.gamma + 1.0) / (alpha + 0.5)
    shifted = WeightParams(
        params.family, params.d, params.beta + 1.0, params.gamma, params.mu, params.rho
    )
    return shifted, c


def _addition(params: WeightParams, n: int, parity: str, p, q, npoints: int | None) -> float:
    if parity == "even":
        xi, w = addition_tensor(params, p, q, _npoints(n, npoints))
        return float(np.dot(w, poly1d.zn_eval(kernel_lambda(params), n, xi)))
    if parity == "odd":
        if params.rho > 0:
            raise CapabilityError("odd-parity addition formula exists on the cone only")
        if n == 0:
            return 0.0
        shifted, c = _odd_shift(params)
        _, tp = _pt(p)
        _, tq = _pt(q)
        return c * tp * tq * _addition(shifted, n - 1, "even", p, q, npoints)
    if parity == "full":
        return _addition(params, n, "even", p, q, npoints) + _addition(
            params, n, "odd", p, q, npoints
        )
    raise ArgumentError(f"parity must be even, odd, or full, got {parity!r}")


def addition_surface(params: WeightParams, n: int, parity: str, p, q, npoints=None) -> float:
    """Surface kernel by the triple-integral addition formula (beta, gamma >= 0)."""
    if params.kind != "surface":
        raise ArgumentError("addition_surface needs surface parameters")
    return _addition(params, n, parity, p, q, npoints)


def addition_solid(params: WeightParams, n: int, parity: str, p, q, npoints=None) -> float:
    """Solid kernel by the quadruple-integral addition formula (beta >= 1/2)."""
    if params.kind != "solid":
        raise ArgumentError("addition_solid needs solid parameters")
    return _addition(params, n, parity, p, q, npoints)


def hyperboloid_transfer(params: WeightParams, n: int, p, q, route: str = "sum") -> float:
    """Even kernel on a hyperboloid as the cone kernel at t -> sqrt(t^2-rho^2)."""
    if params.rho == 0:
        raise ArgumentError("transfer applies to rho > 0 parameters")
    cone = WeightParams(
        params.family, params.d, params.beta, params.gamma, params.mu, 0.0
    )
    xp, tp = _pt(p)
    xq, tq = _pt(q)
    rho2 = params.rho**2
    pc = (xp, math.sqrt(max(0.0, tp * tp - rho2)))
    qc = (xq, math.sqrt(max(0.0, tq * tq - rho2)))
    if route == "sum":
        return kernel_sum(cone, n, pc, qc, parity="even")
    if route == "integral":
        return _addition(cone, n, "even", pc, qc, None)
    raise ArgumentError(f"unknown route {route!r}")


# ---------------------------------------------------------------------------
# closed forms for the stated special cases
# ---------------------------------------------------------------------------


def closed_forms(case: str, params: WeightParams, n: int, p, q, npoints=None) -> float:
    """The special-case kernel formulas (Gegenbauer/Chebyshev weights).

    Cases: surface_gegenbauer (beta=0), surface_chebyshev (beta=gamma=0),
    surface_gegenbauer_hyp (beta=0, rho>0), solid_gegenbauer (beta=1/2),
    solid_chebyshev (beta=1/2, gamma=mu=0).
    """
    xp, tp = _pt(p)
    xq, tq = _pt(q)
    ip = float(np.dot(xp, xq))
    npts = _npoints(n, npoints)
    d = params.d

    if case == "surface_gegenbauer":
        if params.kind != "surface" or params.beta != 0:
            raise ParameterError("case needs surface parameters with beta = 0")
        g = params.gamma
        v, wv = poly1d.symmetric_beta_nodes(g, npts)
        arg = ip + v * math.sqrt(max(0.0, (1 - tp * tp) * (1 - tq * tq)))
        return float(np.dot(wv, poly1d.zn_eval(g + (d - 1) / 2.0, n, arg)))
    if case == "surface_chebyshev":
        if params.kind != "surface" or params.beta != 0 or params.gamma != 0:
            raise ParameterError("case needs surface parameters with beta = gamma = 0")
        c = math.sqrt(max(0.0, (1 - tp * tp) * (1 - tq * tq)))
        lam = (d - 1) / 2.0
        return 0.5 * float(
            poly1d.zn_eval(lam, n, ip + c) + poly1d.zn_eval(lam, n, ip - c)
        )
    if case == "surface_gegenbauer_hyp":
        if params.kind != "surface" or params.beta != 0 or not params.rho > 0:
            raise ParameterError("case needs surface parameters with beta = 0, rho > 0")
        g, rho2 = params.gamma, params.rho**2
        v, wv = poly1d.symmetric_beta_nodes(g, npts)
        arg = ip + v * math.sqrt(
            max(0.0, (1 + rho2 - tp * tp) * (1 + rho2 - tq * tq))
        )
        return float(np.dot(wv, poly1d.zn_eval(g + (d - 1) / 2.0, n, arg)))
    if case == "solid_gegenbauer":
        if params.kind != "solid" or params.beta != 0.5:
            raise ParameterError("case needs solid parameters with beta = 1/2")
        g, mu = params.gamma, params.mu
        rp = math.sqrt(max(0.0, tp * tp - float(np.dot(xp, xp))))
        rq = math.sqrt(max(0.0, tq * tq - float(np.dot(xq, xq))))
        cc = math.sqrt(max(0.0, (1 - tp * tp) * (1 - tq * tq)))
        u, wu = poly1d.symmetric_beta_nodes(mu, npts)
        v, wv = poly1d.symmetric_beta_nodes(g, npts)
        arg = (ip + u[:, None] * rp * rq) + v[None, :] * cc
        vals = poly1d.zn_eval(g + mu + d / 2.0, n, arg)
        return float(wu @ vals @ wv)
    if case == "solid_chebyshev":
        if params.kind != "solid" or params.beta != 0.5 or params.gamma != 0 or params.mu != 0:
            raise ParameterError("case needs solid parameters with beta=1/2, gamma=mu=0")
        rp = math.sqrt(max(0.0, tp * tp - float(np.dot(xp, xp))))
        rq = math.sqrt(max(0.0, tq * tq - float(np.dot(xq, xq))))
        cc = math.sqrt(max(0.0, (1 - tp * tp) * (1 - tq * tq)))
        total = 0.0
        for su in (+1, -1):
            for sv in (+1, -1):
                total += poly1d.zn_eval(d / 2.0, n, (ip + su * rp * rq) + sv * cc)
        return float(total) / 4.0
    raise CapabilityError(f"unknown closed-form case {case!r}")


# ---------------------------------------------------------------------------
# Poisson and Mehler kernels
# ---------------------------------------------------------------------------


def poisson_gegenbauer(params: WeightParams, r: float, p, q, npoints: int = 48) -> float:
    """Even-parity Poisson kernel sum_n P_n^E r^n in closed (generating) form."""
    if not 0 <= r < 1:
        raise ParameterError(f"need 0 <= r < 1, got {r}")
    xi, w = addition_tensor(params, p, q, npoints)
    lam = kernel_lambda(params)
    gen = (1 - r * r) / (1 - 2 * r * xi + r * r) ** (lam + 1.0)
    return float(np.dot(w, gen))


def poisson_series(
    params: WeightParams, r: float, p, q, nmax: int, parity: str = "even"
) -> float:
    """Truncated series sum_{n<=nmax} P_n(p, q) r^n through the basis sums."""
    if not 0 <= r < 1:
        raise ParameterError(f"need 0 <= r < 1, got {r}")
    return float(
        sum(kernel_sum(params, n, p, q, parity) * r**n for n in range(nmax + 1))
    )


def _mehler_eta_tensor(params: WeightParams, p, q, npoints: int):
    """eta arguments and weights of the Mehler (z1, z2 [, u]) integrals."""
    if params.family != "hermite":
        raise CapabilityError("Mehler formulas are for the Hermite-type weights")
    xp, tp = _pt(p)
    xq, tq = _pt(q)
    d, rho, beta = params.d, params.rho, params.beta
    if rho > 0:
        tp = _sign(tp) * math.sqrt(max(0.0, tp * tp - rho * rho))
        tq = _sign(tq) * math.sqrt(max(0.0, tq * tq - rho * rho))
    ip = float(np.dot(xp, xq))
    if params.kind == "surface":
        if beta < 0:
            raise ParameterError("surface Mehler kernel needs beta >= 0")
        z1, w1 = poly1d.onesided_jacobi_nodes((d - 2) / 2.0, beta - 1.0, npoints)
        if len(z1) == 1 and z1[0] == -1.0:
            z2, w2 = np.zeros(1), np.ones(1)
        else:
            rule2 = poly1d.gauss_rule(("gegenbauer", beta), npoints)
            z2, w2 = rule2.nodes, rule2.weights
        eta = (1 - z1[:, None]) / 2.0 * ip + (1 + z1[:, None]) / 2.0 * z2[None, :] * tp * tq
        w = w1[:, None] * w2[None, :]
        return eta.ravel(), w.ravel(), tp, tq
    mu = params.mu
    if beta < 0.5:
        raise ParameterError("solid Mehler kernel needs beta >= 1/2")
    rp = math.sqrt(max(0.0, tp * tp - float(np.dot(xp, xp))))
    rq = math.sqrt(max(0.0, tq * tq - float(np.dot(xq, xq))))
    z1, w1 = poly1d.onesided_jacobi_nodes(mu + (d - 1) / 2.0, beta - 1.5, npoints)
    if len(z1) == 1 and z1[0] == -1.0:
        z2, w2 = np.zeros(1), np.ones(1)
    else:
        rule2 = poly1d.gauss_rule(("gegenbauer", beta - 0.5), npoints)
        z2, w2 = rule2.nodes, rule2.weights
    u, wu = poly1d.symmetric_beta_nodes(mu, npoints)
    Z1 = z1[:, None, None]
    Z2 = z2[None, :, None]
    U = u[None, None, :]
    eta = (1 - Z1) / 2.0 * (ip + U * rp * rq) + (1 + Z1) / 2.0 * Z2 * tp * tq
    w = w1[:, None, None] * w2[None, :, None] * wu[None, None, :]
    return eta.ravel(), w.ravel(), tp, tq


def _mehler(params: WeightParams, r: float, p, q, npoints: int) -> float:
    if not 0 <= r < 1:
        raise ParameterError(f"need 0 <= r < 1, got {r}")
    eta, w, tp, tq = _mehler_eta_tensor(params, p, q, npoints)
    mu = params.mu if params.mu is not None else 0.0
    pref = (1 - r * r) ** -(params.beta + mu + params.d / 2.0)
    expo = np.exp((2 * r * eta - r * r * (tp * tp + tq * tq)) / (1 - r * r))
    return float(pref * np.dot(w, expo))


def mehler_surface(params: WeightParams, r: float, p, q, npoints: int = 48) -> float:
    """Poisson kernel of the even Hermite system on the surface, Mehler form.

    beta = 0 collapses the z-integrals and gives the closed exponential
    (1-r^2)^{-d/2} exp(-((t^2+s^2) r^2 - 2 r <x,y> sign(st)) / (1-r^2)).
    """
    if params.kind != "surface":
        raise ArgumentError("mehler_surface needs surface parameters")
    return _mehler(params, r, p, q, npoints)


def mehler_solid(params: WeightParams, r: float, p, q, npoints: int = 48) -> float:
    """Poisson kernel of the even Hermite system on the solid, Mehler form."""
    if params.kind != "solid":
        raise ArgumentError("mehler_solid needs solid parameters")
    return _mehler(params, r, p, q, npoints)

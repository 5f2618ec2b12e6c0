"""Fourier orthogonal series: coefficients, projections, translation operator,
convolution, partial sums, Cesaro means, and summability tables.

The addition formula gives the series a one-dimensional structure: the
translation operator T carries a profile g on [-1, 1] to a two-point kernel,
S_n(f) = f * k_n(varpi_lambda; 1, .), and the Cesaro means convolve with the
Cesaro kernel of the Gegenbauer weight varpi_lambda, lambda = beta + gamma
[+ mu] + (d-1)/2.  Convolution routes act on the even-in-t part directly; odd
parts are carried through the beta -> beta+1 kernel shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bases, domain, kernels, poly1d
from .bases import BasisIndex
from .domain import WeightParams
from .errors import ArgumentError, CapabilityError, ParameterError

__all__ = [
    "ExpansionCoefficients",
    "cesaro_mean",
    "cesaro_profile",
    "convolve",
    "eigen_multiplier",
    "expand",
    "lebesgue_value",
    "partial_sum",
    "project",
    "summability_table",
    "translate",
]


@dataclass
class ExpansionCoefficients:
    """Truncated Fourier orthogonal coefficients of a function."""

    params: WeightParams
    n_max: int
    coeffs: dict[BasisIndex, float] = field(default_factory=dict)

    def parseval_sum(self) -> float:
        """sum c^2 h over the stored indices (monotone in n_max)."""
        total = 0.0
        for ix, c in self.coeffs.items():
            el = bases.element(self.params, ix)
            total += c * c * el.norm_sq
        return total

    def odd_energy(self) -> float:
        """Largest |coefficient| over odd-parity indices."""
        vals = [abs(c) for ix, c in self.coeffs.items() if ix.parity == 1]
        return max(vals, default=0.0)


def expand(f, params: WeightParams, n_max: int, degree: int | None = None) -> ExpansionCoefficients:
    """Coefficients <f, Q>/<Q, Q> by quadrature, degrees 0..n_max."""
    if degree is None:
        degree = max(domain.quad_degree_default(), 2 * n_max + 6)
    x, t, w = domain.grid(params, degree)
    fv = f(x, t)
    out = ExpansionCoefficients(params, n_max)
    for n in range(n_max + 1):
        for el in bases.basis(params, n):
            out.coeffs[el.index] = float(np.dot(w, fv * el(x, t))) / el.norm_sq
    return out


def project(coeffs: ExpansionCoefficients, n: int):
    """proj_n f as a callable (x, t) -> value, from stored coefficients."""
    if n > coeffs.n_max:
        raise ArgumentError(f"projection degree {n} exceeds n_max={coeffs.n_max}")
    els = [(bases.element(coeffs.params, ix), c) for ix, c in coeffs.coeffs.items() if ix.n == n]

    def fn(x, t):
        return sum(c * el(x, t) for el, c in els)

    return fn


def project_kernel(f, params: WeightParams, n: int, p, degree: int | None = None) -> float:
    """proj_n f(p) through the reproducing kernel, as a quadrature."""
    x, t, w = domain.grid(params, degree)
    k = kernels.kernel_sum_grid(params, n, p, x, t, "full")
    return float(np.dot(w, f(x, t) * k))


# ---------------------------------------------------------------------------
# translation operator and convolution
# ---------------------------------------------------------------------------


def translate(g, params: WeightParams, p, q, npoints: int = 48) -> float:
    """T g(p, q) = integral of g(xi(p, q; u)) against the addition measure."""
    xi, w = kernels.addition_tensor(params, p, q, npoints)
    return float(np.dot(np.asarray(g(xi), dtype=float), w))


def _translate_grid(g, params, p, x, t, npoints) -> np.ndarray:
    out = np.empty(len(t))
    naxes = 4 if params.kind == "solid" else 3
    chunk = max(1, 2_000_000 // max(1, npoints**naxes))
    for lo in range(0, len(t), chunk):
        hi = min(lo + chunk, len(t))
        xi, w = kernels.addition_tensor_batch(params, p, x[lo:hi], t[lo:hi], npoints)
        out[lo:hi] = np.asarray(g(xi), dtype=float) @ w
    return out


def _conv_npoints(n: int, npoints: int | None) -> int:
    # the translated profiles are polynomials of degree <= n in each axis
    return npoints if npoints is not None else max(8, n // 2 + 4)


def eigen_multiplier(g, params: WeightParams, n: int, npoints: int = 64) -> float:
    """Lambda_n(g) = int g(t) p_n(t)/p_n(1) dvarpi_lambda(t)."""
    lam = kernels.kernel_lambda(params)
    rule = poly1d.gauss_rule(("gegenbauer", lam), npoints)
    fam = poly1d.Family1D.gegenbauer(lam)
    pn = poly1d.eval_poly(fam, n, rule.nodes)
    pn1 = poly1d.eval_poly(fam, n, np.array(1.0))
    return float(np.dot(rule.weights, np.asarray(g(rule.nodes)) * pn / pn1))


def convolve(f, g, params: WeightParams, degree: int | None = None, npoints: int = 24):
    """(f * g)(p) = integral of f(q) T g(p, q) W(q) dq, as a callable on points.

    The translation acts through the even addition kernel; f is used as given
    (for f even this is the paper's convolution; split parities otherwise).
    """
    x, t, w = domain.grid(params, degree)
    fv = f(x, t)

    def fn(p) -> float:
        tg = _translate_grid(g, params, p, x, t, npoints)
        return float(np.dot(w, fv * tg))

    return fn


def cesaro_profile(lam: float, n: int, delta: float):
    """k_n^delta(varpi_lam; 1, .) = sum_k c_k^delta Z_k^lam as a callable."""
    cw = poly1d.cesaro_weights(n, delta)

    def g(v):
        v = np.asarray(v, dtype=float)
        tab = poly1d.zn_eval_all(lam, n, v)
        return np.tensordot(cw, tab, axes=(0, 0))

    return g


def _split_even_odd(f):
    def fe(x, t):
        return 0.5 * (f(x, t) + f(x, -t))

    def fo(x, t):
        return 0.5 * (f(x, t) - f(x, -t))

    return fe, fo


def cesaro_mean(
    f,
    n: int,
    delta: float,
    params: WeightParams,
    route: str = "coeff",
    degree: int | None = None,
    npoints: int | None = None,
):
    """The Cesaro (C, delta) mean S_n^delta(f) as a callable on (x, t).

    route="coeff" sums Cesaro-weighted projections; route="conv" convolves
    with the Cesaro kernel of varpi_lambda, the odd part of f going through
    the beta+1 convolution with degree shifted by one.
    """
    if delta < 0:
        raise ParameterError(f"need delta >= 0, got {delta}")
    if route == "coeff":
        coeffs = expand(f, params, n, degree)
        cw = poly1d.cesaro_weights(n, delta)
        projs = [project(coeffs, k) for k in range(n + 1)]

        def fn(x, t):
            return sum(cw[k] * projs[k](x, t) for k in range(n + 1))

        return fn
    if route != "conv":
        raise ArgumentError(f"route must be coeff or conv, got {route!r}")
    if degree is None:
        degree = max(20, 2 * n + 10)
    lam = kernels.kernel_lambda(params)
    npoints = _conv_npoints(n, npoints)
    fe, fo = _split_even_odd(f)
    conv_e = convolve(fe, cesaro_profile(lam, n, delta), params, degree, npoints)
    shifted, _ = kernels._odd_shift(params)

    def h(x, t):
        return fo(x, t) / t

    conv_o = (
        convolve(h, cesaro_profile(kernels.kernel_lambda(shifted), n - 1, delta), shifted, degree, npoints)
        if n >= 1
        else None
    )
    ratio = n / (n + delta) if n >= 1 else 0.0

    def fn(x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        xs = x.reshape(1, -1) if x.ndim == 1 else x
        ts = t.reshape(1) if scalar else t
        vals = np.array([conv_e((xi, ti)) for xi, ti in zip(xs, ts)])
        if conv_o is not None:
            vals = vals + ratio * ts * np.array([conv_o((xi, ti)) for xi, ti in zip(xs, ts)])
        return float(vals[0]) if scalar else vals

    return fn


def partial_sum(
    f,
    n: int,
    params: WeightParams,
    route: str = "coeff",
    degree: int | None = None,
    npoints: int | None = None,
):
    """S_n(f): Cesaro mean at delta = 0 (both routes)."""
    return cesaro_mean(f, n, 0.0, params, route, degree, npoints)


# ---------------------------------------------------------------------------
# summability tables
# ---------------------------------------------------------------------------


def _probe_points(params: WeightParams, probe: str):
    d = params.d
    if probe == "brink":
        if not params.compact:
            raise CapabilityError("brink probe needs a compact domain")
        x = np.zeros(d)
        x[0] = 1.0
        return [(x, 1.0)]
    if probe == "apex":
        if params.rho != 0:
            raise CapabilityError("apex probe is the cone tip (rho = 0)")
        return [(np.zeros(d), 0.0)]
    if probe == "grid":
        pts = domain.sample_points(params, count=5, seed=11)
        return [(np.asarray(p.x), p.t) for p in pts]
    raise ArgumentError(f"unknown probe {probe!r}")


def lebesgue_value(
    params: WeightParams,
    n: int,
    delta: float,
    probe: str = "brink",
    degree: int | None = None,
    npoints: int | None = None,
) -> float:
    """sup over probe points of int |K_n^delta(probe, q)| W(q) dq.

    K_n^delta is the Cesaro-weighted even reproducing kernel, evaluated by
    translating the one-variable Cesaro kernel of varpi_lambda.
    """
    if degree is None:
        degree = max(domain.quad_degree_default(), 2 * n + 16)
    if npoints is None:
        npoints = max(16, n // 2 + 8)
    lam = kernels.kernel_lambda(params)
    g = cesaro_profile(lam, n, delta)
    x, t, w = domain.grid(params, degree)
    best = 0.0
    for p in _probe_points(params, probe):
        kv = _translate_grid(g, params, p, x, t, npoints)
        best = max(best, float(np.dot(w, np.abs(kv))))
    return best


def summability_table(
    params: WeightParams,
    n_list,
    delta_list,
    probes=("brink",),
    degree: int | None = None,
) -> list[dict]:
    """Lebesgue-value rows (n, delta, probe, lebesgue_value) for the CLI."""
    rows = []
    for probe in probes:
        for n in n_list:
            for delta in delta_list:
                rows.append(
                    {
                        "n": int(n),
                        "delta": float(delta),
                        "probe": probe,
                        "lebesgue_value": lebesgue_value(params, int(n), float(delta), probe, degree),
                    }
                )
    return rows

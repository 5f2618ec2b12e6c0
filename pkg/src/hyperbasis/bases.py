"""Orthogonal bases on the surface/solid double cone and hyperboloid.

Every element is a one-variable factor in t times a spherical harmonic
(surface) or a scaled ball polynomial t^m P(x/t) (solid).  Evaluators are
global polynomials in (x, t), so they stay finite at the apex and under
finite-difference perturbation off the domain.

Compact families (weight |t|(t^2-rho^2)^{beta-1/2}(rho^2+1-t^2)^{gamma-1/2},
optionally times (t^2-rho^2-|x|^2)^{mu-1/2}) give Gegenbauer-type bases; the
exponential weight e^{-t^2} gives Hermite-type bases.  On hyperboloids
(rho > 0) only the blocks even in t have named closed forms; the odd blocks
come from the generic Christoffel construction.  The Jacobi/Laguerre bases on
the upper cone are included for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import blocks, poly1d
from .domain import WeightParams
from .errors import ArgumentError, CapabilityError, ParameterError
from .poly1d import Family1D, poch

__all__ = [
    "BasisElement",
    "BasisIndex",
    "basis",
    "build_generic_surface",
    "degree_indices",
    "element",
    "gegenbauer_surface_cone",
    "gegenbauer_surface_hyperboloid",
    "gegenbauer_solid",
    "hermite_surface",
    "hermite_solid",
    "hyperboloid_transfer_constant",
    "jacobi_upper_cone",
    "laguerre_upper_cone",
    "limit_g_to_h_check",
    "parity_basis",
    "surface_dim",
]


@dataclass(frozen=True)
class BasisIndex:
    """(n, m, k): total degree, harmonic/ball degree, inner index.

    k is the harmonic index ell on surfaces and the pair (j, ell) on solids.
    """

    n: int
    m: int
    k: int | tuple[int, int]

    def __post_init__(self):
        if not (0 <= self.m <= self.n):
            raise ArgumentError(f"need 0 <= m <= n, got m={self.m}, n={self.n}")

    @property
    def parity(self) -> int:
        """0 for elements even in t, 1 for odd (double domains)."""
        return (self.n - self.m) % 2

    def to_json(self) -> dict:
        k = list(self.k) if isinstance(self.k, tuple) else self.k
        return {"n": self.n, "m": self.m, "k": k, "parity": self.parity}


class BasisElement:
    """An orthogonal basis element with evaluator and squared norm.

    norm_sq is None in the extended parameter ranges where the weight itself
    is not normalizable (only the odd-parity space exists there).
    """

    def __init__(self, index, params, evaluator, norm_sq, label=""):
        self.index = index
        self.params = params
        self.kind = params.kind
        self._ev = evaluator
        self.norm_sq = norm_sq
        self.label = label

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        if t.ndim == 0:
            out = self._ev(x.reshape(1, -1), t.reshape(1))
            return float(out[0])
        return self._ev(x, t)

    def at(self, point) -> float:
        x, t = point.as_arrays()
        return self(x, t)

    def __repr__(self):
        return f"BasisElement({self.label}, index={self.index})"


def surface_dim(d: int, n: int) -> int:
    """dim V_n on the surface; equals the harmonic dimension on S^d."""
    return math.comb(n + d - 1, n) + (math.comb(n + d - 2, n - 1) if n >= 1 else 0)


# ---------------------------------------------------------------------------
# one-variable factors, with the extended odd-only parameter range
# ---------------------------------------------------------------------------

_EXT_TOL = 1e-13


def _gg_eval(lam: float, mu1: float, n: int, t: np.ndarray) -> np.ndarray:
    """Generalized Gegenbauer C_n^{(lam, mu1)}(t), extended to mu1 <= -1/2.

    Below mu1 = -1/2 the paper's normalization blows up but the odd-degree
    polynomials survive; they are returned with leading Jacobi normalization.
    """
    if mu1 > -0.5 + _EXT_TOL:
        return poly1d.eval_poly(Family1D.gen_gegenbauer(lam, mu1), n, t)
    k, r = divmod(n, 2)
    if r == 0:
        raise ParameterError(f"even-degree factor needs mu1 > -1/2, got {mu1}")
    return t * poly1d.eval_poly(Family1D.jacobi(lam - 0.5, mu1 + 0.5), k, 2 * t * t - 1)


def _gh_eval(mu1: float, n: int, t: np.ndarray) -> np.ndarray:
    """Generalized Hermite H_n^{mu1}(t), extended to mu1 <= -1/2 (odd n)."""
    if mu1 > -0.5 + _EXT_TOL:
        return poly1d.eval_poly(Family1D.gen_hermite(mu1), n, t)
    k, r = divmod(n, 2)
    if r == 0:
        raise ParameterError(f"even-degree factor needs mu1 > -1/2, got {mu1}")
    return t * poly1d.eval_poly(Family1D.laguerre(mu1 + 0.5), k, t * t)


def _gg_norm(lam: float, mu1: float, n: int) -> float | None:
    if mu1 > -0.5 + _EXT_TOL:
        return poly1d.norm_sq(Family1D.gen_gegenbauer(lam, mu1), n)
    return None


def _gh_norm(mu1: float, n: int) -> float | None:
    if mu1 > -0.5 + _EXT_TOL:
        return poly1d.norm_sq(Family1D.gen_hermite(mu1), n)
    return None


def _mul(a: float | None, b: float | None) -> float | None:
    return None if (a is None or b is None) else a * b


# ---------------------------------------------------------------------------
# index enumeration
# ---------------------------------------------------------------------------


def _inner_indices(params: WeightParams, m: int):
    if params.kind == "surface":
        return list(range(blocks.harmonic_dim(params.d, m)))
    out = []
    for j in range(m // 2 + 1):
        for ell in range(blocks.harmonic_dim(params.d, m - 2 * j)):
            out.append((j, ell))
    return out


def degree_indices(params: WeightParams, n: int, parity: int | None = None) -> list[BasisIndex]:
    """Indices of the degree-n space: even block first, m descending in each."""
    if n < 0:
        raise ArgumentError("degree must be >= 0")
    if params.double:
        blocks_m = [range(n, -1, -2)]
        if n >= 1:
            blocks_m.append(range(n - 1, -1, -2))
        if parity is not None:
            blocks_m = [blocks_m[parity]] if parity < len(blocks_m) else []
    else:
        if parity is not None:
            raise CapabilityError("upper-cone bases have no parity classification")
        blocks_m = [range(n, -1, -1)]
    out = []
    for ms in blocks_m:
        for m in ms:
            for k in _inner_indices(params, m):
                out.append(BasisIndex(n, m, k))
    return out


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------


def _angular_factor(params: WeightParams, index: BasisIndex):
    """The harmonic (surface) or scaled-ball (solid) factor as f(x, tsq)."""
    d = params.d
    if params.kind == "surface":
        y = blocks.harmonics(d, index.m).elements[index.k]
        return lambda x, tsq: y(x)
    j, ell = index.k
    bb = blocks.ball_basis(d, index.m, params.mu)
    pol = next(p for p in bb if p.index == (j, ell))

    def factor(x, tsq, pol=pol):
        r2 = np.sum(x * x, axis=-1)
        return pol._scale * pol._radial_hom(2 * r2 - tsq, tsq) * pol.harmonic(x)

    return factor


def _mu1(params: WeightParams, m: int) -> float:
    shift = params.mu if params.mu is not None else 0.0
    return m + params.beta + shift + (params.d - 1) / 2.0


def _moment_ratio(params: WeightParams, m: int) -> float:
    """E[s^m] (double domains) or E[t^{2m}] (upper cones), normalized measure."""
    if params.double:
        if not params.normalizable:
            return math.nan
        return poly1d.weight_moment(params.t_weight_spec(0), m)
    return poly1d.weight_moment(params.t_weight_spec(0), 2 * m)


def hyperboloid_transfer_constant(params: WeightParams, n: int, k: int) -> float:
    """c with rhoQ(x, t) = c * Q(x, sqrt(t^2 - rho^2)) for the even blocks.

    Gegenbauer type: (m1 + 1/2)_k / (gamma + m1)_k with m1 the generalized-
    Gegenbauer index of the cone element; Hermite type: (-1)^k / (2^{2k} k!).
    """
    m = n - 2 * k
    if m < 0:
        raise ArgumentError("need n - 2k >= 0")
    if params.family == "gegenbauer":
        m1 = _mu1(params, m)
        return poch(m1 + 0.5, k) / poch(params.gamma + m1, k)
    if params.family == "hermite":
        return (-1.0) ** k / (4.0**k * math.factorial(k))
    raise CapabilityError("transfer constants exist for the double-domain families")


def element(params: WeightParams, index: BasisIndex) -> BasisElement:
    """The named-family basis element for the given index."""
    n, m = index.n, index.m
    d, rho = params.d, params.rho
    angular = _angular_factor(params, index)
    fam = params.family

    if fam in ("gegenbauer", "hermite"):
        m1 = _mu1(params, m)
        if rho == 0:
            if fam == "gegenbauer":
                tf = lambda t: _gg_eval(params.gamma, m1, n - m, t)
                h1 = _gg_norm(params.gamma, m1, n - m)
            else:
                tf = lambda t: _gh_eval(m1, n - m, t)
                h1 = _gh_norm(m1, n - m)
            h = _mul(_moment_ratio(params, m), h1)

            def ev(x, t, tf=tf, angular=angular):
                return tf(t) * angular(x, t * t)

            return BasisElement(index, params, ev, h, f"{fam}-cone-{params.kind}")
        if index.parity == 1:
            raise CapabilityError(
                "odd-parity hyperboloid elements have no named closed family; "
                "use build_generic_surface (Christoffel route)"
            )
        k = (n - m) // 2
        rho2 = rho * rho
        if fam == "gegenbauer":
            jac = Family1D.jacobi(params.gamma - 0.5, m1 - 0.5)
            tf = lambda t: poly1d.eval_poly(jac, k, 2 * (t * t - rho2) - 1)
        else:
            lag = Family1D.laguerre(m1 - 0.5)
            tf = lambda t: poly1d.eval_poly(lag, k, t * t - rho2)
        cone = WeightParams(fam, d, params.beta, params.gamma, params.mu, 0.0)
        c = hyperboloid_transfer_constant(params, n, k)
        h = _mul(c * c, element_norm(cone, index))

        def ev(x, t, tf=tf, angular=angular, rho2=rho2):
            return tf(t) * angular(x, t * t - rho2)

        return BasisElement(index, params, ev, h, f"{fam}-hyperboloid-{params.kind}")

    # upper-cone comparison families
    shift = 2.0 * params.mu if params.mu is not None else 0.0
    a_m = 2 * m + params.beta + shift + d - 1
    if fam == "jacobi_cone":
        jac = Family1D.jacobi(a_m, params.gamma)
        tf = lambda t: poly1d.eval_poly(jac, n - m, 1.0 - 2.0 * t)
        h1 = poly1d.norm_sq(jac, n - m)
    else:
        lag = Family1D.laguerre(a_m)
        tf = lambda t: poly1d.eval_poly(lag, n - m, t)
        h1 = poly1d.norm_sq(lag, n - m)
    h = _moment_ratio(params, m) * h1

    def ev(x, t, tf=tf, angular=angular):
        return tf(t) * angular(x, t * t)

    return BasisElement(index, params, ev, h, f"{fam}-{params.kind}")


def element_norm(params: WeightParams, index: BasisIndex) -> float | None:
    el = element(params, index)
    return el.norm_sq


@lru_cache(maxsize=4096)
def _basis_cached(params: WeightParams, n: int, parity: int | None):
    return tuple(element(params, ix) for ix in degree_indices(params, n, parity))


def basis(params: WeightParams, n: int) -> tuple[BasisElement, ...]:
    """All named-family elements of degree n (both parities where defined)."""
    return _basis_cached(params, n, None)


def parity_basis(params: WeightParams, n: int, parity: int) -> tuple[BasisElement, ...]:
    """The degree-n elements of V_n^E (parity=0) or V_n^O (parity=1)."""
    if parity not in (0, 1):
        raise ArgumentError("parity must be 0 (even) or 1 (odd)")
    return _basis_cached(params, n, parity)


# thin named wrappers matching the per-family constructions


def gegenbauer_surface_cone(beta, gamma, d, index: BasisIndex) -> BasisElement:
    return element(WeightParams.gegenbauer_surface(d, beta, gamma), index)


def gegenbauer_surface_hyperboloid(beta, gamma, rho, d, index: BasisIndex) -> BasisElement:
    if not rho > 0:
        raise ParameterError("hyperboloid requires rho > 0")
    return element(WeightParams.gegenbauer_surface(d, beta, gamma, rho), index)


def gegenbauer_solid(beta, gamma, mu, rho, d, index: BasisIndex) -> BasisElement:
    return element(WeightParams.gegenbauer_solid(d, beta, gamma, mu, rho), index)


def hermite_surface(beta, rho, d, index: BasisIndex) -> BasisElement:
    return element(WeightParams.hermite_surface(d, beta, rho), index)


def hermite_solid(beta, mu, rho, d, index: BasisIndex) -> BasisElement:
    return element(WeightParams.hermite_solid(d, beta, mu, rho), index)


def jacobi_upper_cone(params: WeightParams, index: BasisIndex) -> BasisElement:
    if params.family != "jacobi_cone":
        raise ParameterError("expected jacobi_cone parameters")
    return element(params, index)


def laguerre_upper_cone(params: WeightParams, index: BasisIndex) -> BasisElement:
    if params.family != "laguerre_cone":
        raise ParameterError("expected laguerre_cone parameters")
    return element(params, index)


# ---------------------------------------------------------------------------
# generic construction (even weights, Christoffel odd blocks)
# ---------------------------------------------------------------------------


def _w0_spec(params: WeightParams, m: int) -> tuple:
    """Spec of w0^(m)(s) = s^{m+(d-1)/2} w0(s) for w(t) = |t| w0(t^2-rho^2)."""
    if not params.double:
        raise CapabilityError("generic construction needs an even weight in t")
    return params.t_weight_spec(m)


def build_generic_surface(params: WeightParams, n: int) -> list[BasisElement]:
    """Degree-n orthogonal basis from the generic q^(m) construction.

    Even t-blocks are p_k(w0^(m); t^2-rho^2); odd blocks use the Christoffel
    formula.  Works for any even normalizable weight, both parities, any rho.
    """
    if params.kind != "surface":
        raise ArgumentError("generic surface builder needs surface parameters")
    if not params.normalizable:
        raise ParameterError("generic construction needs a normalizable weight")
    out = []
    for ix in degree_indices(params, n):
        q = poly1d.christoffel_pair(_w0_spec(params, ix.m), params.rho, n - ix.m)
        y = blocks.harmonics(params.d, ix.m).elements[ix.k]
        h = poly1d.weight_moment(params.t_weight_spec(0), ix.m) * q.norm_sq

        def ev(x, t, q=q, y=y):
            return q(t) * y(x)

        out.append(BasisElement(ix, params, ev, h, "generic-surface"))
    return out


# ---------------------------------------------------------------------------
# Gegenbauer -> Hermite limit
# ---------------------------------------------------------------------------


def limit_g_to_h_check(
    beta: float,
    d: int,
    index: BasisIndex,
    gamma_list,
    mu: float | None = None,
    points=None,
    seed: int = 7,
) -> np.ndarray:
    """Normalized differences |C(x/sqrt(g), t/sqrt(g))/sqrt(hC) - H(x,t)/sqrt(hH)|.

    Returns one max-over-points error per gamma; the sequence should decrease
    as gamma grows.
    """
    if mu is None:
        hp = WeightParams.hermite_surface(d, beta)
    else:
        hp = WeightParams.hermite_solid(d, beta, mu)
    herm = element(hp, index)
    if points is None:
        from .domain import sample_points

        points = sample_points(hp, count=5, seed=seed)
    xs = np.stack([np.asarray(p.x) for p in points])
    ts = np.array([p.t for p in points])
    target = herm(xs, ts) / math.sqrt(herm.norm_sq)
    errs = []
    for g in gamma_list:
        if mu is None:
            gp = WeightParams.gegenbauer_surface(d, beta, g)
        else:
            gp = WeightParams.gegenbauer_solid(d, beta, g, mu)
        geg = element(gp, index)
        r = math.sqrt(g)
        vals = geg(xs / r, ts / r) / math.sqrt(geg.norm_sq)
        errs.append(float(np.max(np.abs(vals - target))))
    return np.array(errs)

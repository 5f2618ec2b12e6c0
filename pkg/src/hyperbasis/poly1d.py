"""One-variable orthogonal polynomials, their kernels, and Gauss quadrature.

All norms are taken with respect to *normalized* measures (total mass 1), so
``norm_sq(family, 0) == 1`` for every family.  Families:

* ``hermite``            -- e^{-x^2} on R
* ``laguerre(a)``        -- x^a e^{-x} on [0, inf)
* ``gegenbauer(lam)``    -- (1-x^2)^{lam-1/2} on [-1, 1]
* ``jacobi(a, b)``       -- (1-x)^a (1+x)^b on [-1, 1]
* ``gen_gegenbauer(lam, mu)`` -- |x|^{2 mu} (1-x^2)^{lam-1/2} on [-1, 1]
* ``gen_hermite(mu)``    -- |x|^{2 mu} e^{-x^2} on R
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre, roots_jacobi

from .errors import ArgumentError, CapabilityError, ParameterError

__all__ = [
    "Family1D",
    "Poly1D",
    "QuadratureRule",
    "addition_gg_lhs",
    "addition_gg_rhs",
    "cesaro_kernel",
    "cesaro_weights",
    "christoffel_pair",
    "christoffel_rule",
    "eval_all",
    "eval_poly",
    "gauss_rule",
    "gen_gegenbauer_by_integral",
    "kernel_kn",
    "kernel_kn_cd",
    "leading_coeff",
    "norm_sq",
    "poch",
    "symmetric_beta_nodes",
    "onesided_jacobi_nodes",
    "weight_moment",
    "z_index_raise",
    "zn_eval",
    "zn_eval_all",
]

#: parameters closer than this to a degenerate value switch integral
#: representations to their point-mass limit (two-point average rule)
DEGENERATE_EPS = 1e-12


def poch(a: float, k: int) -> float:
    """Pochhammer symbol (a)_k = a (a+1) ... (a+k-1)."""
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def c_gegenbauer(lam: float) -> float:
    """Normalization constant of (1-t^2)^{lam-1/2} on [-1,1]."""
    return math.gamma(lam + 1.0) / (math.gamma(0.5) * math.gamma(lam + 0.5))


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

_TAGS = ("hermite", "laguerre", "gegenbauer", "jacobi", "gen_gegenbauer", "gen_hermite")


@dataclass(frozen=True)
class Family1D:
    """A classical or generalized orthogonal-polynomial family."""

    tag: str
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ParameterError(f"unknown family tag {self.tag!r}")
        p = self.params
        if self.tag == "hermite" and p:
            raise ParameterError("hermite takes no parameters")
        if self.tag == "laguerre" and not p[0] > -1:
            raise ParameterError(f"laguerre needs alpha > -1, got {p[0]}")
        if self.tag == "gegenbauer" and not p[0] > -0.5:
            raise ParameterError(f"gegenbauer needs lambda > -1/2, got {p[0]}")
        if self.tag == "jacobi" and not (p[0] > -1 and p[1] > -1):
            raise ParameterError(f"jacobi needs alpha, beta > -1, got {p}")
        if self.tag == "gen_gegenbauer" and not (p[0] > -0.5 and p[1] > -0.5):
            raise ParameterError(f"gen_gegenbauer needs lambda, mu > -1/2, got {p}")
        if self.tag == "gen_hermite" and not p[0] >= 0:
            raise ParameterError(f"gen_hermite needs mu >= 0, got {p[0]}")

    @staticmethod
    def hermite() -> "Family1D":
        return Family1D("hermite")

    @staticmethod
    def laguerre(alpha: float) -> "Family1D":
        return Family1D("laguerre", (alpha,))

    @staticmethod
    def gegenbauer(lam: float) -> "Family1D":
        return Family1D("gegenbauer", (lam,))

    @staticmethod
    def jacobi(alpha: float, beta: float) -> "Family1D":
        return Family1D("jacobi", (alpha, beta))

    @staticmethod
    def gen_gegenbauer(lam: float, mu: float) -> "Family1D":
        return Family1D("gen_gegenbauer", (lam, mu))

    @staticmethod
    def gen_hermite(mu: float) -> "Family1D":
        return Family1D("gen_hermite", (mu,))

    def weight_spec(self) -> tuple:
        """The quadrature weight spec integrating this family's measure."""
        p = self.params
        return {
            "hermite": ("hermite",),
            "laguerre": ("laguerre", p[0] if p else None),
            "gegenbauer": ("jacobi", p[0] - 0.5, p[0] - 0.5) if p else None,
            "jacobi": ("jacobi", p[0], p[1]) if len(p) == 2 else None,
            "gen_gegenbauer": ("even_jacobi", p[1], p[0] - 0.5) if len(p) == 2 else None,
            "gen_hermite": ("even_hermite", p[0]) if p else None,
        }[self.tag]


def _check_degree(n: int):
    if n < 0 or int(n) != n:
        raise ArgumentError(f"degree must be a nonnegative integer, got {n}")


def _jacobi_all(nmax: int, a: float, b: float, x: np.ndarray) -> np.ndarray:
    """Table of Jacobi polynomials P_k^{(a,b)}(x), k = 0..nmax."""
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = (a + 1) + (a + b + 2) * (x - 1) / 2.0
    for n in range(1, nmax):
        c = 2 * n + a + b
        a1 = 2 * (n + 1) * (n + a + b + 1) * c
        a2 = (c + 1) * (a * a - b * b)
        a3 = (c + 1) * c * (c + 2)
        a4 = 2 * (n + a) * (n + b) * (c + 2)
        out[n + 1] = ((a2 + a3 * x) * out[n] - a4 * out[n - 1]) / a1
    return out


def _laguerre_all(nmax: int, a: float, x: np.ndarray) -> np.ndarray:
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 1 + a - x
    for n in range(1, nmax):
        out[n + 1] = ((2 * n + 1 + a - x) * out[n] - (n + a) * out[n - 1]) / (n + 1)
    return out


def _hermite_all(nmax: int, x: np.ndarray) -> np.ndarray:
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2 * x
    for n in range(1, nmax):
        out[n + 1] = 2 * x * out[n] - 2 * n * out[n - 1]
    return out


def _gegenbauer_all(nmax: int, lam: float, x: np.ndarray) -> np.ndarray:
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2 * lam * x
    for n in range(1, nmax):
        out[n + 1] = (2 * (n + lam) * x * out[n] - (n + 2 * lam - 1) * out[n - 1]) / (n + 1)
    return out


def eval_all(family: Family1D, nmax: int, x) -> np.ndarray:
    """Table of family polynomials, degrees 0..nmax, at points x.

    Returns an array of shape (nmax+1,) + shape(x).
    """
    _check_degree(nmax)
    x = np.asarray(x, dtype=float)
    tag, p = family.tag, family.params
    if tag == "hermite":
        return _hermite_all(nmax, x)
    if tag == "laguerre":
        return _laguerre_all(nmax, p[0], x)
    if tag == "gegenbauer":
        return _gegenbauer_all(nmax, p[0], x)
    if tag == "jacobi":
        return _jacobi_all(nmax, p[0], p[1], x)
    if tag == "gen_gegenbauer":
        lam, mu = p
        z = 2 * x * x - 1
        m = nmax // 2
        je = _jacobi_all(m, lam - 0.5, mu - 0.5, z)
        jo = _jacobi_all(m, lam - 0.5, mu + 0.5, z)
        out = np.empty((nmax + 1,) + x.shape)
        for n in range(nmax + 1):
            k, r = divmod(n, 2)
            if r == 0:
                out[n] = poch(lam + mu, k) / poch(mu + 0.5, k) * je[k]
            else:
                out[n] = poch(lam + mu, k + 1) / poch(mu + 0.5, k + 1) * x * jo[k]
        return out
    if tag == "gen_hermite":
        mu = p[0]
        s = x * x
        m = nmax // 2
        le = _laguerre_all(m, mu - 0.5, s)
        lo = _laguerre_all(m, mu + 0.5, s)
        out = np.empty((nmax + 1,) + x.shape)
        for n in range(nmax + 1):
            k, r = divmod(n, 2)
            sgn = -1.0 if k % 2 else 1.0
            if r == 0:
                out[n] = sgn * 4.0**k * math.factorial(k) * le[k]
            else:
                out[n] = sgn * 2.0 * 4.0**k * math.factorial(k) * x * lo[k]
        return out
    raise ParameterError(tag)


def eval_poly(family: Family1D, n: int, x):
    """Value of the degree-n polynomial of the family at x."""
    table = eval_all(family, n, x)
    return table[n]


def norm_sq(family: Family1D, n: int) -> float:
    """Squared L2 norm h_n under the normalized measure (h_0 = 1)."""
    _check_degree(n)
    tag, p = family.tag, family.params
    if n == 0:
        return 1.0
    if tag == "hermite":
        return 2.0**n * math.factorial(n)
    if tag == "laguerre":
        return poch(p[0] + 1, n) / math.factorial(n)
    if tag == "gegenbauer":
        lam = p[0]
        return lam / (n + lam) * poch(2 * lam, n) / math.factorial(n)
    if tag == "jacobi":
        a, b = p
        return (
            poch(a + 1, n)
            * poch(b + 1, n)
            / (math.factorial(n) * (2 * n + a + b + 1) * poch(a + b + 2, n - 1))
        )
    if tag == "gen_gegenbauer":
        lam, mu = p
        k, r = divmod(n, 2)
        if r == 0:
            return (
                poch(lam + 0.5, k)
                * poch(lam + mu, k)
                * (lam + mu)
                / (math.factorial(k) * poch(mu + 0.5, k) * (lam + mu + 2 * k))
            )
        return (
            poch(lam + 0.5, k)
            * poch(lam + mu, k + 1)
            * (lam + mu)
            / (math.factorial(k) * poch(mu + 0.5, k + 1) * (lam + mu + 2 * k + 1))
        )
    if tag == "gen_hermite":
        mu = p[0]
        k, r = divmod(n, 2)
        if r == 0:
            return 16.0**k * math.factorial(k) * poch(mu + 0.5, k)
        return 4.0 * 16.0**k * math.factorial(k) * poch(mu + 0.5, k + 1)
    raise ParameterError(tag)


def leading_coeff(family: Family1D, n: int) -> float:
    """Coefficient of x^n in the degree-n polynomial of the family."""
    _check_degree(n)
    tag, p = family.tag, family.params
    if tag == "hermite" or tag == "gen_hermite":
        return 2.0**n
    if tag == "laguerre":
        return (-1.0) ** n / math.factorial(n)
    if tag == "gegenbauer":
        return 2.0**n * poch(p[0], n) / math.factorial(n)
    if tag == "jacobi":
        a, b = p
        return poch(n + a + b + 1, n) / (2.0**n * math.factorial(n))
    if tag == "gen_gegenbauer":
        lam, mu = p
        k, r = divmod(n, 2)
        if r == 0:
            return poch(lam + mu, k) / poch(mu + 0.5, k) * poch(k + lam + mu, k) / math.factorial(k)
        return (
            poch(lam + mu, k + 1)
            / poch(mu + 0.5, k + 1)
            * poch(k + lam + mu + 1, k)
            / math.factorial(k)
        )
    raise ParameterError(tag)


# ---------------------------------------------------------------------------
# kernel polynomial Z_n and reproducing kernels
# ---------------------------------------------------------------------------


def zn_eval_all(lam: float, nmax: int, t) -> np.ndarray:
    """Table Z_k^lam(t), k = 0..nmax; Chebyshev branch at lam = 0."""
    _check_degree(nmax)
    if lam < 0:
        raise ParameterError(f"Z_n^lam needs lam >= 0, got {lam}")
    t = np.asarray(t, dtype=float)
    out = np.empty((nmax + 1,) + t.shape)
    if lam == 0.0:
        # 2 T_n for n >= 1, 1 for n = 0; recurrence runs on T_n itself
        tn = np.empty_like(out)
        tn[0] = 1.0
        if nmax >= 1:
            tn[1] = t
        for n in range(1, nmax):
            tn[n + 1] = 2.0 * t * tn[n] - tn[n - 1]
        out[0] = 1.0
        out[1:] = 2.0 * tn[1:]
        return out
    cg = _gegenbauer_all(nmax, lam, t)
    for n in range(nmax + 1):
        out[n] = (n + lam) / lam * cg[n]
    return out


def zn_eval(lam: float, n: int, t):
    """Z_n^lam(t) = ((n+lam)/lam) C_n^lam(t), with Z_n^0 = 2 T_n (n >= 1)."""
    return zn_eval_all(lam, n, t)[n]


def kernel_kn(family: Family1D, n: int, x, y):
    """Christoffel-Darboux kernel k_n(x, y) = sum_{k<=n} p_k(x) p_k(y) / h_k."""
    _check_degree(n)
    px = eval_all(family, n, x)
    py = eval_all(family, n, y)
    h = np.array([norm_sq(family, k) for k in range(n + 1)])
    shape = np.broadcast_shapes(px.shape[1:], py.shape[1:])
    acc = np.zeros(shape)
    for k in range(n + 1):
        acc = acc + px[k] * py[k] / h[k]
    return acc


def kernel_kn_cd(family: Family1D, n: int, x, y):
    """k_n(x, y) in its Christoffel-Darboux two-term form (x != y)."""
    _check_degree(n)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    px = eval_all(family, n + 1, x)
    py = eval_all(family, n + 1, y)
    c = leading_coeff(family, n) / (leading_coeff(family, n + 1) * norm_sq(family, n))
    return c * (px[n + 1] * py[n] - px[n] * py[n + 1]) / (x - y)


def cesaro_weights(n: int, delta: float) -> np.ndarray:
    """Cesaro (C, delta) weights binom(n-k+delta, n-k)/binom(n+delta, n), k=0..n."""
    if delta < 0:
        raise ParameterError(f"Cesaro order must satisfy delta >= 0, got {delta}")
    b = np.empty(n + 1)
    b[0] = 1.0
    for m in range(1, n + 1):
        b[m] = b[m - 1] * (delta + m) / m  # binom(m+delta, m)
    return b[::-1] / b[n]


def cesaro_kernel(family: Family1D, n: int, delta: float, x, y):
    """Kernel of the Cesaro (C, delta) mean of the family's Fourier series."""
    _check_degree(n)
    w = cesaro_weights(n, delta)
    px = eval_all(family, n, x)
    py = eval_all(family, n, y)
    shape = np.broadcast_shapes(px.shape[1:], py.shape[1:])
    acc = np.zeros(shape)
    for k in range(n + 1):
        acc = acc + w[k] * px[k] * py[k] / norm_sq(family, k)
    return acc


# ---------------------------------------------------------------------------
# Gauss quadrature for normalized measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights of a rule for a normalized measure (weights sum to 1)."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    weight_spec: tuple

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _normalize(nodes: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return nodes, weights / weights.sum()


@lru_cache(maxsize=512)
def _rule_cached(weight_spec: tuple, npoints: int) -> QuadratureRule:
    kind = weight_spec[0]
    if npoints < 1:
        raise ArgumentError("npoints must be >= 1")
    if kind == "jacobi":
        a, b = weight_spec[1:]
        if not (a > -1 and b > -1):
            raise ParameterError(f"jacobi weight needs a, b > -1, got {a}, {b}")
        x, w = roots_jacobi(npoints, a, b)
        x, w = _normalize(x, w)
        return QuadratureRule(x, w, 2 * npoints - 1, weight_spec)
    if kind == "jacobi01":
        a, b = weight_spec[1:]
        if not (a > -1 and b > -1):
            raise ParameterError(f"jacobi01 weight needs a, b > -1, got {a}, {b}")
        # s^a (1-s)^b on [0,1] maps to (1-x)^b (1+x)^a at x = 2s - 1
        x, w = roots_jacobi(npoints, b, a)
        x, w = _normalize((x + 1) / 2.0, w)
        return QuadratureRule(x, w, 2 * npoints - 1, weight_spec)
    if kind == "gegenbauer":
        lam = weight_spec[1]
        return _rule_cached(("jacobi", lam - 0.5, lam - 0.5), npoints)
    if kind == "laguerre":
        a = weight_spec[1]
        if not a > -1:
            raise ParameterError(f"laguerre weight needs a > -1, got {a}")
        x, w = roots_genlaguerre(npoints, a)
        x, w = _normalize(x, w)
        return QuadratureRule(x, w, 2 * npoints - 1, weight_spec)
    if kind == "hermite":
        return _symmetric_from(("laguerre", -0.5), weight_spec, npoints)
    if kind == "even_jacobi":
        a, b = weight_spec[1:]
        if not a > -0.5:
            raise ParameterError(f"even_jacobi weight needs a > -1/2, got {a}")
        return _symmetric_from(("jacobi01", a - 0.5, b), weight_spec, npoints)
    if kind == "even_hermite":
        a = weight_spec[1]
        if not a > -0.5:
            raise ParameterError(f"even_hermite weight needs a > -1/2, got {a}")
        return _symmetric_from(("laguerre", a - 0.5), weight_spec, npoints)
    raise CapabilityError(f"unsupported weight spec {weight_spec!r}")


def _symmetric_from(inner_spec: tuple, weight_spec: tuple, npoints: int) -> QuadratureRule:
    """Symmetric +-sqrt(s) rule from a rule in s = t^2.

    The substitution removes the |t| kink; odd powers integrate to zero
    exactly by node symmetry, even powers through the s-rule.
    """
    inner = _rule_cached(inner_spec, npoints)
    r = np.sqrt(inner.nodes)
    nodes = np.concatenate([-r[::-1], r])
    weights = np.concatenate([inner.weights[::-1], inner.weights]) / 2.0
    return QuadratureRule(nodes, weights, 4 * npoints - 1, weight_spec)


def gauss_rule(weight_spec: tuple, npoints: int) -> QuadratureRule:
    """Gauss rule for the normalized measure described by weight_spec.

    Supported specs: ("jacobi", a, b) on [-1,1]; ("jacobi01", a, b) on [0,1];
    ("gegenbauer", lam); ("laguerre", a) on [0,inf); ("hermite",);
    ("even_jacobi", a, b) for |t|^{2a}(1-t^2)^b; ("even_hermite", a) for
    |t|^{2a} e^{-t^2}.
    """
    return _rule_cached(tuple(weight_spec), int(npoints))


def rule_for_degree(weight_spec: tuple, degree: int) -> QuadratureRule:
    """A rule exact at least up to the given polynomial degree."""
    kind = weight_spec[0]
    if kind in ("hermite", "even_jacobi", "even_hermite"):
        npoints = max(1, (degree + 5) // 4 + 1)
    else:
        npoints = max(1, (2 * degree + 5) // 4 + 1)
    return gauss_rule(weight_spec, npoints)


def weight_moment(weight_spec: tuple, k: int) -> float:
    """Analytic k-th moment of the normalized measure (for exactness tests)."""
    kind = weight_spec[0]
    if kind == "jacobi01":
        a, b = weight_spec[1:]
        return poch(a + 1, k) / poch(a + b + 2, k)
    if kind == "laguerre":
        return poch(weight_spec[1] + 1, k)
    if kind == "hermite":
        return 0.0 if k % 2 else poch(0.5, k // 2)
    if kind == "even_hermite":
        a = weight_spec[1]
        return 0.0 if k % 2 else poch(a + 0.5, k // 2)
    if kind == "even_jacobi":
        a, b = weight_spec[1:]
        return 0.0 if k % 2 else weight_moment(("jacobi01", a - 0.5, b), k // 2)
    if kind == "gegenbauer":
        lam = weight_spec[1]
        return weight_moment(("even_jacobi", 0.0, lam - 0.5), k)
    if kind == "jacobi":
        a, b = weight_spec[1:]
        # x = 2s - 1 with s ~ jacobi01(b, a)
        total = 0.0
        for j in range(k + 1):
            total += math.comb(k, j) * 2.0**j * (-1.0) ** (k - j) * weight_moment(
                ("jacobi01", b, a), j
            )
        return total
    raise CapabilityError(f"unsupported weight spec {weight_spec!r}")


# ---------------------------------------------------------------------------
# degenerate-limit measures (two-point averages)
# ---------------------------------------------------------------------------


def symmetric_beta_nodes(mu: float, npoints: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights of c_{mu-1/2} (1-v^2)^{mu-1} dv on [-1,1], normalized.

    For mu below the degeneracy threshold the measure collapses to the
    two-point average (f(1) + f(-1))/2.
    """
    if mu < 0:
        raise ParameterError(f"symmetric beta measure needs mu >= 0, got {mu}")
    if mu < DEGENERATE_EPS:
        return np.array([-1.0, 1.0]), np.array([0.5, 0.5])
    rule = gauss_rule(("jacobi", mu - 1.0, mu - 1.0), npoints)
    return rule.nodes, rule.weights


def onesided_jacobi_nodes(a: float, b: float, npoints: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights of the normalized (1-z)^a (1+z)^b dz measure on [-1,1].

    A parameter b at (or numerically below) -1 collapses the measure to a
    point mass at z = -1; likewise a at -1 collapses it to z = +1.
    """
    if b <= -1 + DEGENERATE_EPS:
        return np.array([-1.0]), np.array([1.0])
    if a <= -1 + DEGENERATE_EPS:
        return np.array([1.0]), np.array([1.0])
    rule = gauss_rule(("jacobi", a, b), npoints)
    return rule.nodes, rule.weights


# ---------------------------------------------------------------------------
# Poly1D handles and the Christoffel odd/even construction
# ---------------------------------------------------------------------------


class Poly1D:
    """A one-variable polynomial handle: evaluator + degree + norm."""

    def __init__(self, degree: int, evaluator, norm_sq: float | None = None, label: str = ""):
        self.degree = degree
        self._evaluator = evaluator
        self.norm_sq = norm_sq
        self.label = label

    def __call__(self, t):
        return self._evaluator(np.asarray(t, dtype=float))

    def __repr__(self):
        return f"Poly1D(degree={self.degree}, label={self.label!r})"


def _base_poly_eval(w0_spec: tuple, k: int, s: np.ndarray) -> np.ndarray:
    """p_k(w0; s) for a base weight w0 on [0,1] or [0,inf)."""
    kind = w0_spec[0]
    if kind == "jacobi01":
        a, b = w0_spec[1:]
        return eval_poly(Family1D.jacobi(b, a), k, 2.0 * s - 1.0)
    if kind == "laguerre":
        return eval_poly(Family1D.laguerre(w0_spec[1]), k, s)
    raise CapabilityError(f"unsupported base weight {w0_spec!r} for Christoffel construction")


def christoffel_rule(w0_spec: tuple, rho: float, npoints: int) -> QuadratureRule:
    """Symmetric rule for the induced weight |t| w0(t^2 - rho^2) on |t| >= rho."""
    inner = gauss_rule(w0_spec, npoints)
    r = np.sqrt(inner.nodes + rho * rho)
    nodes = np.concatenate([-r[::-1], r])
    weights = np.concatenate([inner.weights[::-1], inner.weights]) / 2.0
    return QuadratureRule(nodes, weights, 2 * npoints - 1, ("christoffel", w0_spec, rho))


def christoffel_pair(w0_spec: tuple, rho: float, n: int) -> Poly1D:
    """Degree-n orthogonal polynomial for |t| w0(t^2 - rho^2) on |t| >= rho.

    Even degrees come from p_k(w0) at t^2 - rho^2; odd degrees from the
    Christoffel construction for the shifted weight (s + rho^2) w0(s).
    """
    _check_degree(n)
    if rho < 0:
        raise ParameterError(f"rho must be >= 0, got {rho}")
    k, r = divmod(n, 2)
    rho2 = rho * rho
    if r == 0:

        def evaluator(t, k=k):
            return _base_poly_eval(w0_spec, k, t * t - rho2)

    else:
        pk0 = float(_base_poly_eval(w0_spec, k, np.array(-rho2)))
        pk10 = float(_base_poly_eval(w0_spec, k + 1, np.array(-rho2)))

        def evaluator(t, k=k, pk0=pk0, pk10=pk10):
            s = t * t - rho2
            return (
                _base_poly_eval(w0_spec, k + 1, s) * pk0 - _base_poly_eval(w0_spec, k, s) * pk10
            ) / t

    rule = christoffel_rule(w0_spec, rho, n + 4)
    h = float(np.dot(rule.weights, evaluator(rule.nodes) ** 2))
    return Poly1D(n, evaluator, norm_sq=h, label=f"christoffel[{w0_spec}, rho={rho}]")


# ---------------------------------------------------------------------------
# generalized-Gegenbauer integral identities
# ---------------------------------------------------------------------------


def gen_gegenbauer_by_integral(lam: float, mu: float, n: int, x, npoints: int = 48):
    """C_n^{(lam,mu)}(x) via its one-integral representation (lam, mu > 0)."""
    _check_degree(n)
    if lam <= 0 or mu <= 0:
        raise CapabilityError("integral route needs lam > 0 and mu > 0; use eval_poly instead")
    v, w = symmetric_beta_nodes(mu, npoints)
    x = np.asarray(x, dtype=float)
    vals = eval_poly(Family1D.gegenbauer(lam + mu), n, np.multiply.outer(x, v))
    out = np.tensordot(vals, w * (1.0 + v), axes=([-1], [0]))
    return float(out) if out.ndim == 0 else out


def addition_gg_lhs(
    lam: float, mu: float, n: int, u: float, s: float, t: float, npoints: int = 48
) -> float:
    """Integral side: c_{lam-1/2} int Z_n^{lam+mu}(u s t + v sqrt(1-s^2)sqrt(1-t^2)) (1-v^2)^{lam-1} dv."""
    _check_degree(n)
    if lam <= 0 or mu <= 0:
        raise ParameterError("addition identity needs lam > 0 and mu > 0")
    for name, val in (("u", u), ("s", s), ("t", t)):
        if abs(val) > 1 + 1e-14:
            raise ArgumentError(f"{name} must lie in [-1, 1], got {val}")
    v, w = symmetric_beta_nodes(lam, npoints)
    arg = u * s * t + v * math.sqrt(max(0.0, 1 - s * s)) * math.sqrt(max(0.0, 1 - t * t))
    return float(np.dot(w, zn_eval(lam + mu, n, arg)))


def _zn_signed(lam: float, n: int, t):
    """Z_n^lam for any lam > -1/2 (internal; the public contract is lam >= 0)."""
    if lam >= 0:
        return zn_eval(lam, n, t)
    if n == 0:
        return np.ones_like(np.asarray(t, dtype=float))
    return (n + lam) / lam * _gegenbauer_all(n, lam, np.asarray(t, dtype=float))[n]


def addition_gg_rhs(lam: float, mu: float, n: int, u: float, s: float, t: float) -> float:
    """Finite-sum side of the generalized-Gegenbauer product formula."""
    _check_degree(n)
    if lam <= 0 or mu <= 0:
        raise ParameterError("addition identity needs lam > 0 and mu > 0")
    total = 0.0
    for k in range(n // 2 + 1):
        j = n - 2 * k
        fam = Family1D.gen_gegenbauer(lam, mu + j)
        term = (
            poch(lam + mu + 1, j)
            / poch(mu + 0.5, j)
            * (s * t) ** j
            * eval_poly(fam, 2 * k, s)
            * eval_poly(fam, 2 * k, t)
            / norm_sq(fam, 2 * k)
            * _zn_signed(mu - 0.5, j, u)
        )
        total += term
    return float(total)


def z_index_raise(lam: float, sigma: float, n: int, t: float, npoints: int = 48) -> float:
    """Z_n^lam(t) reconstructed through the index-raising double integral."""
    _check_degree(n)
    if sigma <= 0:
        raise CapabilityError(f"index raise needs sigma > 0, got {sigma}")
    if abs(t) > 1 + 1e-14:
        raise ArgumentError(f"t must lie in [-1, 1], got {t}")
    z1, w1 = onesided_jacobi_nodes(lam, sigma - 1.0, npoints)
    inner = gauss_rule(("gegenbauer", sigma), npoints)
    z2, w2 = inner.nodes, inner.weights
    arg = np.add.outer((1 - z1) / 2.0 * t, (0.0 * z2)) + np.multiply.outer((1 + z1) / 2.0, z2)
    vals = zn_eval(lam + sigma, n, arg)
    return float(w1 @ vals @ w2)

"""Geometry, weights, and quadrature for cones and hyperboloids of revolution.

The surface is |x|^2 = t^2 - rho^2 for rho <= |t| <= b (a double cone when
rho = 0, a double hyperboloid when rho > 0); the solid is bounded by it.  The
compact families fix b = sqrt(rho^2 + 1); the exponential families have
b = inf.  All integration is against normalized measures, built from the
substitution s = t^2 - rho^2 which turns the t-integral into a Jacobi or
Laguerre form on [0, 1] or [0, inf) and removes the |t| kink.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import blocks, poly1d
from .errors import ArgumentError, CapabilityError, ParameterError

__all__ = [
    "PointCH",
    "WeightParams",
    "integrate_solid",
    "integrate_surface",
    "norm_constant",
    "quad_degree_default",
    "sample_points",
    "solid_grid",
    "surface_grid",
    "validate",
]

FAMILIES = ("gegenbauer", "hermite", "jacobi_cone", "laguerre_cone")

GEOM_TOL = 1e-12


def quad_degree_default() -> int:
    """Default polynomial exactness of domain grids (env-overridable)."""
    env = os.environ.get("HYPERBASIS_QUAD_POINTS")
    if env:
        try:
            val = int(env)
        except ValueError as exc:
            raise ParameterError(f"HYPERBASIS_QUAD_POINTS must be an int, got {env!r}") from exc
        if val < 1:
            raise ParameterError("HYPERBASIS_QUAD_POINTS must be >= 1")
        return val
    return 40


@dataclass(frozen=True)
class PointCH:
    """A point (x, t) with x in R^d."""

    x: tuple[float, ...]
    t: float

    @staticmethod
    def of(x, t: float) -> "PointCH":
        return PointCH(tuple(float(v) for v in np.atleast_1d(x)), float(t))

    def as_arrays(self) -> tuple[np.ndarray, float]:
        return np.asarray(self.x, dtype=float), self.t


@dataclass(frozen=True)
class WeightParams:
    """Weight-family parameters selecting a domain geometry and measure.

    gamma is None for the exponential (Hermite/Laguerre) factor e^{-t^2} or
    e^{-t}; mu is None on surfaces.  rho = 0 gives the double cone.  The
    jacobi_cone / laguerre_cone families live on the *upper* cone only.
    """

    family: str
    d: int
    beta: float
    gamma: float | None = None
    mu: float | None = None
    rho: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        if self.d < 2:
            raise ParameterError(f"need d >= 2, got {self.d}")
        if self.rho < 0:
            raise ParameterError(f"need rho >= 0, got {self.rho}")
        if self.mu is not None and not self.mu > -0.5:
            raise ParameterError(f"solid weight needs mu > -1/2, got {self.mu}")
        fam = self.family
        if fam in ("gegenbauer", "jacobi_cone"):
            if self.gamma is None:
                raise ParameterError(f"{fam} requires gamma")
        else:
            if self.gamma is not None:
                raise ParameterError(f"{fam} takes no gamma")
        if fam == "gegenbauer":
            if not self.gamma > -0.5:
                raise ParameterError(f"gegenbauer needs gamma > -1/2, got {self.gamma}")
            if self.rho > 0 and not self.beta > -0.5:
                raise ParameterError(f"hyperboloid needs beta > -1/2, got {self.beta}")
            if self.rho == 0 and not self.beta > -(self.d + 1) / 2.0:
                raise ParameterError(f"cone needs beta > -(d+1)/2, got {self.beta}")
        elif fam == "hermite":
            if self.rho > 0 and not self.beta > -0.5:
                raise ParameterError(f"hyperboloid needs beta > -1/2, got {self.beta}")
            if self.rho == 0 and not self.beta > -(self.d + 2) / 2.0:
                raise ParameterError(f"cone needs beta > -(d+2)/2, got {self.beta}")
        elif fam == "jacobi_cone":
            if self.rho != 0:
                raise ParameterError("upper-cone families require rho = 0")
            if not self.gamma > -1:
                raise ParameterError(f"jacobi_cone needs gamma > -1, got {self.gamma}")
            low = -1.0 if self.mu is not None else -float(self.d)
            if not self.beta > low:
                raise ParameterError(f"jacobi_cone needs beta > {low}, got {self.beta}")
        elif fam == "laguerre_cone":
            if self.rho != 0:
                raise ParameterError("upper-cone families require rho = 0")
            if not self.beta > -float(self.d):
                raise ParameterError(f"laguerre_cone needs beta > -d, got {self.beta}")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def gegenbauer_surface(d, beta, gamma, rho=0.0):
        return WeightParams("gegenbauer", d, beta, gamma, None, rho)

    @staticmethod
    def gegenbauer_solid(d, beta, gamma, mu, rho=0.0):
        return WeightParams("gegenbauer", d, beta, gamma, mu, rho)

    @staticmethod
    def hermite_surface(d, beta, rho=0.0):
        return WeightParams("hermite", d, beta, None, None, rho)

    @staticmethod
    def hermite_solid(d, beta, mu, rho=0.0):
        return WeightParams("hermite", d, beta, None, mu, rho)

    @staticmethod
    def jacobi_upper(d, beta, gamma, mu=None):
        return WeightParams("jacobi_cone", d, beta, gamma, mu, 0.0)

    @staticmethod
    def laguerre_upper(d, beta, mu=None):
        return WeightParams("laguerre_cone", d, beta, None, mu, 0.0)

    # -- derived geometry ----------------------------------------------------

    @property
    def kind(self) -> str:
        return "solid" if self.mu is not None else "surface"

    @property
    def compact(self) -> bool:
        return self.family in ("gegenbauer", "jacobi_cone")

    @property
    def double(self) -> bool:
        """True for the symmetric double domains, False for upper cones."""
        return self.family in ("gegenbauer", "hermite")

    @property
    def b(self) -> float:
        if self.family == "gegenbauer":
            return math.sqrt(self.rho * self.rho + 1.0)
        if self.family == "jacobi_cone":
            return 1.0
        return math.inf

    @property
    def normalizable(self) -> bool:
        """Whether the weight has finite mass (h_0 = 1 convention possible)."""
        if not self.double:
            return True
        shift = self.mu if self.mu is not None else 0.0
        return self.beta + shift + (self.d - 2) / 2.0 > -1.0

    def s_exponent(self, m: int = 0) -> float:
        """Exponent a of the m-shifted substituted measure s^a (...) ds."""
        shift = self.mu if self.mu is not None else 0.0
        return self.beta + shift + (self.d - 2) / 2.0 + m

    def t_weight_spec(self, m: int = 0) -> tuple:
        """Weight spec of the m-shifted normalized t-measure.

        Double domains use the s = t^2 - rho^2 coordinate; upper cones use t.
        """
        if self.family == "gegenbauer":
            return ("jacobi01", self.s_exponent(m), self.gamma - 0.5)
        if self.family == "hermite":
            return ("laguerre", self.s_exponent(m))
        shift = 2.0 * self.mu if self.mu is not None else 0.0
        if self.family == "jacobi_cone":
            return ("jacobi01", self.beta + shift + self.d - 1 + 2 * m, self.gamma)
        return ("laguerre", self.beta + shift + self.d - 1 + 2 * m)


def norm_constant(params: WeightParams) -> float:
    """Analytic normalization constant b_w of the weight on its domain."""
    if not params.normalizable:
        raise ParameterError("weight is not normalizable for these parameters")
    d, beta, rho = params.d, params.beta, params.rho
    sigma_d = 2 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
    if params.kind == "surface":
        if params.family == "gegenbauer":
            return math.gamma(beta + params.gamma + (d + 1) / 2.0) / (
                math.gamma(beta + d / 2.0) * math.gamma(params.gamma + 0.5) * sigma_d
            )
        if params.family == "hermite":
            return math.exp(rho * rho) / (math.gamma(beta + d / 2.0) * sigma_d)
        if params.family == "jacobi_cone":
            g = params.gamma
            bb = math.gamma(beta + d + g + 1) / (math.gamma(beta + d) * math.gamma(g + 1))
            return bb / sigma_d
        return 1.0 / (math.gamma(beta + d) * sigma_d)
    mu = params.mu
    b_ball = math.gamma(mu + (d + 1) / 2.0) / (math.pi ** (d / 2.0) * math.gamma(mu + 0.5))
    if params.family == "gegenbauer":
        return b_ball * math.gamma(beta + mu + params.gamma + (d + 1) / 2.0) / (
            math.gamma(beta + mu + d / 2.0) * math.gamma(params.gamma + 0.5)
        )
    if params.family == "hermite":
        return math.exp(rho * rho) * b_ball / math.gamma(beta + mu + d / 2.0)
    if params.family == "jacobi_cone":
        g = params.gamma
        a = beta + 2 * mu + d
        return b_ball * math.gamma(a + g + 1) / (math.gamma(a) * math.gamma(g + 1))
    return b_ball / math.gamma(beta + 2 * mu + d)


def validate(params: WeightParams, point: PointCH, kind: str | None = None) -> str | None:
    """Check a point against the domain constraints; None if ok."""
    kind = kind or params.kind
    if kind not in ("surface", "solid"):
        raise ArgumentError(f"kind must be surface or solid, got {kind!r}")
    x, t = point.as_arrays()
    if x.shape != (params.d,):
        return f"x must have dimension {params.d}, got {x.shape}"
    rho, b = params.rho, params.b
    r2 = float(np.dot(x, x))
    scale = max(1.0, t * t)
    if not params.double and t < -GEOM_TOL:
        return f"upper-cone domain requires t >= 0, got t={t}"
    if abs(t) < rho - GEOM_TOL * scale:
        return f"|t|={abs(t)} below the waist rho={rho}"
    if abs(t) > b + GEOM_TOL * scale:
        return f"|t|={abs(t)} beyond the rim b={b}"
    gap = r2 - (t * t - rho * rho)
    if kind == "surface":
        if abs(gap) > GEOM_TOL * scale:
            return f"|x|^2 - (t^2 - rho^2) = {gap} violates the surface constraint"
    else:
        if gap > GEOM_TOL * scale:
            return f"|x|^2 - (t^2 - rho^2) = {gap} > 0 lies outside the solid"
    return None


# ---------------------------------------------------------------------------
# quadrature grids
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _surface_grid_cached(params: WeightParams, degree: int):
    d, rho = params.d, params.rho
    spts, sw = blocks.sphere_rule(d, degree)
    if params.double:
        ns = degree // 2 + 2
        srule = poly1d.gauss_rule(params.t_weight_spec(0), ns)
        s, ws = srule.nodes, srule.weights
        tpos = np.sqrt(s + rho * rho)
        r = np.sqrt(s)
        # pair (x, +t) and (x, -t); odd-in-t integrands cancel exactly
        x = (r[:, None, None] * spts[None, :, :]).reshape(-1, d)
        t = np.repeat(tpos, len(spts))
        w = np.outer(ws, sw).ravel() / 2.0
        X = np.concatenate([x, x])
        T = np.concatenate([t, -t])
        W = np.concatenate([w, w])
        return X, T, W
    nt = degree + 2
    trule = poly1d.gauss_rule(params.t_weight_spec(0), nt)
    t, wt = trule.nodes, trule.weights
    X = (t[:, None, None] * spts[None, :, :]).reshape(-1, d)
    T = np.repeat(t, len(spts))
    W = np.outer(wt, sw).ravel()
    return X, T, W


@lru_cache(maxsize=256)
def _solid_grid_cached(params: WeightParams, degree: int):
    d, rho, mu = params.d, params.rho, params.mu
    bpts, bw = blocks.ball_rule(d, mu, degree)
    if params.double:
        ns = degree // 2 + 2
        srule = poly1d.gauss_rule(params.t_weight_spec(0), ns)
        s, ws = srule.nodes, srule.weights
        tpos = np.sqrt(s + rho * rho)
        r = np.sqrt(s)
        x = (r[:, None, None] * bpts[None, :, :]).reshape(-1, d)
        t = np.repeat(tpos, len(bpts))
        w = np.outer(ws, bw).ravel() / 2.0
        return np.concatenate([x, x]), np.concatenate([t, -t]), np.concatenate([w, w])
    nt = degree + 2
    trule = poly1d.gauss_rule(params.t_weight_spec(0), nt)
    t, wt = trule.nodes, trule.weights
    X = (t[:, None, None] * bpts[None, :, :]).reshape(-1, d)
    T = np.repeat(t, len(bpts))
    W = np.outer(wt, bw).ravel()
    return X, T, W


def surface_grid(params: WeightParams, degree: int | None = None):
    """Quadrature grid (x, t, w) for the normalized surface measure."""
    if params.kind != "surface":
        raise ArgumentError("surface grid requested for solid parameters")
    if not params.normalizable:
        raise ParameterError("weight is not normalizable for these parameters")
    return _surface_grid_cached(params, degree or quad_degree_default())


def solid_grid(params: WeightParams, degree: int | None = None):
    """Quadrature grid (x, t, w) for the normalized solid measure."""
    if params.kind != "solid":
        raise ArgumentError("solid grid requested for surface parameters")
    if not params.normalizable:
        raise ParameterError("weight is not normalizable for these parameters")
    return _solid_grid_cached(params, degree or quad_degree_default())


def integrate_surface(params: WeightParams, f, degree: int | None = None) -> float:
    """b_w * integral of f against the surface weight (f vectorized as f(x, t))."""
    x, t, w = surface_grid(params, degree)
    return float(np.dot(w, f(x, t)))


def integrate_solid(params: WeightParams, f, degree: int | None = None) -> float:
    """b_w * integral of f against the solid weight (f vectorized as f(x, t))."""
    x, t, w = solid_grid(params, degree)
    return float(np.dot(w, f(x, t)))


def grid(params: WeightParams, degree: int | None = None):
    return surface_grid(params, degree) if params.kind == "surface" else solid_grid(params, degree)


def integrate(params: WeightParams, f, degree: int | None = None) -> float:
    x, t, w = grid(params, degree)
    return float(np.dot(w, f(x, t)))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def sample_points(
    params: WeightParams,
    kind: str | None = None,
    count: int = 10,
    seed: int = 0,
    margin: float = 0.05,
) -> list[PointCH]:
    """Deterministic points on/in the domain, away from apex and waist.

    The margin keeps ||t| - rho| >= margin (and |t| >= margin on the cone),
    because several operators carry 1/t and 1/(t^2 - rho^2) coefficients.
    """
    if count <= 0:
        raise ArgumentError("count must be positive")
    kind = kind or params.kind
    rng = np.random.default_rng(seed)
    d, rho = params.d, params.rho
    hi = params.b if params.compact else rho + 2.5
    lo = rho + margin
    if hi - lo < 1e-9:
        raise ArgumentError("margin leaves no admissible t range")
    out = []
    for _ in range(count):
        tm = rng.uniform(lo, hi)
        if params.double and rng.uniform() < 0.5:
            tm = -tm
        xi = rng.normal(size=d)
        xi /= np.linalg.norm(xi)
        rad = math.sqrt(tm * tm - rho * rho)
        if kind == "solid":
            rad *= rng.uniform(0.0, 0.95)
        out.append(PointCH.of(rad * xi, tm))
    return out

"""Registry of the second-order operators and a finite-difference verifier.

Each registered operator is a coefficient bundle over a fixed set of term
symbols plus an eigenvalue law in the total degree n.  Surface operators act
in intrinsic coordinates (t, angles) with terms

    dtt: d^2/dt^2   dt: d/dt   lb0: Laplace-Beltrami on the angular factor
    zero: multiplication

and solid operators act in Cartesian (x, t) with terms

    dtt, dt, lap (Delta_x), xgrad (<x, grad>), xgrad2 (<x, grad>^2),
    xgrad_dt (<x, grad> d/dt), zero.

The finite-difference engine uses 5-point central stencils (4-point cross
stencils for mixed derivatives) at a default step of 1e-4 on unit-scale
coordinates; sample points must respect the singular margin of the 1/t and
1/(t^2 - rho^2) coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bases
from .domain import WeightParams, sample_points
from .errors import ArgumentError, CapabilityError
from .fdcore import DEFAULT_STEP, d1, d2, d_cross

__all__ = [
    "OperatorSpec",
    "apply_operator",
    "eigencheck",
    "registry",
    "registry_names",
]


@dataclass(frozen=True)
class OperatorSpec:
    """A named second-order operator with its applicable space."""

    name: str
    kind: str  # surface | solid
    family: str  # weight family of the eigenfunction space
    beta: float  # the weight exponent the theorem fixes
    parity: int | None  # 0 even, 1 odd, None for the upper-cone spaces
    rho: str  # "zero", "positive", or "any"
    coeff_builder: object
    eigen_builder: object

    def coeffs(self, params: WeightParams) -> dict:
        """Coefficient functions term -> f(x, t) for the given parameters."""
        self.check_space(params)
        return self.coeff_builder(params)

    def eigenvalue(self, n: int, params: WeightParams) -> float:
        return self.eigen_builder(n, params)

    def check_space(self, params: WeightParams):
        msgs = []
        if params.family != self.family:
            msgs.append(f"family {self.family}")
        if params.kind != self.kind:
            msgs.append(f"{self.kind} domain")
        if abs(params.beta - self.beta) > 1e-12:
            msgs.append(f"beta = {self.beta}")
        if self.rho == "zero" and params.rho != 0:
            msgs.append("rho = 0")
        if self.rho == "positive" and not params.rho > 0:
            msgs.append("rho > 0")
        if msgs:
            raise CapabilityError(
                f"operator {self.name} applies to " + ", ".join(msgs) +
                f"; got family={params.family}, kind={params.kind}, "
                f"beta={params.beta}, rho={params.rho}"
            )


def _c(val):
    return lambda x, t: np.full_like(t, val)


# -- surface coefficient bundles --------------------------------------------


def _sf_cone_g(params):
    g, d = params.gamma, params.d
    return {
        "dtt": lambda x, t: 1 - t * t,
        "dt": lambda x, t: -(2 * g + d) * t + (d - 1) / t,
        "lb0": lambda x, t: 1.0 / (t * t),
    }


def _sf_cone_g_odd(params):
    g, d = params.gamma, params.d
    return {
        "dtt": lambda x, t: 1 - t * t,
        "dt": lambda x, t: -(2 * g + d - 2) * t + (d - 3) / t,
        "lb0": lambda x, t: 1.0 / (t * t),
        "zero": lambda x, t: -(d - 3) / (t * t),
    }


def _sf_hyp_g(params):
    g, d, r2 = params.gamma, params.d, params.rho**2
    return {
        "dtt": lambda x, t: (1 + r2 - t * t) * (1 - r2 / (t * t)),
        "dt": lambda x, t: ((1 + r2 - t * t) * r2 / (t * t) - (2 * g + d) * (t * t - r2)) / t
        + (d - 1) / t,
        "lb0": lambda x, t: 1.0 / (t * t - r2),
    }


def _sf_cone_h(params):
    d = params.d
    return {
        "dtt": _c(1.0),
        "dt": lambda x, t: -2 * t + (d - 1) / t,
        "lb0": lambda x, t: 1.0 / (t * t),
    }


def _sf_cone_h_odd(params):
    d = params.d
    return {
        "dtt": _c(1.0),
        "dt": lambda x, t: -2 * t + (d - 3) / t,
        "lb0": lambda x, t: 1.0 / (t * t),
        "zero": lambda x, t: -(d - 3) / (t * t),
    }


def _sf_hyp_h(params):
    d, r2 = params.d, params.rho**2
    return {
        "dtt": lambda x, t: 1 - r2 / (t * t),
        "dt": lambda x, t: (r2 / (t * t) - 2 * (t * t - r2)) / t + (d - 1) / t,
        "lb0": lambda x, t: 1.0 / (t * t - r2),
    }


def _sf_jacobi(params):
    g, d = params.gamma, params.d
    return {
        "dtt": lambda x, t: t * (1 - t),
        "dt": lambda x, t: (d - 1) - (d + g) * t,
        "lb0": lambda x, t: 1.0 / t,
    }


def _sf_laguerre(params):
    d = params.d
    return {
        "dtt": lambda x, t: t,
        "dt": lambda x, t: (d - 1) - t,
        "lb0": lambda x, t: 1.0 / t,
    }


# -- solid coefficient bundles ----------------------------------------------


def _so_cone_g(params):
    g, mu, d = params.gamma, params.mu, params.d
    return {
        "dtt": lambda x, t: 1 - t * t,
        "lap": _c(1.0),
        "xgrad2": _c(-1.0),
        "xgrad_dt": lambda x, t: 2 * (1 - t * t) / t,
        "dt": lambda x, t: (2 * mu + d) / t - (2 * g + 2 * mu + d + 1) * t,
        "xgrad": _c(-(2 * g + 2 * mu + d)),
    }


def _so_cone_g_odd(params):
    g, mu, d = params.gamma, params.mu, params.d
    return {
        "dtt": lambda x, t: 1 - t * t,
        "lap": _c(1.0),
        "xgrad2": _c(-1.0),
        "xgrad_dt": lambda x, t: 2 * (1 - t * t) / t,
        "dt": lambda x, t: (2 * mu + d - 2) / t - (2 * g + 2 * mu + d - 1) * t,
        "xgrad": lambda x, t: -(2 * g + 2 * mu + d - 2) - 2.0 / (t * t),
        "zero": lambda x, t: -(2 * mu + d - 2) / (t * t),
    }


def _so_hyp_g(params):
    g, mu, d, r2 = params.gamma, params.mu, params.d, params.rho**2
    return {
        "dtt": lambda x, t: (1 + r2 - t * t) * (1 - r2 / (t * t)),
        "lap": _c(1.0),
        "xgrad2": _c(-1.0),
        "xgrad_dt": lambda x, t: 2 * (1 + r2 - t * t) / t,
        "dt": lambda x, t: ((1 + r2 - t * t) * r2 / (t * t) + 2 * mu + d) / t
        - (2 * g + 2 * mu + d + 1) * (1 - r2 / (t * t)) * t,
        "xgrad": _c(1.0 - (2 * g + 2 * mu + d + 1)),
    }


def _so_cone_h(params):
    mu, d = params.mu, params.d
    return {
        "dtt": _c(1.0),
        "lap": _c(1.0),
        "xgrad_dt": lambda x, t: 2.0 / t,
        "dt": lambda x, t: (2 * mu + d) / t - 2 * t,
        "xgrad": _c(-2.0),
    }


def _so_cone_h_odd(params):
    mu, d = params.mu, params.d
    return {
        "dtt": _c(1.0),
        "lap": _c(1.0),
        "xgrad_dt": lambda x, t: 2.0 / t,
        "dt": lambda x, t: (2 * mu + d - 2) / t - 2 * t,
        "xgrad": lambda x, t: -2.0 - 2.0 / (t * t),
        "zero": lambda x, t: -(2 * mu + d - 2) / (t * t),
    }


def _so_hyp_h(params):
    mu, d, r2 = params.mu, params.d, params.rho**2
    return {
        "dtt": lambda x, t: 1 - r2 / (t * t),
        "lap": _c(1.0),
        "xgrad_dt": lambda x, t: 2.0 / t,
        "dt": lambda x, t: (r2 / (t * t) + 2 * mu + d) / t - 2 * (t * t - r2) / t,
        "xgrad": _c(-2.0),
    }


def _so_jacobi(params):
    g, mu, d = params.gamma, params.mu, params.d
    return {
        "dtt": lambda x, t: t * (1 - t),
        "lap": lambda x, t: t,
        "xgrad2": _c(-1.0),
        "xgrad_dt": lambda x, t: 2 * (1 - t),
        "dt": lambda x, t: (2 * mu + d) - (2 * mu + g + d + 1) * t,
        "xgrad": _c(-(2 * mu + g + d)),
    }


def _so_laguerre(params):
    mu, d = params.mu, params.d
    return {
        "dtt": lambda x, t: t,
        "lap": lambda x, t: t,
        "xgrad_dt": _c(2.0),
        "dt": lambda x, t: (2 * mu + d) - t,
        "xgrad": _c(-1.0),
    }


def _lam_g(params):
    return 2 * params.gamma + params.d - 1


_REGISTRY: dict[str, OperatorSpec] = {}


def _register(name, kind, family, beta, parity, rho, coeffs, eig):
    _REGISTRY[name] = OperatorSpec(name, kind, family, beta, parity, rho, coeffs, eig)


_register("sfConeGdiff", "surface", "gegenbauer", 0.0, 0, "zero", _sf_cone_g,
          lambda n, p: -n * (n + 2 * p.gamma + p.d - 1))
_register("sfConeGdiffO", "surface", "gegenbauer", -1.0, 1, "zero", _sf_cone_g_odd,
          lambda n, p: -n * (n + 2 * p.gamma + p.d - 3))
_register("sfHypGdiff", "surface", "gegenbauer", 0.0, 0, "positive", _sf_hyp_g,
          lambda n, p: -n * (n + 2 * p.gamma + p.d - 1))
_register("solidConeGdiff", "solid", "gegenbauer", 0.5, 0, "zero", _so_cone_g,
          lambda n, p: -n * (n + 2 * p.gamma + 2 * p.mu + p.d))
_register("solidConeGdiffO", "solid", "gegenbauer", -0.5, 1, "zero", _so_cone_g_odd,
          lambda n, p: -n * (n + 2 * p.gamma + 2 * p.mu + p.d - 2))
_register("solidHypGdiff", "solid", "gegenbauer", 0.5, 0, "any", _so_hyp_g,
          lambda n, p: -n * (n + 2 * p.gamma + 2 * p.mu + p.d))
_register("sfconeHdiff", "surface", "hermite", 0.0, 0, "zero", _sf_cone_h, lambda n, p: -2 * n)
_register("sfconeHdiffO", "surface", "hermite", -1.0, 1, "zero", _sf_cone_h_odd,
          lambda n, p: -2 * n)
_register("sfHypHdiff", "surface", "hermite", 0.0, 0, "positive", _sf_hyp_h, lambda n, p: -2 * n)
_register("solidConeHdiff", "solid", "hermite", 0.5, 0, "zero", _so_cone_h, lambda n, p: -2 * n)
_register("solidConeHdiffO", "solid", "hermite", -0.5, 1, "zero", _so_cone_h_odd,
          lambda n, p: -2 * n)
_register("solidHypHdiff", "solid", "hermite", 0.5, 0, "positive", _so_hyp_h, lambda n, p: -2 * n)
_register("diffJsf", "surface", "jacobi_cone", -1.0, None, "zero", _sf_jacobi,
          lambda n, p: -n * (n + p.gamma + p.d - 1))
_register("diffJ", "solid", "jacobi_cone", 0.0, None, "zero", _so_jacobi,
          lambda n, p: -n * (n + 2 * p.mu + p.gamma + p.d))
_register("sfConeLaguerrediff", "surface", "laguerre_cone", -1.0, None, "zero", _sf_laguerre,
          lambda n, p: -n)
_register("ConeLaguerrediff", "solid", "laguerre_cone", 0.0, None, "zero", _so_laguerre,
          lambda n, p: -n)


def registry(name: str) -> OperatorSpec:
    """Look up a registered operator by name."""
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ArgumentError(f"unknown operator {name!r}; known: {sorted(_REGISTRY)}") from None


def registry_names() -> list[str]:
    return sorted(_REGISTRY)


# ---------------------------------------------------------------------------
# finite-difference application
# ---------------------------------------------------------------------------


def _surface_chart(params: WeightParams, x: np.ndarray, t: np.ndarray):
    """Intrinsic coordinates for surface points: x = c(t) xi with c = t or
    sqrt(t^2 - rho^2)."""
    d, rho = params.d, params.rho
    if rho == 0:
        xi = x / t[:, None]
    else:
        xi = x / np.sqrt(t * t - rho * rho)[:, None]
    if d == 2:
        ang = np.arctan2(xi[:, 1], xi[:, 0]).reshape(-1, 1)
    else:
        th = np.arccos(np.clip(xi[:, 2], -1, 1))
        if np.min(np.sin(th)) < 0.05:
            raise ArgumentError("surface FD chart needs points away from the poles")
        ang = np.stack([th, np.arctan2(xi[:, 1], xi[:, 0])], axis=-1)
    return ang


def _surface_embed(params: WeightParams, t: np.ndarray, ang: np.ndarray):
    d, rho = params.d, params.rho
    if d == 2:
        xi = np.stack([np.cos(ang[:, 0]), np.sin(ang[:, 0])], axis=-1)
    else:
        st = np.sin(ang[:, 0])
        xi = np.stack([st * np.cos(ang[:, 1]), st * np.sin(ang[:, 1]), np.cos(ang[:, 0])], axis=-1)
    c = t if rho == 0 else np.sign(t) * np.sqrt(t * t - rho * rho)
    # on the upper cone t > 0 both conventions coincide
    if rho > 0:
        c = np.sqrt(t * t - rho * rho)
    return xi * c[:, None]


def _apply_surface(spec: OperatorSpec, params: WeightParams, u, x, t, h):
    coeffs = spec.coeffs(params)
    d = params.d
    ang = _surface_chart(params, x, t)
    z = np.concatenate([t.reshape(-1, 1), ang], axis=1)

    def f(zz):
        tt = zz[:, 0]
        return u(_surface_embed(params, tt, zz[:, 1:]), tt)

    ut = d1(f, z, 0, h)
    utt = d2(f, z, 0, h)
    if d == 2:
        lb = d2(f, z, 1, h)
    else:
        th = z[:, 1]
        lb = d2(f, z, 1, h) + np.cos(th) / np.sin(th) * d1(f, z, 1, h) + d2(f, z, 2, h) / np.sin(th) ** 2
    vals = f(z)
    out = coeffs["dtt"](x, t) * utt + coeffs["dt"](x, t) * ut + coeffs["lb0"](x, t) * lb
    if "zero" in coeffs:
        out = out + coeffs["zero"](x, t) * vals
    return out, vals


def _apply_solid(spec: OperatorSpec, params: WeightParams, u, x, t, h):
    coeffs = spec.coeffs(params)
    d = params.d
    z = np.concatenate([x, t.reshape(-1, 1)], axis=1)

    def f(zz):
        return u(zz[:, :d], zz[:, d])

    n = len(t)
    grad = np.empty((n, d + 1))
    for i in range(d + 1):
        grad[:, i] = d1(f, z, i, h)
    hxx = np.empty((n, d, d))
    for i in range(d):
        hxx[:, i, i] = d2(f, z, i, h)
        for j in range(i + 1, d):
            hij = d_cross(f, z, i, j, h)
            hxx[:, i, j] = hij
            hxx[:, j, i] = hij
    hxt = np.stack([d_cross(f, z, i, d, h) for i in range(d)], axis=-1)
    utt = d2(f, z, d, h)
    vals = f(z)

    lap = np.trace(hxx, axis1=1, axis2=2)
    xg = np.einsum("ni,ni->n", x, grad[:, :d])
    xg2 = np.einsum("ni,nij,nj->n", x, hxx, x) + xg
    xgdt = np.einsum("ni,ni->n", x, hxt)
    out = coeffs["dtt"](x, t) * utt
    if "dt" in coeffs:
        out = out + coeffs["dt"](x, t) * grad[:, d]
    if "lap" in coeffs:
        out = out + coeffs["lap"](x, t) * lap
    if "xgrad2" in coeffs:
        out = out + coeffs["xgrad2"](x, t) * xg2
    if "xgrad" in coeffs:
        out = out + coeffs["xgrad"](x, t) * xg
    if "xgrad_dt" in coeffs:
        out = out + coeffs["xgrad_dt"](x, t) * xgdt
    if "zero" in coeffs:
        out = out + coeffs["zero"](x, t) * vals
    return out, vals


def apply_operator(spec: OperatorSpec, params: WeightParams, u, points, h: float = DEFAULT_STEP):
    """L u at the given points by central finite differences.

    points is a list of PointCH or a pair of arrays (x, t); returns the array
    of operator values (and enforces the singular margin).
    """
    if isinstance(points, tuple):
        x, t = points
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
    else:
        x = np.stack([np.asarray(p.x, dtype=float) for p in points])
        t = np.array([p.t for p in points], dtype=float)
    if np.min(np.abs(np.abs(t) - params.rho)) < 0.04 or np.min(np.abs(t)) < 0.04:
        raise ArgumentError("points violate the singular margin of the operator")
    if spec.kind == "surface":
        out, _ = _apply_surface(spec, params, u, x, t, h)
    else:
        out, _ = _apply_solid(spec, params, u, x, t, h)
    return out


def eigencheck(
    name: str,
    params: WeightParams,
    n_max: int = 4,
    nsamples: int = 30,
    seed: int = 0,
    h: float = DEFAULT_STEP,
    margin: float = 0.05,
) -> dict:
    """Max relative FD residual |L u - lambda_n u| / (1 + |u|) per (n, m).

    u runs over the basis of the operator's applicable space; the report
    carries the per-(n, m) maxima and the overall maximum.
    """
    spec = registry(name)
    spec.check_space(params)
    pts: list = []
    attempt = 0
    while len(pts) < nsamples and attempt < 40:
        for p in sample_points(params, params.kind, nsamples, seed + attempt, margin):
            if params.d == 3 and params.kind == "surface":
                c = math.sqrt(max(p.t * p.t - params.rho**2, 0.0))
                if c < 1e-9 or abs(p.x[2] / c) > 0.95:
                    continue  # FD chart is singular at the poles
            pts.append(p)
        attempt += 1
    pts = pts[:nsamples]
    x = np.stack([np.asarray(p.x, dtype=float) for p in pts])
    t = np.array([p.t for p in pts], dtype=float)
    report: dict = {"operator": name, "per_degree": {}, "max_residual": 0.0}
    for n in range(n_max + 1):
        if spec.parity is None:
            els = bases.basis(params, n)
        else:
            els = bases.parity_basis(params, n, spec.parity)
        lam = spec.eigenvalue(n, params)
        for el in els:
            def u(xx, tt, el=el):
                return el(xx, tt)

            vals = el(x, t)
            scale = np.max(np.abs(vals))
            if scale == 0:
                scale = 1.0
            if spec.kind == "surface":
                lv, uv = _apply_surface(spec, params, u, x, t, h)
            else:
                lv, uv = _apply_solid(spec, params, u, x, t, h)
            res = float(np.max(np.abs(lv - lam * uv) / (scale * (1.0 + np.abs(uv / scale)))))
            key = (n, el.index.m)
            report["per_degree"][key] = max(report["per_degree"].get(key, 0.0), res)
            report["max_residual"] = max(report["max_residual"], res)
    return report

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hyperbasis import domain, poly1d
from hyperbasis.domain import PointCH, WeightParams
from hyperbasis.errors import ParameterError

ALL_PARAMS = [
    WeightParams.gegenbauer_surface(2, 0.0, 0.5),
    WeightParams.gegenbauer_surface(3, 1.0, 1.0, rho=1.0),
    WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5),
    WeightParams.gegenbauer_solid(3, 1.0, 0.7, 0.3, rho=0.5),
    WeightParams.hermite_surface(2, 0.0),
    WeightParams.hermite_surface(3, 0.5, rho=1.0),
    WeightParams.hermite_solid(2, 0.5, 0.5),
    WeightParams.jacobi_upper(2, 0.0, 1.0),
    WeightParams.jacobi_upper(3, 1.0, 0.5, mu=0.5),
    WeightParams.laguerre_upper(2, 0.0),
    WeightParams.laguerre_upper(2, 0.5, mu=0.25),
]


def test_parameter_validation():
    with pytest.raises(ParameterError):
        WeightParams.gegenbauer_surface(2, 0.0, -0.6)
    with pytest.raises(ParameterError):
        WeightParams.gegenbauer_surface(2, -0.6, 0.5, rho=1.0)  # rho>0 needs beta > -1/2
    WeightParams.gegenbauer_surface(2, -1.0, 0.5)  # cone allows beta > -(d+1)/2
    with pytest.raises(ParameterError):
        WeightParams.gegenbauer_solid(2, 0.5, 0.5, -0.6)
    with pytest.raises(ParameterError):
        WeightParams("jacobi_cone", 2, 0.0, 1.0, None, 0.5)  # upper cone needs rho=0
    with pytest.raises(ParameterError):
        WeightParams.hermite_surface(2, -2.1)


@pytest.mark.parametrize("params", ALL_PARAMS, ids=str)
def test_normalization(params):
    assert_allclose(domain.integrate(params, lambda x, t: np.ones_like(t), 24), 1.0, rtol=5e-14)


@pytest.mark.parametrize(
    "params",
    [p for p in ALL_PARAMS if p.double],
    ids=str,
)
def test_odd_integrand_vanishes(params):
    assert abs(domain.integrate(params, lambda x, t: t, 24)) < 1e-14
    assert abs(domain.integrate(params, lambda x, t: t * x[..., 0] ** 2, 24)) < 1e-14


def test_factorized_surface_integral():
    # f(x,t) = g(t^2-rho^2) h(xi) with g(s) = s, h = 1 equals the beta-integral
    p = WeightParams.gegenbauer_surface(2, 0.5, 0.5)
    val = domain.integrate_surface(p, lambda x, t: t * t - p.rho**2, 24)
    assert_allclose(val, poly1d.weight_moment(p.t_weight_spec(0), 1), rtol=1e-10)
    ph = WeightParams.gegenbauer_surface(2, 0.5, 0.5, rho=0.8)
    val = domain.integrate_surface(ph, lambda x, t: t * t - ph.rho**2, 24)
    assert_allclose(val, poly1d.weight_moment(ph.t_weight_spec(0), 1), rtol=1e-10)


def test_factorized_solid_integral():
    p = WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5)
    val = domain.integrate_solid(p, lambda x, t: t * t - p.rho**2, 24)
    assert_allclose(val, poly1d.weight_moment(p.t_weight_spec(0), 1), rtol=1e-10)


def test_norm_constant_matches_quadrature():
    # b_w times the raw weight integral is 1; check on the cone surface where
    # the raw integral is elementary: sigma_2 * int_{-1}^{1} |t| dt = 2 pi
    p = WeightParams.gegenbauer_surface(2, 0.0, 0.5)
    assert_allclose(domain.norm_constant(p) * 2 * math.pi, 1.0, rtol=1e-13)
    for params in ALL_PARAMS:
        assert domain.norm_constant(params) > 0


def test_upper_lower_symmetry():
    # even integrand: the double-domain integral is twice the upper part
    p = WeightParams.gegenbauer_surface(2, 0.5, 0.5, rho=0.5)
    x, t, w = domain.surface_grid(p, 24)
    f = t * t + x[:, 0] ** 2
    full = np.dot(w, f)
    upper = np.dot(w[t > 0], f[t > 0])
    assert_allclose(full, 2 * upper, rtol=1e-13)


def test_quadrature_polynomial_exactness():
    # total-degree products of t-powers and a harmonic factor against moments
    p = WeightParams.gegenbauer_surface(2, 1.0, 0.5)
    got = domain.integrate_surface(p, lambda x, t: (t**4) * (x[..., 0] ** 2 + x[..., 1] ** 2), 30)
    # on the surface |x|^2 = t^2, so this is the t^6 moment: E[s^3]
    assert_allclose(got, poly1d.weight_moment(p.t_weight_spec(0), 3), rtol=1e-10)


def test_validate():
    p = WeightParams.gegenbauer_surface(2, 0.0, 0.5, rho=0.8)
    assert domain.validate(p, PointCH.of((0.6, 0.0), 1.0)) is None
    assert domain.validate(p, PointCH.of((0.0, 0.0), 0.8)) is None  # waist point
    pc = WeightParams.gegenbauer_surface(2, 0.0, 0.5)
    msg = domain.validate(pc, PointCH.of((1.0, 0.0), 0.5))
    assert msg is not None and "surface" in msg
    ps = WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5)
    assert domain.validate(ps, PointCH.of((0.2, 0.1), 0.6)) is None
    assert domain.validate(ps, PointCH.of((0.7, 0.0), 0.6)) is not None
    pu = WeightParams.laguerre_upper(2, 0.0)
    assert domain.validate(pu, PointCH.of((0.5, 0.0), -0.5), "surface") is not None


def test_sample_points():
    p = WeightParams.gegenbauer_surface(2, 0.0, 0.5)
    a = domain.sample_points(p, count=8, seed=42)
    b = domain.sample_points(p, count=8, seed=42)
    assert a == b
    assert all(domain.validate(p, q) is None for q in a)
    assert min(abs(abs(q.t) - p.rho) for q in a) >= 0.05
    ph = WeightParams.hermite_solid(2, 0.5, 0.5, rho=0.7)
    pts = domain.sample_points(ph, count=8, seed=1, margin=0.1)
    assert all(domain.validate(ph, q) is None for q in pts)
    assert min(abs(abs(q.t) - ph.rho) for q in pts) >= 0.1


def test_quad_env_override(monkeypatch):
    monkeypatch.setenv("HYPERBASIS_QUAD_POINTS", "12")
    assert domain.quad_degree_default() == 12
    monkeypatch.setenv("HYPERBASIS_QUAD_POINTS", "junk")
    with pytest.raises(ParameterError):
        domain.quad_degree_default()

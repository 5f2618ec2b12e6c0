import numpy as np
import pytest

from hyperbasis import bases, diffops, domain
from hyperbasis.domain import WeightParams
from hyperbasis.errors import ArgumentError, CapabilityError

OPERATOR_PARAMS = {
    "sfConeGdiff": WeightParams.gegenbauer_surface(2, 0.0, 0.5),
    "sfConeGdiffO": WeightParams.gegenbauer_surface(2, -1.0, 0.5),
    "sfHypGdiff": WeightParams.gegenbauer_surface(2, 0.0, 0.5, rho=1.0),
    "solidConeGdiff": WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5),
    "solidConeGdiffO": WeightParams.gegenbauer_solid(2, -0.5, 0.5, 0.5),
    "solidHypGdiff": WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5, rho=1.0),
    "sfconeHdiff": WeightParams.hermite_surface(2, 0.0),
    "sfconeHdiffO": WeightParams.hermite_surface(2, -1.0),
    "sfHypHdiff": WeightParams.hermite_surface(2, 0.0, rho=1.0),
    "solidConeHdiff": WeightParams.hermite_solid(2, 0.5, 0.5),
    "solidConeHdiffO": WeightParams.hermite_solid(2, -0.5, 0.5),
    "solidHypHdiff": WeightParams.hermite_solid(2, 0.5, 0.5, rho=1.0),
    "diffJsf": WeightParams.jacobi_upper(2, -1.0, 1.0),
    "diffJ": WeightParams.jacobi_upper(2, 0.0, 0.5, mu=0.5),
    "sfConeLaguerrediff": WeightParams.laguerre_upper(2, -1.0),
    "ConeLaguerrediff": WeightParams.laguerre_upper(2, 0.0, mu=0.5),
}


def test_registry_names():
    assert len(diffops.registry_names()) == 16
    assert set(OPERATOR_PARAMS) == set(diffops.registry_names())
    with pytest.raises(ArgumentError):
        diffops.registry("no_such_operator")


def test_eigenvalue_laws():
    p = WeightParams.gegenbauer_surface(2, 0.0, 0.5)
    assert diffops.registry("sfConeGdiff").eigenvalue(2, p) == -8.0
    ph = WeightParams.hermite_surface(2, 0.0)
    assert diffops.registry("sfconeHdiff").eigenvalue(5, ph) == -10.0
    for name, params in OPERATOR_PARAMS.items():
        assert diffops.registry(name).eigenvalue(0, params) == 0.0


def test_space_mismatch_is_capability_error():
    spec = diffops.registry("sfConeGdiff")
    wrong = WeightParams.gegenbauer_surface(2, 1.0, 0.5)
    with pytest.raises(CapabilityError) as err:
        spec.check_space(wrong)
    assert "beta = 0.0" in str(err.value)
    with pytest.raises(CapabilityError):
        diffops.registry("solidConeGdiff").check_space(
            WeightParams.gegenbauer_surface(2, 0.5, 0.5)
        )


def test_apply_on_constant():
    # first/second-order parts vanish on constants; zeroth-order terms are
    # evaluated exactly
    p = OPERATOR_PARAMS["sfConeGdiffO"]
    spec = diffops.registry("sfConeGdiffO")
    pts = domain.sample_points(p, count=6, seed=3)
    vals = diffops.apply_operator(spec, p, lambda x, t: np.ones_like(t), pts)
    t = np.array([q.t for q in pts])
    expected = -(p.d - 3) / (t * t)  # the zeroth-order coefficient
    np.testing.assert_allclose(vals, expected, atol=1e-6)
    p2 = OPERATOR_PARAMS["sfConeGdiff"]
    spec2 = diffops.registry("sfConeGdiff")
    vals2 = diffops.apply_operator(spec2, p2, lambda x, t: np.ones_like(t), pts)
    np.testing.assert_allclose(vals2, 0.0, atol=1e-6)


def test_apply_margin_guard():
    p = OPERATOR_PARAMS["sfConeGdiff"]
    spec = diffops.registry("sfConeGdiff")
    with pytest.raises(ArgumentError):
        diffops.apply_operator(spec, p, lambda x, t: t, (np.array([[0.01, 0.0]]), np.array([0.01])))


def test_apply_matches_eigen_relation_pointwise():
    p = OPERATOR_PARAMS["sfConeGdiff"]
    spec = diffops.registry("sfConeGdiff")
    el = bases.element(p, bases.BasisIndex(2, 0, 0))
    pts = domain.sample_points(p, count=10, seed=4)
    lv = diffops.apply_operator(spec, p, lambda x, t: el(x, t), pts)
    uv = np.array([el.at(q) for q in pts])
    np.testing.assert_allclose(lv, -8.0 * uv, atol=1e-5)


def test_apply_hand_computed_symbol():
    # sfConeGdiff on u(x,t) = t: (1-t^2)*0 - (2g+d)t + (d-1)/t
    p = OPERATOR_PARAMS["sfConeGdiff"]
    spec = diffops.registry("sfConeGdiff")
    pts = domain.sample_points(p, count=8, seed=5)
    t = np.array([q.t for q in pts])
    vals = diffops.apply_operator(spec, p, lambda x, tt: tt, pts)
    np.testing.assert_allclose(vals, -(2 * 0.5 + 2) * t + 1.0 / t, atol=1e-6)


@pytest.mark.parametrize("name", sorted(OPERATOR_PARAMS), ids=str)
def test_eigencheck_small(name):
    rep = diffops.eigencheck(name, OPERATOR_PARAMS[name], n_max=3, nsamples=12, seed=1)
    assert rep["max_residual"] < 1e-5, rep
    if (0, 0) in rep["per_degree"]:  # odd spaces have no degree-0 element
        assert rep["per_degree"][(0, 0)] == 0.0


def test_eigenvalue_independent_of_m():
    # residuals stay uniformly small across all m within fixed n
    rep = diffops.eigencheck("solidConeGdiff", OPERATOR_PARAMS["solidConeGdiff"],
                             n_max=4, nsamples=15, seed=2)
    per_m = [v for (n, m), v in rep["per_degree"].items() if n == 4]
    assert len(per_m) >= 3 and max(per_m) < 1e-5


def test_negative_control():
    # the beta=0 operator applied to a beta=1 element (n=2, m=1) fails loudly,
    # as the would-be eigenvalues depend on m away from the stated beta
    p0 = WeightParams.gegenbauer_surface(2, 0.0, 0.5)
    p1 = WeightParams.gegenbauer_surface(2, 1.0, 0.5)
    spec = diffops.registry("sfConeGdiff")
    el = bases.element(p1, bases.BasisIndex(2, 1, 0))
    pts = domain.sample_points(p1, count=20, seed=9)
    lv = diffops.apply_operator(spec, p0, lambda x, t: el(x, t), pts)
    uv = np.array([el.at(q) for q in pts])
    scale = np.max(np.abs(uv))
    res = np.max(np.abs(lv - spec.eigenvalue(2, p0) * uv) / (scale + np.abs(uv)))
    assert res > 1e-2


def test_fd_convergence():
    # away from round-off, halving the step shrinks the residual by at least
    # the stencil order (the trigonometric angular direction is the only
    # path with nonzero truncation on polynomial eigenfunctions; see
    # docs/fd_convergence.md for the measured study)
    p = OPERATOR_PARAMS["sfConeGdiff"]
    el = bases.element(p, bases.BasisIndex(3, 3, 0))
    spec = diffops.registry("sfConeGdiff")
    pts = domain.sample_points(p, count=10, seed=6)
    uv = np.array([el.at(q) for q in pts])
    lam = spec.eigenvalue(3, p)

    def resid(h):
        lv = diffops.apply_operator(spec, p, lambda x, t: el(x, t), pts, h=h)
        return np.max(np.abs(lv - lam * uv))

    r1, r2 = resid(2e-1), resid(1e-1)
    assert 4.0 < r1 / r2 < 30.0
    # at the default step the residual has hit the round-off floor
    assert resid(1e-4) < 1e-6


def test_eigencheck_d3():
    rep = diffops.eigencheck("sfConeGdiff", WeightParams.gegenbauer_surface(3, 0.0, 1.0),
                             n_max=3, nsamples=12, seed=7)
    assert rep["max_residual"] < 1e-5
    rep = diffops.eigencheck("diffJ", WeightParams.jacobi_upper(3, 0.0, 1.0, mu=0.25),
                             n_max=3, nsamples=10, seed=8)
    assert rep["max_residual"] < 1e-5

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hyperbasis import bases, domain, poly1d
from hyperbasis.bases import BasisIndex
from hyperbasis.domain import WeightParams
from hyperbasis.errors import ArgumentError, CapabilityError

from conftest import points_arrays

GRAM_CASES = {
    "geg-surface-cone": WeightParams.gegenbauer_surface(2, 0.0, 0.5),
    "geg-surface-hyp": WeightParams.gegenbauer_surface(2, 0.5, 0.5, rho=1.0),
    "geg-solid-cone": WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5),
    "geg-solid-hyp": WeightParams.gegenbauer_solid(3, 0.7, 1.0, 0.3, rho=0.5),
    "herm-surface": WeightParams.hermite_surface(2, 0.0),
    "herm-solid-hyp": WeightParams.hermite_solid(2, 0.5, 0.5, rho=0.7),
    "jacobi-upper-surface": WeightParams.jacobi_upper(2, 0.0, 1.0),
    "jacobi-upper-solid": WeightParams.jacobi_upper(2, 1.0, 0.5, mu=0.5),
    "laguerre-upper-surface": WeightParams.laguerre_upper(3, 0.0),
    "laguerre-upper-solid": WeightParams.laguerre_upper(2, 0.5, mu=0.25),
}


def _gram_deviation(params, nmax, degree):
    x, t, w = domain.grid(params, degree)
    if params.rho > 0:
        els = [e for n in range(nmax + 1) for e in bases.parity_basis(params, n, 0)]
    else:
        els = [e for n in range(nmax + 1) for e in bases.basis(params, n)]
    vals = np.stack([e(x, t) / math.sqrt(e.norm_sq) for e in els])
    gram = (vals * w) @ vals.T
    return np.max(np.abs(gram - np.eye(len(els))))


@pytest.mark.parametrize("name", sorted(GRAM_CASES), ids=str)
def test_orthonormality(name):
    params = GRAM_CASES[name]
    assert _gram_deviation(params, 4, 20) < 1e-10


def test_index_counts_and_order():
    p = WeightParams.gegenbauer_surface(2, 0.0, 0.5)
    for d in (2, 3):
        pd = WeightParams.gegenbauer_surface(d, 0.0, 0.5)
        for n in range(7):
            even = bases.degree_indices(pd, n, 0)
            odd = bases.degree_indices(pd, n, 1)
            assert len(even) == math.comb(n + d - 1, n)
            assert len(odd) == (math.comb(n + d - 2, n - 1) if n >= 1 else 0)
            assert len(even) + len(odd) == bases.surface_dim(d, n)
    # enumeration: even block first, m descending inside each block
    ms = [ix.m for ix in bases.degree_indices(p, 4)]
    assert ms == [4, 4, 2, 2, 0, 3, 3, 1, 1]
    ps = WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5)
    for n in range(6):
        assert len(bases.degree_indices(ps, n)) == math.comb(n + 2, n)


def test_parity():
    p = WeightParams.gegenbauer_surface(2, 0.0, 0.5)
    x, t = points_arrays(p, 8, 3)
    for n in range(5):
        for el in bases.basis(p, n):
            assert_allclose(
                el(x, -t), (-1.0) ** el.index.parity * el(x, t), atol=1e-13
            )


def test_element_examples():
    # C_1^{(1/2,1/2)}(t) = t: the (n=1, m=0) cone element is t on the surface
    el = bases.gegenbauer_surface_cone(0.0, 0.5, 2, BasisIndex(1, 0, 0))
    x, t = points_arrays(WeightParams.gegenbauer_surface(2, 0.0, 0.5), 6, 4)
    assert_allclose(el(x, t), t, atol=1e-14)
    # n = m element reduces to the harmonic factor
    from hyperbasis import blocks

    el = bases.gegenbauer_surface_cone(1.0, 1.0, 2, BasisIndex(3, 3, 1))
    y = blocks.harmonics(2, 3).elements[1]
    assert_allclose(el(x, t), y(x), rtol=1e-13)
    # Laguerre upper-cone element at m = n reduces to the harmonic
    pu = WeightParams.laguerre_upper(2, 0.0)
    xu, tu = points_arrays(pu, 6, 5)
    elu = bases.laguerre_upper_cone(pu, BasisIndex(2, 2, 0))
    yu = blocks.harmonics(2, 2).elements[0]
    assert_allclose(elu(xu, tu), yu(xu), rtol=1e-13)


@pytest.mark.parametrize(
    "params,index",
    [
        (WeightParams.gegenbauer_surface(2, 1.0, 1.0), BasisIndex(4, 2, 0)),
        (WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5), BasisIndex(3, 1, (0, 0))),
        (WeightParams.hermite_surface(2, 0.0), BasisIndex(3, 1, 0)),
        (WeightParams.hermite_solid(3, 0.5, 0.5), BasisIndex(3, 2, (1, 0))),
        (WeightParams.jacobi_upper(2, 0.0, 1.0), BasisIndex(4, 2, 1)),
        (WeightParams.laguerre_upper(2, 0.5, mu=0.25), BasisIndex(3, 2, (0, 1))),
        (WeightParams.gegenbauer_surface(2, 0.5, 0.5, rho=1.0), BasisIndex(4, 2, 0)),
        (WeightParams.hermite_surface(2, 0.5, rho=0.5), BasisIndex(4, 0, 0)),
    ],
    ids=str,
)
def test_norm_formulas_match_quadrature(params, index):
    el = bases.element(params, index)
    val = domain.integrate(params, lambda x, t: el(x, t) ** 2, 26)
    assert_allclose(val, el.norm_sq, rtol=1e-9)


def test_hermite_norm_formula_example():
    # h^H_{m,n} = (beta + d/2)_m h^{m+beta+(d-1)/2}_{n-m} at d=2, beta=0, n=3, m=1
    p = WeightParams.hermite_surface(2, 0.0)
    el = bases.element(p, BasisIndex(3, 1, 0))
    expected = poly1d.poch(0.0 + 1.0, 1) * poly1d.norm_sq(
        poly1d.Family1D.gen_hermite(1.0 + 0.5), 2
    )
    assert_allclose(el.norm_sq, expected, rtol=1e-13)
    val = domain.integrate(p, lambda x, t: el(x, t) ** 2, 26)
    assert_allclose(val, expected, rtol=1e-9)


# ---------------------------------------------------------------------------
# hyperboloid transfers
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("rho", [0.5, 1.0])
def test_gegenbauer_transfer_identity(rho):
    # rhoC(x, t) = c * C(x, sqrt(t^2 - rho^2)) pointwise, with
    # c = (m1 + 1/2)_k / (gamma + m1)_k.  The paper prints (m1)_k in the
    # numerator, which fails pointwise (checked below); the corrected
    # constant is forced by the generalized-Gegenbauer quadratic relation.
    ph = WeightParams.gegenbauer_surface(2, 0.5, 0.5, rho=rho)
    pc = WeightParams.gegenbauer_surface(2, 0.5, 0.5)
    n, k = 4, 1
    ix = BasisIndex(n, n - 2 * k, 0)
    eh, ec = bases.element(ph, ix), bases.element(pc, ix)
    x, t = points_arrays(ph, 20, 6)
    c = bases.hyperboloid_transfer_constant(ph, n, k)
    tc = np.sqrt(t * t - rho * rho)
    assert np.max(np.abs(eh(x, t) - c * ec(x, tc))) < 1e-10
    m1 = (n - 2 * k) + 0.5 + 0.5
    c_printed = poly1d.poch(m1, k) / poly1d.poch(0.5 + m1, k)
    assert np.max(np.abs(eh(x, t) - c_printed * ec(x, tc))) > 1e-2


@pytest.mark.parametrize("rho", [0.5, 1.0])
def test_hermite_transfer_identity(rho):
    ph = WeightParams.hermite_surface(2, 0.0, rho=rho)
    pc = WeightParams.hermite_surface(2, 0.0)
    assert bases.hyperboloid_transfer_constant(ph, 3, 1) == -0.25
    for n, k in [(2, 1), (3, 1), (4, 2)]:
        ix = BasisIndex(n, n - 2 * k, 0)
        eh, ec = bases.element(ph, ix), bases.element(pc, ix)
        x, t = points_arrays(ph, 12, 7)
        c = bases.hyperboloid_transfer_constant(ph, n, k)
        tc = np.sqrt(t * t - rho * rho)
        assert np.max(np.abs(eh(x, t) - c * ec(x, tc))) < 1e-10


def test_solid_transfer_identities():
    for rho in (0.5, 1.0):
        pg = WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5, rho=rho)
        pgc = WeightParams.gegenbauer_solid(2, 0.5, 0.5, 0.5)
        phh = WeightParams.hermite_solid(2, 0.5, 0.5, rho=rho)
        phc = WeightParams.hermite_solid(2, 0.5, 0.5)
        x, t = points_arrays(pg, 12, 8)
        tc = np.sqrt(t * t - rho * rho)
        for n, k in [(2, 1), (4, 1)]:
            ix = BasisIndex(n, n - 2 * k, (0, 0))
            c = bases.hyperboloid_transfer_constant(pg, n, k)
            assert np.max(np.abs(bases.element(pg, ix)(x, t) - c * bases.element(pgc, ix)(x, tc))) < 1e-10
            ch = bases.hyperboloid_transfer_constant(phh, n, k)
            assert ch == (-1.0) ** k / (4.0**k * math.factorial(k))
            assert np.max(np.abs(bases.element(phh, ix)(x, t) - ch * bases.element(phc, ix)(x, tc))) < 1e-10


def test_odd_parity_hyperboloid_is_generic_only():
    ph = WeightParams.gegenbauer_surface(2, 0.5, 0.5, rho=1.0)
    with pytest.raises(CapabilityError):
        bases.element(ph, BasisIndex(3, 2, 0))


# ---------------------------------------------------------------------------
# generic construction
# ---------------------------------------------------------------------------


def test_generic_surface_matches_gram():
    for params in (
        WeightParams.gegenbauer_surface(2, 0.0, 0.5),
        WeightParams.gegenbauer_surface(2, 0.5, 0.5, rho=1.0),
        WeightParams.hermite_surface(2, 0.5, rho=0.5),
    ):
        x, t, w = domain.grid(params, 24)
        els = [e for n in range(5) for e in bases.build_generic_surface(params, n)]
        vals = np.stack([e(x, t) / math.sqrt(e.norm_sq) for e in els])
        gram = (vals * w) @ vals.T
        assert np.max(np.abs(gram - np.eye(len(els)))) < 1e-10, params


def test_generic_surface_parity_and_span():
    # the generic odd blocks on the hyperboloid complete the named even ones
    params = WeightParams.gegenbauer_surface(2, 0.5, 0.5, rho=1.0)
    gen = bases.build_generic_surface(params, 3)
    assert sum(1 for e in gen if e.index.parity == 1) == len(bases.degree_indices(params, 3, 1))
    named = bases.parity_basis(params, 3, 0)
    x, t, w = domain.grid(params, 24)
    ve = np.stack([e(x, t) / math.sqrt(e.norm_sq) for e in gen if e.index.parity == 0])
    vn = np.stack([e(x, t) / math.sqrt(e.norm_sq) for e in named])
    cross = (ve * w) @ vn.T
    # same span: the cross Gram is orthogonal
    assert_allclose(cross @ cross.T, np.eye(len(named)), atol=1e-10)


def test_generic_rejects_uneven_weights():
    with pytest.raises(CapabilityError):
        bases.build_generic_surface(WeightParams.jacobi_upper(2, 0.0, 1.0), 2)


# ---------------------------------------------------------------------------
# Gegenbauer -> Hermite limits
# ---------------------------------------------------------------------------


def test_limit_g_to_h_surface():
    errs = bases.limit_g_to_h_check(0.0, 2, BasisIndex(2, 0, 0), [1e2, 1e4, 1e6])
    assert errs[1] <= errs[0] / 10 and errs[2] <= errs[1] / 10


def test_limit_g_to_h_solid():
    errs = bases.limit_g_to_h_check(0.5, 2, BasisIndex(2, 0, (0, 0)), [1e2, 1e4, 1e6], mu=0.5)
    assert errs[1] <= errs[0] / 10 and errs[2] <= errs[1] / 10


def test_limit_n_equals_m_elements_coincide():
    # at n = m both elements are the same harmonic, pointwise for any gamma
    hp = WeightParams.hermite_surface(2, 0.0)
    gp = WeightParams.gegenbauer_surface(2, 0.0, 37.5)
    ix = BasisIndex(3, 3, 0)
    x, t = points_arrays(hp, 6, 9)
    assert_allclose(bases.element(gp, ix)(x, t), bases.element(hp, ix)(x, t), rtol=1e-13)
    errs = bases.limit_g_to_h_check(0.0, 2, ix, [1e2, 1e4])
    assert errs[1] <= errs[0]


def test_even_extension_zero_odd_coefficients():
    # expanding the even function t^2 produces no odd-parity coefficients
    from hyperbasis import fourier

    p = WeightParams.gegenbauer_surface(2, 0.0, 0.5)
    co = fourier.expand(lambda x, t: t * t, p, 5)
    assert co.odd_energy() < 1e-10


def test_bad_index():
    with pytest.raises(ArgumentError):
        BasisIndex(2, 3, 0)

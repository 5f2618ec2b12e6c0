import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hyperbasis import blocks, poly1d
from hyperbasis.errors import ArgumentError, CapabilityError


def _random_sphere(d, count, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(count, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# harmonics
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d,m,count", [(2, 0, 1), (3, 2, 5), (2, 4, 2), (3, 5, 11)])
def test_harmonic_counts(d, m, count):
    assert len(blocks.harmonics(d, m)) == count == blocks.harmonic_dim(d, m)


@pytest.mark.parametrize("d", [2, 3])
def test_harmonics_orthonormal(d):
    pts, w = blocks.sphere_rule(d, 14)
    els = [y for m in range(6) for y in blocks.harmonics(d, m)]
    vals = np.stack([y.on_sphere(pts) for y in els])
    gram = (vals * w) @ vals.T
    assert np.max(np.abs(gram - np.eye(len(els)))) < 1e-10


def test_harmonics_capability():
    with pytest.raises(CapabilityError):
        blocks.harmonics(5, 2)


@pytest.mark.parametrize("d", [2, 3])
def test_homogeneity(d):
    rng = np.random.default_rng(0)
    x = rng.normal(size=(6, d))
    for m in range(5):
        for y in blocks.harmonics(d, m):
            assert_allclose(y(1.7 * x), 1.7**m * y(x), rtol=1e-12)


def test_laplace_beltrami_eigencheck():
    # eigenvalue factor -m(m+d-2): d=3, m=2 gives -2*3 = -6 (the classical
    # -l(l+1) on the 2-sphere)
    assert -2 * (2 + 3 - 2) == -6
    rng = np.random.default_rng(1)
    th = rng.uniform(0, 2 * np.pi, 50)
    pts2 = np.stack([np.cos(th), np.sin(th)], axis=-1)
    y0 = blocks.harmonics(2, 0).elements[0]
    assert blocks.laplace_beltrami_eigencheck(2, 0, y0, pts2) == 0.0
    y3 = blocks.harmonics(2, 3).elements[0]
    assert blocks.laplace_beltrami_eigencheck(2, 3, y3, pts2) < 1e-5
    th3 = rng.uniform(0.4, np.pi - 0.4, 40)
    ph3 = rng.uniform(0, 2 * np.pi, 40)
    pts3 = np.stack(
        [np.sin(th3) * np.cos(ph3), np.sin(th3) * np.sin(ph3), np.cos(th3)], axis=-1
    )
    for y in blocks.harmonics(3, 2):
        assert blocks.laplace_beltrami_eigencheck(3, 2, y, pts3) < 1e-5


def test_sphere_kernel():
    xi, eta = _random_sphere(3, 2, 3)
    assert blocks.sphere_kernel(3, 0, xi, eta) == 1.0
    assert_allclose(blocks.sphere_kernel(3, 2, xi, xi), 5.0, rtol=1e-12)
    xi2, eta2 = _random_sphere(2, 2, 4)
    total = sum(y.on_sphere(xi2) * y.on_sphere(eta2) for y in blocks.harmonics(2, 3))
    assert abs(total - blocks.sphere_kernel(2, 3, xi2, eta2)) < 1e-10
    with pytest.raises(ArgumentError):
        blocks.sphere_kernel(2, 1, np.array([0.5, 0.0]), np.array([1.0, 0.0]))


@pytest.mark.parametrize("d", [2, 3])
def test_sphere_kernel_basis_independent(d):
    # identical values from a randomly rotated orthonormal basis of H_m^d
    m = 3
    hb = blocks.harmonics(d, m)
    xi, eta = _random_sphere(d, 2, 7)
    rng = np.random.default_rng(8)
    q, _ = np.linalg.qr(rng.normal(size=(len(hb), len(hb))))
    vx = np.array([y.on_sphere(xi) for y in hb])
    ve = np.array([y.on_sphere(eta) for y in hb])
    mixed = float((q @ vx) @ (q @ ve))
    assert abs(mixed - blocks.sphere_kernel(d, m, xi, eta)) < 1e-10


# ---------------------------------------------------------------------------
# ball polynomials
# ---------------------------------------------------------------------------


def test_ball_basis_counts():
    assert len(blocks.ball_basis(2, 0, 0.5)) == 1
    assert len(blocks.ball_basis(2, 3, 0.5)) == 4
    assert len(blocks.ball_basis(3, 4, 0.25)) == math.comb(4 + 2, 4)


@pytest.mark.parametrize("d,mu", [(2, 0.5), (3, 0.25)])
def test_ball_basis_orthonormal(d, mu):
    pts, w = blocks.ball_rule(d, mu, 12)
    els = [p for n in range(5) for p in blocks.ball_basis(d, n, mu)]
    vals = np.stack([p.on_ball(pts) for p in els])
    gram = (vals * w) @ vals.T
    assert np.max(np.abs(gram - np.eye(len(els)))) < 1e-10


def test_ball_kernel_routes():
    x = np.array([0.3, 0.1])
    y = np.array([-0.2, 0.4])
    assert blocks.ball_kernel(2, 0, 0.5, x, y, "sum") == pytest.approx(1.0)
    assert blocks.ball_kernel(2, 0, 0.5, x, y, "integral") == pytest.approx(1.0)
    s = blocks.ball_kernel(2, 2, 0.5, x, y, "sum")
    i = blocks.ball_kernel(2, 2, 0.5, x, y, "integral")
    assert abs(s - i) < 1e-8
    # mu = 0 on the boundary collapses the square roots
    xb = np.array([0.6, 0.8])
    yb = np.array([0.0, 1.0])
    val = blocks.ball_kernel(2, 1, 0.0, xb, yb, "integral")
    assert_allclose(val, poly1d.zn_eval(0.5, 1, float(xb @ yb)), rtol=1e-12)


def test_ball_kernel_reproduces():
    pts, w = blocks.ball_rule(2, 0.5, 14)
    x0 = np.array([0.25, -0.3])
    for p in blocks.ball_basis(2, 3, 0.5):
        k = blocks.ball_kernel(2, 3, 0.5, x0, pts, "integral")
        val = float(np.dot(w, k * p.on_ball(pts)))
        assert abs(val - p.on_ball(x0)) < 1e-8


def test_ball_diffop_residual():
    rng = np.random.default_rng(2)
    pts = rng.uniform(-0.4, 0.4, size=(30, 2))
    basis0 = blocks.ball_basis(2, 0, 0.5)
    assert blocks.ball_diffop_residual(2, 0, 0.5, basis0.elements[0].on_ball, pts) == 0.0
    for n in (1, 2, 3):
        for el in blocks.ball_basis(2, n, 0.5):
            res = blocks.ball_diffop_residual(2, n, 0.5, el.on_ball, pts)
            assert res < 1e-5, (n, el.index, res)
    with pytest.raises(ArgumentError):
        blocks.ball_diffop_residual(2, 1, 0.5, basis0.elements[0].on_ball, np.array([[1.0, 0.0]]))


def test_ball_scaled_evaluation():
    # t^m P(x/t) is a polynomial: finite at t = 0 and consistent for t > 0
    p = blocks.ball_basis(2, 3, 0.5).elements[0]
    assert np.isfinite(p.scaled(np.array([[0.0, 0.0]]), np.array([0.0]))).all()
    x = np.array([[0.2, -0.1]])
    t0 = 0.7
    assert_allclose(p.scaled(x, np.array([t0])), t0**3 * p.on_ball(x / t0), rtol=1e-12)

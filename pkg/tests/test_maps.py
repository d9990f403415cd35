import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatcw import maps
from fatcw.handle import HandleSpec, boundary_radii
from fatcw.maps import DomainError, NotInHandle

PAIRS = [(n, m) for n in range(4) for m in range(4) if n + m >= 1]


def sample(g, k, n, m, u_max=4.0):
    def radial(dim, r):
        if dim == 0:
            return np.zeros((k, 0))
        x = g.normal(size=(k, dim))
        return x / np.linalg.norm(x, axis=1, keepdims=True) * r[:, None]

    return radial(n, g.uniform(0, u_max, k)), radial(m, g.uniform(0, 1, k))


@pytest.mark.parametrize("u, v, expected", [(0.2, 0.3, 1.5), (0.0, 0.9, 1.5), (3.0, 0.0, 1.5), (2.0, 1.0, 0.5)])
def test_alpha_coef(ctx, u, v, expected):
    assert maps.alpha_coef(ctx, u, v) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("u, v, expected", [(1.0, 0.0, 1 + math.pi / 4), (0.3, 0.8, 1.0), (1.0, 1.0, 1.5)])
def test_beta_coef(ctx, u, v, expected):
    assert maps.beta_coef(ctx, u, v) == pytest.approx(expected, abs=1e-15)


def test_affine_core(ctx):
    x, y = maps.phi_map(ctx, HandleSpec(1, 1), np.array([0.2]), np.array([0.5]))
    assert (x[0], y[0]) == pytest.approx((0.3, 0.5))
    u, v = maps.theta_map(ctx, HandleSpec(1, 1), np.array([0.3]), np.array([0.5]))
    assert (u[0], v[0]) == pytest.approx((0.2, 0.5), abs=1e-14)


@given(st.floats(-3, 3), st.sampled_from([-1.0, 1.0]))
def test_unit_v_lands_on_the_boundary(ctx, u, v):
    x, y = maps.phi_map(ctx, HandleSpec(1, 1), np.array([u]), np.array([v]))
    assert abs(x[0]) + abs(y[0]) == pytest.approx(1.5 * abs(u) + 1, abs=1e-12)
    ru, rv = abs(x[0]), abs(y[0])
    assert ru - 1 + ctx.phi(2 - ru - rv) == pytest.approx(0.0, abs=1e-12)


def test_boundary_preimage_has_unit_v(ctx):
    ru, rv = boundary_radii(ctx, 0.0)
    _, v = maps.theta_map(ctx, HandleSpec(1, 1), np.array([ru]), np.array([rv]))
    assert abs(v[0]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n, m", PAIRS)
def test_round_trips(ctx, n, m):
    g = np.random.default_rng(n * 10 + m)
    spec = HandleSpec(n, m)
    u, v = sample(g, 2000, n, m)
    x, y = maps.phi_map(ctx, spec, u, v)
    u2, v2, diag = maps.theta_map(ctx, spec, x, y, diagnostics=True)
    assert np.max(np.abs(u2 - u), initial=0) <= 1e-8
    assert np.max(np.abs(v2 - v), initial=0) <= 1e-8
    if n and m:
        assert np.all(diag.jacobian_det > 0)
        assert np.all(diag.residual <= 1e-10)


def test_batch_shapes(ctx):
    spec = HandleSpec(2, 1)
    u = np.zeros((3, 4, 2)) + 0.1
    v = np.zeros((3, 4, 1)) + 0.2
    x, y = maps.phi_map(ctx, spec, u, v)
    assert x.shape == (3, 4, 2) and y.shape == (3, 4, 1)
    u2, v2 = maps.theta_map(ctx, spec, x, y)
    np.testing.assert_allclose(u2, u, atol=1e-14)


def test_phi_domain(ctx):
    with pytest.raises(DomainError):
        maps.phi_map(ctx, HandleSpec(1, 1), np.array([0.5]), np.array([1.5]))


def test_theta_rejects_outside(ctx):
    with pytest.raises(NotInHandle):
        maps.theta_map(ctx, HandleSpec(1, 1), np.array([0.5]), np.array([5.0]))


@pytest.mark.parametrize("u, v, expected", [(0.0, 0.0, 1.5)])
def test_jacobian_core(ctx, u, v, expected):
    assert maps.phi11_jacobian(ctx, u, v) == pytest.approx(expected)


def test_jacobian_symmetric_and_positive(ctx):
    a = maps.phi11_jacobian(ctx, 1.0, 0.5)
    assert a > 0 and a == pytest.approx(maps.phi11_jacobian(ctx, -1.0, 0.5))
    assert a == pytest.approx(maps.phi11_jacobian_fd(ctx, 1.0, 0.5), abs=1e-6)


@given(st.floats(-3, 3).filter(lambda u: abs(u) > 1e-3), st.floats(-0.99, 0.99))
@settings(max_examples=60)
def test_jacobian_dual_vs_fd(ctx, u, v):
    assert maps.phi11_jacobian(ctx, u, v) == pytest.approx(maps.phi11_jacobian_fd(ctx, u, v), abs=1e-6)


def test_jacobian_grid_positive(ctx):
    uu, vv = np.meshgrid(np.linspace(-3, 3, 301), np.linspace(-1, 1, 101))
    assert maps.phi11_jacobian(ctx, uu, vv).min() > 0


# -- the singular map ----------------------------------------------------------

def test_wall_images(ctx):
    x, y = maps.phi_hat_map(ctx, HandleSpec(2, 1), np.array([[0.6, 0.8]]), np.array([[1.0]]))
    np.testing.assert_allclose(x, [[0.6, 0.8]])
    np.testing.assert_allclose(y, [[1.5]])
    x, y = maps.phi_hat_map(ctx, HandleSpec(2, 1), np.array([[0.0, 1.0]]), np.array([[0.0]]))
    np.testing.assert_allclose(x, [[0.0, 1.0]])
    np.testing.assert_allclose(y, [[0.0]], atol=1e-15)


def test_wall_profile_range():
    assert maps.wall_profile(0.0) == 0.0
    assert maps.wall_profile(1.0) == pytest.approx(1.5, abs=1e-15)
    r = np.linspace(0, 1, 101)
    assert np.all(np.diff(maps.wall_profile(r)) > 0)


@pytest.mark.parametrize("v", [0.0, 0.25, 0.5, 1.0])
def test_jacobian_vanishes_on_wall(ctx, v):
    assert maps.phi_hat_jacobian_defect(ctx, v) <= 1e-6


def test_regular_off_wall(ctx):
    assert maps.phi_hat_jacobian_defect(ctx, 0.5, ru=1.2) > 1e-3


def test_phi_hat_affine_core(ctx):
    spec = HandleSpec(1, 1)
    u, v = maps.phi_hat_inverse(ctx, spec, np.array([0.3]), np.array([0.5]))
    assert (u[0], v[0]) == pytest.approx((0.2, 0.5), abs=1e-14)


@pytest.mark.parametrize("n, m", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 3)])
def test_phi_hat_round_trip_off_wall(ctx, n, m):
    g = np.random.default_rng(n + 7 * m)
    spec = HandleSpec(n, m)
    u, v = sample(g, 3000, n, m, 3.0)
    keep = np.abs(np.linalg.norm(u, axis=1) - 1) > 0.1
    x, y = maps.phi_hat_map(ctx, spec, u[keep], v[keep])
    u2, v2 = maps.phi_hat_inverse(ctx, spec, x, y)
    assert np.max(np.abs(u2 - u[keep])) <= 1e-6
    assert np.max(np.abs(v2 - v[keep])) <= 1e-6


@given(st.floats(0, 1))
@settings(max_examples=50, deadline=None)
def test_phi_hat_wall_recovery(ctx, rv):
    spec = HandleSpec(1, 1)
    x, y = maps.phi_hat_map(ctx, spec, np.array([1.0]), np.array([rv]))
    u, v = maps.phi_hat_inverse(ctx, spec, x, y)
    assert abs(u[0]) == pytest.approx(1.0, abs=1e-3)
    assert v[0] == pytest.approx(rv, abs=1e-6)


def test_flat_collar_maps_into_wall(ctx):
    # just inside the wall the image is within rounding of |x| = 1
    x, _ = maps.phi_hat_map(ctx, HandleSpec(1, 1), np.array([0.995]), np.array([0.3]))
    assert abs(x[0]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("kind", ["phi", "phi_hat"])
def test_invert_radial_diagnostics(ctx, kind):
    ru, rv, iters, fallback, residual = maps.invert_radial(ctx, np.array([2.0, 0.1]), np.array([0.5, 0.2]), kind)
    assert ru.shape == (2,) and residual.max() <= 1e-12
    assert iters.dtype.kind == "i" and fallback.dtype == bool

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geoft import (AxisOutOfRange, Direction, GaussianFunction, GridSpec, IncommensurateWave, PlaneWave, Side,
                   TrigPolynomial, b_laplacian, derivative_transform_identity, geometric_pair, gradient,
                   laplacian_equivariance, laplacian_transform_identity, partial_derivative,
                   plane_wave_eigencheck, sample, sample_group_element, sobolev_norm_identity)
from geoft.calculus import laplacian_symbol
from geoft.fields import random_gaussian

J = np.array([[0.0, 1.0], [-1.0, 0.0]])
P2 = geometric_pair([[2.0, 1.0], [0.0, 1.0]])
# left transform of the derivative of exp(-pi x^2) for M = [2], frozen from scipy quadrature
FL_DERIV_M2 = {0.1: 1.10824252287152j, 0.5: 0.2715210563005933j, 1.0: 4.382323650720804e-05j}
TORUS = GridSpec.torus(2, 16)


def test_constant_field_has_zero_derivative():
    f = sample(PlaneWave((0.0, 0.0), 3.0), TORUS)
    for axis in range(2):
        assert np.max(np.abs(partial_derivative(f, axis).values)) == 0.0


@pytest.mark.parametrize("axis", [0, 1])
def test_plane_wave_derivative(axis):
    k = (2.0, -3.0)
    f = sample(PlaneWave(k), TORUS)
    np.testing.assert_allclose(partial_derivative(f, axis).values, 2j * np.pi * k[axis] * f.values, atol=1e-12)


def test_even_gaussian_derivative_vanishes_at_origin():
    grid = GridSpec.symmetric(1, 128, 6.0)
    d = partial_derivative(sample(GaussianFunction([[1.0]]), grid), 0)
    assert abs(d.flat[64]) <= 1e-8


def test_axis_out_of_range():
    with pytest.raises(AxisOutOfRange):
        partial_derivative(sample(PlaneWave((0.0, 0.0)), TORUS), 2)


def test_gradient_identity_structure_is_classical(rng):
    f = sample(TrigPolynomial.random(rng, 2, 3, (1.0, 1.0)), TORUS)
    for a, b in zip(gradient(f, geometric_pair(np.eye(2)), "left"), gradient(f)):
        np.testing.assert_array_equal(a.values, b.values)


def test_left_right_gradient_relation(rng):
    f = sample(TrigPolynomial.random(rng, 2, 3, (1.0, 1.0)), TORUS)
    left = np.stack([g.values for g in gradient(f, P2, "left")])
    right = np.stack([g.values for g in gradient(f, P2, "right")])
    via = np.tensordot(P2.B.T @ np.linalg.inv(P2.B), right, axes=1)
    np.testing.assert_allclose(left, via, atol=1e-10 * np.abs(left).max())


def test_gradient_of_linear_function_interior():
    grid = GridSpec.symmetric(2, 12, 2.0)
    a = np.array([0.7, -1.3])
    f = sample(lambda x: x @ a + 0j, grid)
    grads = gradient(f, P2, "left")
    expected = P2.B.T @ a
    for g, e in zip(grads, expected):
        np.testing.assert_allclose(g.values[2:-2, 2:-2], e, atol=1e-12)


def test_laplacian_power_zero_is_identity(rng):
    f = sample(TrigPolynomial.random(rng, 2, 3, (1.0, 1.0)), TORUS)
    assert b_laplacian(f, P2, 0) is f


@given(st.integers(0, 10_000))
def test_skew_laplacian_annihilates(seed):
    r = np.random.default_rng(seed)
    f = sample(TrigPolynomial.random(r, 2, 4, (1.0, 1.0)), TORUS)
    assert np.max(np.abs(b_laplacian(f, geometric_pair(J)).values)) <= 1e-10


def test_identity_laplacian_on_plane_wave():
    k = np.array([1.0, 2.0])
    f = sample(PlaneWave(tuple(k)), TORUS)
    np.testing.assert_allclose(b_laplacian(f, geometric_pair(np.eye(2))).values,
                               -4 * np.pi**2 * (k @ k) * f.values, atol=1e-10)


def test_spectral_symbol_on_plane_waves():
    for k in [(1.0, 0.0), (2.0, -3.0), (-5.0, 4.0)]:
        f = sample(PlaneWave(k), TORUS)
        kk = np.array(k)
        expected = -4 * np.pi**2 * kk @ P2.B @ kk
        np.testing.assert_allclose(b_laplacian(f, P2).values, expected * f.values, atol=1e-12 * abs(expected))
    assert laplacian_symbol(TORUS, P2)[0, 0] == 0.0


def test_truncated_laplacian_is_fourth_order():
    from geoft import PolyGaussian
    g = GaussianFunction([[1.0, 0.2], [0.2, 0.9]])
    exact_lap = PolyGaussian.from_gaussian(g).b_laplacian(P2.B, 1)
    errors = []
    for n in (96, 192):
        grid = GridSpec.symmetric(2, n, 5.0)
        exact = exact_lap(grid.points()).reshape(grid.shape)
        errors.append(np.max(np.abs(b_laplacian(sample(g, grid), P2).values - exact)))
    assert errors[0] / errors[1] > 12.0


@pytest.mark.parametrize("pair, xi", [
    (geometric_pair(np.eye(2)), [0.0, 0.0]),
    (geometric_pair(np.eye(2)), [1.0, 0.0]),
    (geometric_pair(J), [2.0, 1.0]),
    (P2, [1.0, -1.0]),
])
@pytest.mark.parametrize("orientation", ["x_first", "xi_first"])
@pytest.mark.parametrize("sign", [1, -1])
def test_plane_wave_eigencheck(pair, xi, orientation, sign):
    rep = plane_wave_eigencheck(pair, xi, orientation, sign)
    assert rep.residual <= 1e-10 * max(1.0, abs(rep.detail["eigenvalue"]))


def test_skew_plane_wave_eigenvalue_is_zero():
    assert plane_wave_eigencheck(geometric_pair(J), [1.0, 3.0]).detail["eigenvalue"] == 0.0


def test_incommensurate_wave():
    with pytest.raises(IncommensurateWave):
        plane_wave_eigencheck(geometric_pair(np.eye(2)), [0.5, 0.0])


@pytest.mark.parametrize("xi", sorted(FL_DERIV_M2))
def test_derivative_transform_m2_frozen(xi):
    from geoft import gaussian_geometric_ft
    closed = gaussian_geometric_ft(GaussianFunction([[1.0]]), geometric_pair([[2.0]]), Side.LEFT)
    assert 2j * np.pi * 2 * xi * closed([xi]) == pytest.approx(FL_DERIV_M2[xi], rel=1e-11)
    rep = derivative_transform_identity(GaussianFunction([[1.0]]), geometric_pair([[2.0]]), Side.LEFT,
                                        probes=[[xi]])
    assert rep.residual <= 1e-8
    assert rep.lhs == pytest.approx(abs(FL_DERIV_M2[xi]), rel=1e-8)


@pytest.mark.parametrize("side", list(Side))
@pytest.mark.parametrize("direction", list(Direction))
@pytest.mark.parametrize("inverse", [False, True])
def test_derivative_exchange_2d(side, direction, inverse, rng):
    g = random_gaussian(rng, 2)
    for axis in (0, 1):
        rep = derivative_transform_identity(g, P2, side, direction, axis, 1, inverse=inverse)
        assert rep.residual <= 1e-8


def test_derivative_at_zero_frequency_odd_integrand():
    rep = derivative_transform_identity(GaussianFunction([[1.0]]), geometric_pair([[2.0]]), Side.LEFT,
                                        probes=[[0.0]])
    assert rep.lhs <= 1e-14 and rep.rhs == 0.0


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("side", list(Side))
def test_laplacian_transform_identity(m, side):
    g = GaussianFunction([[1.0, 0.3], [0.3, 0.8]], c=[0.2, -0.1])
    rep = laplacian_transform_identity(g, P2, m, side, probes=[[0.3, -0.2]])
    assert rep.residual <= 1e-7


def test_laplacian_identity_at_zero_frequency():
    rep = laplacian_transform_identity(GaussianFunction.standard(2), geometric_pair(np.eye(2)), 1,
                                       probes=[[0.0, 0.0]])
    assert rep.rhs == 0.0 and rep.lhs <= 1e-12


def test_laplacian_identity_periodic(rng):
    f = sample(TrigPolynomial.random(rng, 2, 3, (1.0, 1.0)), TORUS)
    for side in Side:
        assert laplacian_transform_identity(f, P2, 2, side).residual <= 1e-12


def test_sobolev_identity_standard_gaussian():
    rep = sobolev_norm_identity(GaussianFunction.standard(2), geometric_pair(np.eye(2)), 1)
    assert rep.residual <= 1e-6


def test_sobolev_m0_is_parseval():
    g = GaussianFunction.standard(1)
    rep = sobolev_norm_identity(g, geometric_pair([[2.0]]), 0)
    assert rep.lhs == pytest.approx(g.l2_norm_sq(), rel=1e-10)
    assert rep.residual <= 1e-10


def test_sobolev_zero_function():
    rep = sobolev_norm_identity(GaussianFunction([[1.0]], amp=0.0), geometric_pair([[2.0]]), 1)
    assert rep.lhs == rep.rhs == 0.0


@pytest.mark.parametrize("m", [1, 2])
def test_laplacian_equivariance(m, rng):
    pair = geometric_pair([[1.5, 0.4], [0.4, 1.0]])
    A = sample_group_element(pair, rng)
    rep = laplacian_equivariance(random_gaussian(rng, 2), pair, A, m)
    assert rep.residual <= 1e-7

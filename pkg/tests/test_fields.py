import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geoft import (DimensionMismatch, FieldOp, GaussianFunction, GridSpec, NotGridRealizable, PlaneWave,
                   SampledField, Side, field_map, gaussian_geometric_ft, gaussian_inverse_geometric_ft,
                   geometric_pair, opposite, sample, tau_action)
from geoft.fields import random_gaussian

import oracles

J = np.array([[0.0, 1.0], [-1.0, 0.0]])

# classical transform of exp(-2 pi x^2), frozen from scipy quadrature
FT_SHAPE2 = {0.0: 0.7071067811865476, 0.3: 0.6138864764581751, 0.7: 0.32750112447231533}
# left transform of exp(-pi x^2) for M = [2], frozen from scipy quadrature
FL_M2 = {0.1: 0.8819113782981762, 0.5: 0.043213918263772244, 1.0: 3.487342356201241e-06}


@pytest.mark.parametrize("g, x, expected", [
    (GaussianFunction.standard(2), [0.0, 0.0], 1.0),
    (GaussianFunction([[1.0]]), [1.0], 0.04321391826377226),
    (GaussianFunction(np.eye(2), c=[0.3, -1.0], amp=2 - 1j), [0.3, -1.0], 2 - 1j),
])
def test_gaussian_eval(g, x, expected):
    assert g(x) == pytest.approx(expected, rel=1e-15)


def test_gaussian_eval_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        GaussianFunction.standard(2)([1.0, 2.0, 3.0])


def test_standard_gaussian_is_self_dual():
    ft = GaussianFunction.standard(2).classical_ft()
    x = np.random.default_rng(0).standard_normal((5, 2))
    np.testing.assert_allclose(ft(x), GaussianFunction.standard(2)(x), rtol=1e-14)


@pytest.mark.parametrize("xi", sorted(FT_SHAPE2))
def test_classical_ft_against_quadrature(xi):
    ft = GaussianFunction([[2.0]]).classical_ft()
    assert ft([xi]) == pytest.approx(FT_SHAPE2[xi], rel=1e-12)
    np.testing.assert_allclose(ft.A, [[0.5]])


def test_classical_ft_total_mass():
    assert GaussianFunction([[1.0]], c=[1.0]).classical_ft()([0.0]) == pytest.approx(1.0, rel=1e-15)


def test_classical_ft_general_against_scipy(rng):
    g = GaussianFunction([[1.3]], c=[0.4], amp=0.7 + 0.2j, w=[0.25])
    ref = oracles.gaussian([[1.3]], [0.4], 0.7 + 0.2j, [0.25])
    for xi in (-0.6, 0.0, 0.9):
        expected = oracles.quad_complex_1d(lambda t: np.exp(-2j * np.pi * t * xi) * ref([t])[0])
        assert g.classical_ft()([xi]) == pytest.approx(expected, abs=1e-12)


@given(st.integers(0, 10_000))
def test_double_transform_negates_center_and_modulation(seed):
    g = random_gaussian(np.random.default_rng(seed), 2)
    twice = g.classical_ft().classical_ft()
    np.testing.assert_allclose(twice.A, g.A, atol=1e-12)
    np.testing.assert_allclose(twice.c, -g.c, atol=1e-12)
    np.testing.assert_allclose(twice.w, -g.w, atol=1e-12)
    assert abs(twice.amp - g.amp) <= 1e-12 * abs(g.amp)


@given(st.integers(0, 10_000))
def test_tau_is_a_group_action(seed):
    r = np.random.default_rng(seed)
    g = random_gaussian(r, 2)
    A1, A2 = r.standard_normal((2, 2)) + 2 * np.eye(2), r.standard_normal((2, 2)) + 2 * np.eye(2)
    lhs = tau_action(g, A1 @ A2)
    rhs = tau_action(tau_action(g, A2), A1)
    np.testing.assert_allclose(lhs.A, rhs.A, atol=1e-12 * np.abs(lhs.A).max())
    np.testing.assert_allclose(lhs.c, rhs.c, atol=1e-12)
    np.testing.assert_allclose(lhs.w, rhs.w, atol=1e-12)


def test_tau_action_examples():
    g = GaussianFunction.standard(2)
    assert tau_action(g, np.eye(2)).A.tolist() == g.A.tolist()
    doubled = tau_action(g, 2 * np.eye(2))
    np.testing.assert_allclose(doubled.A, np.eye(2) / 4)
    assert doubled([1.0, 0.0]) == pytest.approx(g([0.5, 0.0]))
    c, s = np.cos(1.1), np.sin(1.1)
    np.testing.assert_allclose(tau_action(g, [[c, -s], [s, c]]).A, np.eye(2), atol=1e-15)


def test_tau_action_singular():
    from geoft import SingularMatrix
    with pytest.raises(SingularMatrix):
        tau_action(GaussianFunction.standard(2), [[1.0, 1.0], [1.0, 1.0]])


@pytest.mark.parametrize("seed", range(4))
def test_l2_norm_matches_quadrature(seed):
    g = random_gaussian(np.random.default_rng(seed), 2)
    grid = g.default_grid(width=8.0)
    quad = grid.cell_volume * np.sum(np.abs(g(grid.points())) ** 2)
    assert quad == pytest.approx(g.l2_norm_sq(), rel=1e-8)


def test_sample_example():
    f = sample(GaussianFunction([[1.0]]), GridSpec((4,), (0.0,), (0.25,)))
    expected = np.exp(-np.pi * np.array([0.0, 1 / 16, 1 / 4, 9 / 16]))
    np.testing.assert_allclose(f.flat.real, expected, rtol=1e-15)


def test_sample_plane_waves():
    grid = GridSpec.torus(2, 8)
    np.testing.assert_array_equal(sample(PlaneWave((0.0, 0.0)), grid).flat, np.ones(64))
    wave = sample(PlaneWave((1.0, 0.0)), grid)
    np.testing.assert_allclose(wave.flat, np.exp(2j * np.pi * grid.points()[:, 0]), atol=1e-15)
    with pytest.raises(DimensionMismatch):
        sample(PlaneWave((1.0,)), grid)


def test_field_map_conjugate_and_negate():
    grid = GridSpec.symmetric(2, 16, 3.0)
    real = sample(GaussianFunction([[1.0, 0.2], [0.2, 2.0]]), grid).with_values(
        sample(GaussianFunction([[1.0, 0.2], [0.2, 2.0]]), grid).values.real)
    np.testing.assert_array_equal(field_map(real, FieldOp.CONJUGATE).values, real.values)
    # the sample at -x for the first index lies outside [-3, 3) and reads zero
    neg = field_map(real, FieldOp.NEGATE)
    np.testing.assert_array_equal(neg.values[1:, 1:], real.values[1:, 1:])


def test_dilate_analytic_then_sample():
    g = GaussianFunction([[1.5]], c=[0.1])
    grid = GridSpec.symmetric(1, 64, 4.0)
    lhs = sample(field_map(g, FieldOp.DILATE, 2.0), grid)
    rhs = sample(GaussianFunction([[6.0]], c=[0.05]), grid)
    for idx in (10, 32, 40):
        assert lhs.flat[idx] == pytest.approx(rhs.flat[idx], rel=1e-14)


def test_grid_translate_and_dilate():
    grid = GridSpec.torus(1, 16)
    f = sample(PlaneWave((1.0,)), grid)
    shifted = field_map(f, FieldOp.TRANSLATE, [2 / 16])
    np.testing.assert_allclose(shifted.flat, f.flat * np.exp(2j * np.pi * 2 / 16), atol=1e-15)
    np.testing.assert_allclose(field_map(f, FieldOp.DILATE, 3).flat, sample(PlaneWave((3.0,)), grid).flat,
                               atol=1e-14)
    with pytest.raises(NotGridRealizable):
        field_map(f, FieldOp.TRANSLATE, [0.01])
    with pytest.raises(NotGridRealizable):
        field_map(f, FieldOp.DILATE, 1.5)


def test_json_round_trips():
    g = GaussianFunction([[2.0, 0.1], [0.1, 1.0]], c=[1.0, 0.0], amp=0.5 - 0.5j, w=[0.0, 0.3])
    back = GaussianFunction.from_json(g.to_json())
    np.testing.assert_array_equal(back.A, g.A)
    assert back.amp == g.amp
    f = sample(g, GridSpec.symmetric(2, 4, 1.0))
    again = SampledField.from_json(f.to_json())
    assert again.grid == f.grid
    np.testing.assert_array_equal(again.values, f.values)


def test_grid_json_rejects_wrong_dim():
    data = GridSpec.torus(2, 4).to_json()
    data["dim"] = 3
    with pytest.raises(DimensionMismatch):
        GridSpec.from_json(data)


@pytest.mark.parametrize("xi", sorted(FL_M2))
def test_geometric_ft_closed_form_against_quadrature(xi):
    ft = gaussian_geometric_ft(GaussianFunction([[1.0]]), geometric_pair([[2.0]]), Side.LEFT)
    assert ft([xi]) == pytest.approx(FL_M2[xi], rel=1e-11)


def test_geometric_ft_identity_pair_is_classical(rng):
    g = random_gaussian(rng, 2)
    xi = rng.standard_normal((6, 2))
    for side in Side:
        np.testing.assert_allclose(gaussian_geometric_ft(g, geometric_pair(np.eye(2)), side)(xi),
                                   g.classical_ft()(xi), rtol=1e-13)


def test_skew_left_equals_right_of_opposite(rng):
    g = random_gaussian(rng, 2)
    p = geometric_pair(J)
    xi = rng.standard_normal((6, 2))
    np.testing.assert_allclose(gaussian_geometric_ft(g, p, Side.LEFT)(xi),
                               gaussian_geometric_ft(g, opposite(p), Side.RIGHT)(xi), rtol=1e-14)


@pytest.mark.parametrize("side", ["left", "right"])
def test_closed_forms_against_riemann_oracle(side):
    M = [[2.0, 1.0], [0.0, 1.0]]
    g = GaussianFunction([[1.0, 0.3], [0.3, 0.8]], c=[0.2, -0.1])
    ref = oracles.gaussian([[1.0, 0.3], [0.3, 0.8]], c=[0.2, -0.1])
    xi = np.array([[0.3, -0.2], [0.5, 0.4]])
    p = geometric_pair(M)
    fwd = oracles.riemann_transform(ref, M, side, xi, half=7, n_points=200)
    inv = oracles.riemann_transform(ref, M, side, xi, half=7, n_points=200, inverse=True)
    np.testing.assert_allclose(gaussian_geometric_ft(g, p, side)(xi), fwd, rtol=1e-12)
    np.testing.assert_allclose(gaussian_inverse_geometric_ft(g, p, side)(xi), inv, rtol=1e-12)

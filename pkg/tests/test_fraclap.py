import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geoft import (FracCheck, FracParams, GaussianFunction, GridSpec, NotPeriodic, NotPositiveDefinite,
                   ParamOutOfRange, PlaneWave, TrigPolynomial, b_laplacian, frac_laplacian, frac_property_check,
                   geometric_pair, multiplier, path_agreement, sample, sample_group_element)
from geoft.fraclap import Path

M0 = geometric_pair([[2.0, 1.0], [0.0, 1.0]])
SPD = geometric_pair([[1.5, 0.3], [-0.1, 0.8]])
TORUS = GridSpec.torus(2, 16)


def _field(rng, dim=2, n=16, real=False):
    grid = GridSpec.torus(dim, n)
    return sample(TrigPolynomial.random(rng, dim, 4, grid.periods, real=real), grid)


@pytest.mark.parametrize("pair, s, xi, expected", [
    (M0, 0.3, [0.0, 0.0], 0.0),
    (geometric_pair(np.eye(2)), 0.5, [1.0, 0.0], 2 * np.pi),
    (M0, 0.3, [1.0, 0.0], (4 * np.pi**2 * 2) ** 0.3),
])
def test_multiplier_examples(pair, s, xi, expected):
    assert multiplier(FracParams(s, pair), xi) == pytest.approx(expected, rel=1e-15, abs=0.0)


@given(st.floats(0.05, 0.95), st.floats(0.1, 10.0), st.integers(0, 1000))
def test_multiplier_homogeneity(s, lam, seed):
    xi = np.random.default_rng(seed).standard_normal(2)
    p = FracParams(s, M0)
    assert multiplier(p, lam * xi) == pytest.approx(lam ** (2 * s) * multiplier(p, xi), rel=1e-12)


def test_multiplier_positive_away_from_zero(rng):
    assert np.all(multiplier(FracParams(0.4, M0), rng.standard_normal((50, 2))) > 0)


@pytest.mark.parametrize("path", list(Path))
def test_constant_field_maps_to_zero(path):
    f = sample(PlaneWave((0.0, 0.0), 2.0), TORUS)
    assert np.max(np.abs(frac_laplacian(f, FracParams(0.5, M0), path).values)) <= 1e-12


@pytest.mark.parametrize("path", list(Path))
@pytest.mark.parametrize("k", [(1.0, 0.0), (2.0, -3.0)])
def test_plane_wave_is_scaled(path, k):
    f = sample(PlaneWave(k), TORUS)
    kk = np.array(k)
    factor = (4 * np.pi**2 * kk @ M0.B @ kk) ** 0.3
    out = frac_laplacian(f, FracParams(0.3, M0), path)
    np.testing.assert_allclose(out.values, factor * f.values, atol=1e-12 * factor)


def test_half_power_twice_is_laplacian(rng):
    f = _field(rng)
    p = FracParams(0.5, geometric_pair(np.eye(2)))
    twice = frac_laplacian(frac_laplacian(f, p), p)
    lap = b_laplacian(f, geometric_pair(np.eye(2)))
    np.testing.assert_allclose(twice.values, -lap.values, atol=1e-12 * np.abs(lap.values).max())


@pytest.mark.parametrize("dim", [1, 2])
@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_paths_agree(dim, s, rng):
    pair = geometric_pair([[1.7]]) if dim == 1 else SPD
    for _ in range(3):
        assert path_agreement(_field(rng, dim), FracParams(s, pair)).residual <= 1e-12


def test_not_periodic():
    f = sample(GaussianFunction.standard(2), GridSpec.symmetric(2, 8, 2.0))
    with pytest.raises(NotPeriodic):
        frac_laplacian(f, FracParams(0.5, M0))


@pytest.mark.parametrize("s", [0.0, 1.0, -0.2, 1.5])
def test_s_out_of_range(s):
    with pytest.raises(ParamOutOfRange):
        FracParams(s, M0)


def test_indefinite_structure():
    with pytest.raises(NotPositiveDefinite):
        FracParams(0.5, geometric_pair([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(NotPositiveDefinite):
        FracParams(0.5, geometric_pair([[0.0, 1.0], [-1.0, 0.0]]))


def test_semigroup(rng):
    assert frac_property_check("semigroup", FracParams(0.3, M0), _field(rng), t=0.4).residual <= 1e-12


def test_semigroup_requires_sum_below_one(rng):
    with pytest.raises(ParamOutOfRange):
        frac_property_check("semigroup", FracParams(0.6, M0), _field(rng), t=0.4)


def test_linearity(rng):
    rep = frac_property_check(FracCheck.LINEARITY, FracParams(0.4, M0), _field(rng), _field(rng))
    assert rep.residual <= 1e-13


def test_scaling_plane_wave():
    f = sample(PlaneWave((1.0, 0.0)), TORUS)
    assert frac_property_check("scaling", FracParams(0.3, M0), f, lam=2).residual <= 1e-12


def test_scaling_needs_integer(rng):
    with pytest.raises(ParamOutOfRange):
        frac_property_check("scaling", FracParams(0.3, M0), _field(rng), lam=1.5)


@pytest.mark.parametrize("check", ["derivative_commute", "translation", "psd", "paths"])
def test_grid_properties(check, rng):
    assert frac_property_check(check, FracParams(0.35, SPD), _field(rng)).residual <= 1e-12


def test_integration_by_parts(rng):
    p = FracParams(0.45, M0)
    rep = frac_property_check("integration_by_parts", p, _field(rng, real=True), _field(rng, real=True))
    assert rep.residual <= 1e-11


@pytest.mark.parametrize("side", ["left", "right"])
def test_l2_norm(side, rng):
    rep = frac_property_check("l2_norm", FracParams(0.6, SPD), _field(rng), side=side)
    assert rep.residual <= 1e-12


def test_equivariance(rng):
    p = FracParams(0.4, SPD)
    A = sample_group_element(SPD, rng)
    g = GaussianFunction([[1.0, 0.1], [0.1, 1.2]], c=[0.1, 0.0])
    rep = frac_property_check("equivariance", p, g, A=A, points=rng.uniform(-0.5, 0.5, (4, 2)))
    assert rep.residual <= 1e-8

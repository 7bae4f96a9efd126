import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geoft import (GaussianFunction, Lattice, PoissonForm, RadiusTooLarge, SingularMatrix, TailBoundViolated,
                   enumerate_points, geometric_pair, poisson_check)
from geoft.fields import random_gaussian
from geoft.forms import canonical_pair
from geoft.lattice import lattices_from_structure, structure_from_lattice

import oracles

THETA3 = 1.0864348112133082
THETA4 = 0.9135791381561169
J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def test_frozen_theta_values_match_oracle():
    assert oracles.theta3_at_pi() == pytest.approx(THETA3, rel=1e-15)
    assert oracles.theta4_at_pi() == pytest.approx(THETA4, rel=1e-15)


def test_integer_lattice_at_zero():
    rep = poisson_check(GaussianFunction([[1.0]]), Lattice.integer(1), [0.0], radius_space=6.0, radius_freq=6.0)
    assert rep.abs_gap <= 1e-12
    assert rep.lhs.real == pytest.approx(THETA3, abs=1e-14)


def test_integer_lattice_half_shift():
    rep = poisson_check(GaussianFunction([[1.0]]), Lattice.integer(1), [0.5])
    assert rep.abs_gap <= 1e-12
    assert rep.rhs.real == pytest.approx(THETA4, abs=1e-14)
    # lhs sums over the half-integers, which give theta2
    lhs = sum(np.exp(-np.pi * (k + 0.5) ** 2) for k in range(-10, 10))
    assert rep.lhs.real == pytest.approx(lhs, abs=1e-15)


def test_widely_spread_lattice():
    g = GaussianFunction([[1.0]], c=[0.3])
    rep = poisson_check(g, Lattice([[10.0]]), [0.1])
    assert rep.abs_gap <= 1e-12
    assert rep.lhs.real == pytest.approx(g([0.1]).real, abs=1e-14)


def test_radius_too_small_raises():
    with pytest.raises(TailBoundViolated):
        poisson_check(GaussianFunction([[1.0]]), Lattice.integer(1), [0.5], radius_space=1.0)


FORMS = list(PoissonForm)


@pytest.mark.parametrize("form", FORMS, ids=[f.value for f in FORMS])
@pytest.mark.parametrize("n", [1, 2])
def test_every_form_on_random_cases(form, n, rng):
    for _ in range(10):
        G = rng.standard_normal((n, n)) + 1.5 * np.eye(n)
        if abs(np.linalg.det(G)) < 0.3:
            continue
        rep = poisson_check(random_gaussian(rng, n), Lattice(G), rng.uniform(-1, 1, n), form)
        assert rep.abs_gap <= 1e-10


@pytest.mark.parametrize("form", ["LatticeLeft", "LatticeRight", "InverseLeft", "InverseRight"])
def test_pair_forms_with_explicit_structure(form, rng):
    pair = geometric_pair([[2.0, 1.0], [0.0, 1.0]])
    rep = poisson_check(random_gaussian(rng, 2), Lattice.integer(2), [0.2, -0.4], form, pair=pair)
    assert rep.abs_gap <= 1e-10


def test_classical_matches_left_form_for_canonical_structure(rng):
    g = random_gaussian(rng, 2)
    x = [0.3, -0.7]
    a = poisson_check(g, Lattice.integer(2), x, PoissonForm.CLASSICAL)
    b = poisson_check(g, Lattice.integer(2), x, PoissonForm.LATTICE_LEFT, pair=canonical_pair(2))
    assert a.lhs == b.lhs
    assert abs(a.rhs - b.rhs) <= 1e-15 * abs(a.rhs)


def test_zero_shift_corollary_sum(rng):
    G = np.array([[1.0, 0.4], [-0.2, 0.9]])
    g = random_gaussian(rng, 2)
    rep = poisson_check(g, Lattice(G), None, PoissonForm.LEFT_B)
    assert rep.abs_gap <= 1e-10
    pts = enumerate_points(Lattice(G), rep.radii[0], g.c)
    assert rep.lhs == pytest.approx(complex(np.sum(g(pts))), abs=1e-13)


@given(st.integers(0, 10_000))
def test_dual_determinant(seed):
    G = np.random.default_rng(seed).standard_normal((3, 3)) + 2 * np.eye(3)
    L = Lattice(G)
    assert L.dual().det * L.det == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("G, radius, expected", [
    ([[1.0]], 2.5, [-2, -1, 0, 1, 2]),
    ([[2.0]], 3.0, [-2, 0, 2]),
])
def test_enumerate_points_1d(G, radius, expected):
    np.testing.assert_array_equal(enumerate_points(Lattice(G), radius)[:, 0], expected)


def test_enumerate_points_against_brute_force():
    G = np.array([[1.0, 1.0], [0.0, 1.0]])
    got = {tuple(np.round(p, 12)) for p in enumerate_points(Lattice(G), 1.1)}
    expected = {tuple(p) for p in oracles.brute_lattice_points(G, 1.1, 5)}
    assert got == expected == {(-1.0, 0.0), (0.0, -1.0), (0.0, 0.0), (0.0, 1.0), (1.0, 0.0)}


@given(st.integers(0, 10_000), st.floats(0.5, 3.0))
def test_enumerate_points_random_against_brute_force(seed, radius):
    G = np.random.default_rng(seed).uniform(-1, 1, (2, 2)) + np.eye(2)
    if abs(np.linalg.det(G)) < 0.2:
        return
    got = {tuple(np.round(p, 9)) for p in enumerate_points(Lattice(G), radius)}
    box = int(np.ceil(radius * np.linalg.norm(np.linalg.inv(G), 2))) + 2
    expected = {tuple(np.round(p, 9)) for p in oracles.brute_lattice_points(G, radius, box)}
    assert got == expected


def test_enumerate_points_cap():
    with pytest.raises(RadiusTooLarge):
        enumerate_points(Lattice(np.eye(3) * 1e-3), 10.0)


def test_singular_lattice():
    with pytest.raises(SingularMatrix):
        Lattice([[1.0, 2.0], [2.0, 4.0]])


@pytest.mark.parametrize("G, M", [
    (np.eye(2), np.eye(2)),
    ([[2.0]], [[0.5]]),
    ([[1.0, 1.0], [0.0, 1.0]], [[1.0, -1.0], [0.0, 1.0]]),
])
def test_structure_from_lattice(G, M):
    pair = structure_from_lattice(G)
    np.testing.assert_allclose(pair.M, M, atol=1e-15)
    np.testing.assert_allclose(pair.M @ np.asarray(G), np.eye(len(M)), atol=1e-15)
    assert pair.det_b == pytest.approx(1.0 / np.linalg.det(G))


@pytest.mark.parametrize("M", [[[2.0, 0.5], [0.5, 1.0]], J])
def test_left_and_right_lattices_coincide_for_symmetric_or_skew(M):
    left, right = lattices_from_structure(geometric_pair(M))
    np.testing.assert_allclose(np.abs(left.generator), np.abs(right.generator), atol=1e-15)
    assert left.det == pytest.approx(right.det)


def test_lattices_from_structure_example():
    pair = geometric_pair([[2.0, 1.0], [0.0, 1.0]])
    left, right = lattices_from_structure(pair)
    np.testing.assert_allclose(left.generator, [[0.5, -0.5], [0.0, 1.0]], atol=1e-15)
    np.testing.assert_allclose(right.generator, left.generator.T)
    assert left.det == pytest.approx(1.0 / abs(pair.det_b))


def test_lattice_json_round_trip():
    L = Lattice([[1.0, 0.3], [0.0, 2.0]])
    np.testing.assert_array_equal(Lattice.from_json(L.to_json()).generator, L.generator)

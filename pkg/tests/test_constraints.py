import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drsub.constraints import Box, Polytope, constraint_from_dict, simplex_max
from drsub.errors import DimensionMismatch, MalformedInput, NegativeCap
from drsub.verify import vertex_enumeration

SUM1 = Polytope([[1.0, 1.0]], [1.0], [1.0, 1.0])


def random_polytope(rng, n, m):
    A = rng.random((m, n)) * (rng.random((m, n)) < 0.8)
    b = 0.2 + rng.random(m)
    return A, b, 0.2 + rng.random(n)


def test_box_lmo():
    np.testing.assert_array_equal(Box([0, 0], [1, 1]).lmo([1, -2]), [1, 0])


def test_polytope_lmo_examples():
    np.testing.assert_array_equal(SUM1.lmo([1, 3]), [0, 1])
    np.testing.assert_array_equal(SUM1.lmo([-1, -1]), [0, 0])


def test_lmo_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        SUM1.lmo([1, 2, 3])


def test_shrunken_lmo_examples():
    v = SUM1.lmo_shrunken([1, 1], [0.5, 0.2])
    np.testing.assert_allclose(v, [0.5, 0.2], atol=1e-12)
    assert v.sum() == pytest.approx(0.7)
    np.testing.assert_array_equal(SUM1.lmo_shrunken([1, 1], [0, 0]), [0, 0])
    np.testing.assert_array_equal(SUM1.lmo_shrunken([-1, -3], [1, 1]), [0, 0])


def test_negative_cap():
    with pytest.raises(NegativeCap):
        SUM1.lmo_shrunken([1, 1], [-0.1, 1])


def test_simplex_tie_breaks_to_lowest_index():
    sol = simplex_max([[1, 1]], [1], [1, 1], [1, 1])
    np.testing.assert_array_equal(sol.vertex, [1, 0])
    assert sol.value == 1 and sol.status == "optimal"


def test_simplex_zero_objective():
    sol = simplex_max([[1, 2]], [1], [1, 1], [0, 0])
    np.testing.assert_array_equal(sol.vertex, [0, 0])
    assert sol.value == 0


@pytest.mark.parametrize("A,b,ubar", [
    ([[-1, 1]], [1], [1, 1]),
    ([[1, 1]], [-1], [1, 1]),
    ([[1, 1]], [1], [-1, 1]),
    ([[1, 1]], [1, 2], [1, 1]),
    ([[1, np.nan]], [1], [1, 1]),
])
def test_simplex_rejects_malformed(A, b, ubar):
    with pytest.raises(MalformedInput):
        simplex_max(A, b, ubar, [1, 1])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_simplex_matches_vertex_enumeration(n, m, seed):
    rng = np.random.default_rng(seed)
    A, b, ubar = random_polytope(rng, n, m)
    g = rng.normal(size=n)
    sol = simplex_max(A, b, ubar, g)
    _, best = vertex_enumeration(A, b, ubar, g)
    assert sol.value == pytest.approx(best, abs=1e-8)
    assert Polytope(A, b, ubar).contains(sol.vertex, 1e-9)
    assert sol.value == pytest.approx(float(g @ sol.vertex), abs=1e-12)


def test_simplex_deterministic():
    rng = np.random.default_rng(5)
    A, b, ubar = random_polytope(rng, 5, 4)
    g = rng.integers(-2, 3, size=5).astype(float)  # integer costs invite ties
    first = simplex_max(A, b, ubar, g)
    for _ in range(5):
        again = simplex_max(A, b, ubar, g)
        assert again.vertex.tobytes() == first.vertex.tobytes()


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_shrunken_value_never_exceeds_lmo(n, m, seed):
    rng = np.random.default_rng(seed)
    P = Polytope(*random_polytope(rng, n, m))
    g = rng.normal(size=n)
    cap = rng.random(n)
    assert g @ P.lmo_shrunken(g, cap) <= g @ P.lmo(g) + 1e-12
    assert np.all(P.lmo_shrunken(g, cap) <= cap + 1e-9)


def test_projection_examples():
    np.testing.assert_array_equal(Box([0, 0], [1, 1]).project([2, 2]), [1, 1])
    np.testing.assert_allclose(SUM1.project([1, 1]), [0.5, 0.5], atol=1e-4)
    y = np.array([0.2, 0.3])
    np.testing.assert_allclose(SUM1.project(y), y, atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_projection_variational_inequality(seed):
    rng = np.random.default_rng(seed)
    n, m = 2 + seed % 4, 1 + seed % 3
    P = Polytope(*random_polytope(rng, n, m))
    y = rng.normal(size=n) * 2
    p = P.project(y)
    assert P.contains(p, 1e-9)
    for _ in range(50):
        x = P.lmo(rng.normal(size=n)) * rng.random()  # feasible by down-closedness
        assert (y - p) @ (x - p) <= 1e-6


def test_contains_examples():
    assert SUM1.contains([0.5, 0.5])
    assert not SUM1.contains([0.6, 0.6])
    assert SUM1.contains([1 + 5e-10, 0], tol=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_down_closed(n, m, seed):
    rng = np.random.default_rng(seed)
    P = Polytope(*random_polytope(rng, n, m))
    x = P.lmo(rng.normal(size=n)) * rng.random()
    assert P.contains(x)
    assert P.contains(x * rng.random(n))


def test_diameter():
    assert Box([0, 0], [1, 1]).diameter() == pytest.approx(math.sqrt(2))
    assert SUM1.diameter() == pytest.approx(math.sqrt(2))
    assert Box([0.3, 0.3], [0.3, 0.3]).diameter() == 0.0


def test_constraint_files_round_trip():
    for c in (SUM1, Box([0, -1], [1, 2])):
        again = constraint_from_dict(c.to_dict())
        assert again.to_dict() == c.to_dict()
    with pytest.raises(MalformedInput):
        constraint_from_dict({"type": "ellipsoid"})

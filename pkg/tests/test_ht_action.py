from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings as hypothesis_settings, strategies as st

from core.errors import DimensionMismatch, InvalidPoint, ZeroScalar
from core.ht_action import (
    ProjectivePoint,
    act,
    base_point,
    bell,
    conjugate_by_torus,
    fixed_point,
    in_stabilizer,
    iota,
    is_identity,
    orbit_index,
    orbit_representative,
    rho,
    stabilizer_dim,
    torus_act,
    torus_matrix,
    weighted_rescale,
    weighted_rescale_subspace,
)
from core.linalg import matmul
from core.realization import RationalSubspace, is_pg, polymatroid_from_subspace

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def sympy_complete_bell(k, values):
    """Sum of the incomplete Bell polynomials, evaluated at the given values"""
    if k == 0:
        return Fraction(1)
    xs = sympy.symbols(f"x1:{k + 1}")
    polynomial = sum(sympy.bell(k, j, xs[:k - j + 1]) for j in range(1, k + 1))
    value = sympy.Rational(polynomial.subs({x: sympy.Rational(v.numerator, v.denominator) for x, v in zip(xs, values)}))
    return Fraction(int(value.p), int(value.q))


class TestBell:
    def test_small_degrees(self):
        assert bell(0, []) == 1
        assert bell(1, [5]) == 5
        assert bell(2, [2, 3]) == 2 ** 2 + 3
        assert bell(3, [2, 3, 7]) == 2 ** 3 + 3 * 2 * 3 + 7

    def test_needs_enough_arguments(self):
        with pytest.raises(DimensionMismatch):
            bell(3, [1, 2])

    @hypothesis_settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=1, max_value=5), st.lists(rationals, min_size=5, max_size=5))
    def test_matches_sympy(self, k, values):
        assert bell(k, values[:k]) == sympy_complete_bell(k, values[:k])


class TestRho:
    def test_one_dimensional(self):
        assert rho(1, [3]) == ((Fraction(1), Fraction(0)), (Fraction(3), Fraction(1)))

    def test_zero_is_identity(self):
        assert is_identity(rho(3, [0, 0, 0]))

    def test_parameter_count(self):
        with pytest.raises(DimensionMismatch):
            rho(2, [1])

    @hypothesis_settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=1, max_value=6), st.data())
    def test_homomorphism(self, n, data):
        a = data.draw(st.lists(rationals, min_size=n, max_size=n))
        b = data.draw(st.lists(rationals, min_size=n, max_size=n))
        total = [x + y for x, y in zip(a, b)]
        assert matmul(rho(n, a), rho(n, b)) == rho(n, total)

    @hypothesis_settings(max_examples=25, deadline=None)
    @given(st.lists(rationals, min_size=3, max_size=3), rationals.filter(lambda t: t != 0))
    def test_torus_normalizes(self, a, t):
        assert conjugate_by_torus(3, a, t) == rho(3, weighted_rescale(a, t))

    def test_torus_needs_nonzero(self):
        with pytest.raises(ZeroScalar):
            torus_matrix(2, 0)
        with pytest.raises(ZeroScalar):
            weighted_rescale([1, 2], 0)


class TestOrbits:
    def test_iota_of_a_line(self):
        point = iota((3,), (1, 1, 1))
        assert point.factors == ((Fraction(1), Fraction(1), Fraction(3, 2), Fraction(13, 6)),)
        assert orbit_index(point) == (3,)

    def test_fixed_points(self):
        assert fixed_point(3, 1) == (0, 0, 1, 0)
        assert orbit_index(ProjectivePoint.of([fixed_point(3, 1)])) == (1,)
        point = orbit_representative((1, 2), (0, 1))
        assert point.factors == ((0, 1), (0, 1, 0))
        assert base_point((2,)).factors == ((1, 0, 0),)

    def test_points_are_normalized(self):
        assert ProjectivePoint.of([[0, 2, 4]]).factors == ((0, 1, 2),)
        with pytest.raises(InvalidPoint):
            ProjectivePoint.of([[0, 0]])

    def test_torus_fixes_representatives(self):
        point = orbit_representative((2, 3), (1, 2))
        assert torus_act(Fraction(5, 2), point) == point

    def test_stabilizer_dimension(self):
        assert stabilizer_dim((3, 2), (1, 2)) == 2

    @hypothesis_settings(max_examples=30, deadline=None)
    @given(
        st.lists(rationals, min_size=3, max_size=3),
        st.lists(rationals, min_size=2, max_size=2),
        st.integers(min_value=0, max_value=3),
        st.integers(min_value=0, max_value=2),
    )
    def test_action_preserves_orbits(self, a1, a2, s1, s2):
        point = orbit_representative((3, 2), (s1, s2))
        moved = act([a1, a2], point)
        assert orbit_index(moved) == (s1, s2)
        assert (moved == point) == in_stabilizer([a1, a2], (s1, s2))

    def test_act_checks_dimensions(self):
        with pytest.raises(DimensionMismatch):
            act([[1]], base_point((2,)))


def test_rescaling_keeps_the_polymatroid_and_genericity():
    subspace = RationalSubspace.from_rows((2, 2), [(1, 0, 1, 1), (0, 1, 1, -1)])
    rescaled = weighted_rescale_subspace(subspace, [2, Fraction(-1, 3)])
    assert polymatroid_from_subspace(rescaled) == polymatroid_from_subspace(subspace)
    assert is_pg(rescaled)
    with pytest.raises(ZeroScalar):
        weighted_rescale_subspace(subspace, [0, 1])


@hypothesis_settings(max_examples=20, deadline=None)
@given(rationals, rationals, st.lists(rationals, min_size=3, max_size=3))
def test_rho_two_acts_on_coordinates(a1, a2, b):
    assert rho(2, [a1, a2]) == (
        (1, 0, 0),
        (a1, 1, 0),
        (a1 ** 2 / 2 + a2, a1, 1),
    )
    b0, b1, b2 = (Fraction(x) for x in b)
    image = tuple(sum(r * x for r, x in zip(row, (b0, b1, b2))) for row in rho(2, [a1, a2]))
    assert image == (b0, a1 * b0 + b1, (a1 ** 2 / 2 + a2) * b0 + a1 * b1 + b2)


@hypothesis_settings(max_examples=20, deadline=None)
@given(rationals, rationals)
def test_iota_of_the_two_block_plane(u, v):
    point = iota((2, 2), (u, v, u + v, u - v))
    assert point.factors == (
        (1, u, v + u ** 2 / 2),
        (1, u + v, u - v + (u + v) ** 2 / 2),
    )
    (_, b11, b12), (_, b21, b22) = point.factors
    assert b21 ** 2 + 4 * b11 - 2 * b21 - 2 * b22 == 0
    assert b11 ** 2 - 2 * b11 - 2 * b12 + 2 * b21 == 0

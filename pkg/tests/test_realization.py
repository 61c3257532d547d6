import logging
from fractions import Fraction

import pytest

from core.errors import DimensionMismatch, NotPG, RankZero, RetryLimit, TranslateChangedPolymatroid
from core.lift import MaterializedLift
from core.linalg import column_rank, determinant, nullspace, rank, rref
from core.operations import delete, truncate
from core.polymatroid import CagedPolymatroid, cube, free_polymatroid, multiset_rank
from core.realization import (
    RationalSubspace,
    block_translate,
    caged_from_subspace,
    check_projection_pg,
    codim_in_self,
    flag_ranks,
    intersect_hyperplane,
    intersect_subspaces,
    is_pg,
    lift_matroid_ranks,
    pg_violation,
    polymatroid_from_subspace,
    project,
    random_pg_translate,
    realize_truncation,
    require_pg,
    stabilizer_codimension,
    stabilizer_intersection,
)

INTRO_ROWS = [(1, 0, 1, 2, 1), (0, 1, 1, -1, 0), (0, 0, 0, 0, -1)]
TWO_ELEMENT_ROWS = [(1, 0, 1, 1), (0, 1, 1, -1)]


@pytest.fixture
def intro_subspace():
    return RationalSubspace.from_rows((1, 1, 1, 2), INTRO_ROWS)


@pytest.fixture
def two_element_subspace():
    return RationalSubspace.from_rows((2, 2), TWO_ELEMENT_ROWS)


class TestLinearAlgebra:
    def test_rref(self):
        reduced, pivots = rref([(2, 4), (1, 2), (0, 1)])
        assert reduced == ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
        assert pivots == (0, 1)

    def test_ranks(self):
        assert rank([(1, 2, 3), (2, 4, 6)]) == 1
        assert column_rank(INTRO_ROWS, [0, 1, 2]) == 2
        assert column_rank(INTRO_ROWS, []) == 0

    def test_determinant(self):
        assert determinant([(1, 2), (3, 4)]) == -2
        assert determinant([(1, 2), (2, 4)]) == 0

    def test_nullspace(self):
        basis = nullspace([(1, 1, 0)], 3)
        assert len(basis) == 2
        for vector in basis:
            assert vector[0] + vector[1] == 0


class TestSubspacePolymatroid:
    def test_intro_realization(self, intro_subspace, intro_poly):
        assert intro_subspace.dimension == 3
        assert polymatroid_from_subspace(intro_subspace) == intro_poly
        assert caged_from_subspace(intro_subspace).cage == (1, 1, 1, 2)

    def test_two_element_realization(self, two_element_subspace, two_element):
        assert caged_from_subspace(two_element_subspace) == two_element

    def test_row_width_is_checked(self):
        with pytest.raises(DimensionMismatch):
            RationalSubspace.from_rows((1, 1), [(1, 0, 0)])

    def test_projection_deletes(self, intro_subspace, intro_poly):
        assert polymatroid_from_subspace(project(intro_subspace, 0b1000)) == delete(intro_poly, 0b1000)

    def test_hyperplane(self, two_element_subspace):
        cut = intersect_hyperplane(two_element_subspace, (1, 0, 0, 0))
        assert cut.dimension == 1
        with pytest.raises(DimensionMismatch):
            intersect_hyperplane(two_element_subspace, (1, 0))

    def test_block_translate_by_identity(self, intro_subspace):
        blocks = [[[1]], [[1]], [[1]], [[1, 0], [0, 1]]]
        assert block_translate(intro_subspace, blocks) == intro_subspace


class TestPartialGenericity:
    def test_intro_subspace_is_not_generic(self, intro_subspace):
        assert not is_pg(intro_subspace)
        assert pg_violation(intro_subspace) == ((0, 1, 1, 1), 3, 2)
        with pytest.raises(NotPG):
            require_pg(intro_subspace)
        with pytest.raises(NotPG):
            flag_ranks(intro_subspace)

    def test_two_element_subspace_is_generic(self, two_element_subspace):
        assert is_pg(two_element_subspace)
        assert random_pg_translate(two_element_subspace) == two_element_subspace

    def test_generic_translate_is_logged(self, intro_subspace, caplog):
        with caplog.at_level(logging.INFO, logger="realization"):
            random_pg_translate(intro_subspace, seed=0)
        assert any(r.message.startswith("✅ found a partially generic translate") for r in caplog.records)

    def test_generic_translate(self, intro_subspace, intro):
        translate = random_pg_translate(intro_subspace, seed=0)
        assert is_pg(translate)
        assert polymatroid_from_subspace(translate) == intro.poly
        assert translate == random_pg_translate(intro_subspace, seed=0)
        for s, codim in flag_ranks(translate).items():
            assert codim == multiset_rank(intro, s)
        assert check_projection_pg(translate)

    def test_stabilizer_intersection(self, intro_subspace):
        translate = random_pg_translate(intro_subspace, seed=3)
        for s in cube(translate.cage):
            inside = stabilizer_intersection(translate, s)
            assert codim_in_self(translate, inside) == stabilizer_codimension(translate, s)

    def test_flag_ranks_from_intersected_pieces(self, two_element_subspace):
        caged = caged_from_subspace(two_element_subspace)
        ranks = flag_ranks(two_element_subspace)
        assert len(ranks) == 9
        for s, codim in ranks.items():
            assert codim == multiset_rank(caged, s)

    def test_translate_must_keep_the_polymatroid(self, intro_subspace, monkeypatch, caplog):
        other = RationalSubspace.from_rows((1, 1, 1, 2), [(1, 0, 0, 0, 0)])
        monkeypatch.setattr("core.realization.block_translate", lambda subspace, blocks: other)
        with caplog.at_level(logging.ERROR, logger="realization"), pytest.raises(TranslateChangedPolymatroid) as error:
            random_pg_translate(intro_subspace, seed=0)
        assert error.value.witness == 0b0010
        assert error.value.message == "block-diagonal translate changed the rank of {2} from 1 to 0"
        assert any(r.message.startswith("❌ block translate changed") for r in caplog.records)

    def test_retries_and_height_overrides(self, intro_subspace, monkeypatch):
        heights = []

        def identity_block(size, rng, height):
            heights.append(height)
            return [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]

        monkeypatch.setattr("core.realization._random_invertible", identity_block)
        with pytest.raises(RetryLimit) as error:
            random_pg_translate(intro_subspace, retries=2, height=7)
        assert error.value.attempts == 2
        assert heights == [7] * 8

    def test_truncation_retries_and_height(self, intro_subspace):
        with pytest.raises(RetryLimit) as error:
            realize_truncation(intro_subspace, 0b1111, retries=3, height=0)
        assert error.value.attempts == 3

    def test_codimension_needs_containment(self, two_element_subspace):
        line = RationalSubspace.from_rows((2, 2), [(0, 0, 1, 0)])
        with pytest.raises(DimensionMismatch):
            codim_in_self(two_element_subspace, line)
        assert codim_in_self(two_element_subspace, two_element_subspace) == 0

    def test_truncation_by_hyperplane(self, intro_subspace, intro_poly):
        translate = random_pg_translate(intro_subspace, seed=1)
        cut = realize_truncation(translate, 0b1111, seed=1)
        assert cut.dimension == 2
        assert polymatroid_from_subspace(cut) == truncate(intro_poly, 0b1111)
        assert is_pg(cut)

    def test_truncation_needs_rank(self):
        zero = RationalSubspace.from_rows((1, 1), [])
        with pytest.raises(RankZero):
            realize_truncation(zero, 0b11)


def test_column_matroid_of_the_whole_space_is_the_free_lift():
    subspace = RationalSubspace.from_rows((2, 1), [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    lift = MaterializedLift(CagedPolymatroid.tight(free_polymatroid((2, 1))))
    assert lift_matroid_ranks(subspace) == [lift.rank(subset) for subset in range(8)]


class TestIntersections:
    def test_two_planes_meet_in_a_line(self):
        plane = RationalSubspace.from_rows((1, 1, 1), [(1, 0, 0), (0, 1, 0)])
        other = RationalSubspace.from_rows((1, 1, 1), [(0, 1, 0), (0, 0, 1)])
        assert intersect_subspaces(plane, other) == RationalSubspace.from_rows((1, 1, 1), [(0, 1, 0)])

    def test_skew_lines_meet_in_zero(self):
        first = RationalSubspace.from_rows((1, 1), [(1, 0)])
        second = RationalSubspace.from_rows((1, 1), [(1, 1)])
        assert intersect_subspaces(first, second).dimension == 0
        assert intersect_subspaces(first, RationalSubspace.from_rows((1, 1), [])).dimension == 0

    def test_blocks_must_match(self):
        with pytest.raises(DimensionMismatch):
            intersect_subspaces(
                RationalSubspace.from_rows((2,), [(1, 0)]),
                RationalSubspace.from_rows((1, 1), [(1, 0)]),
            )

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from core.errors import TooLarge
from core.lattice import enumerate_lattice, is_combinatorial_flat
from core.lift import (
    LiftSet,
    MaterializedLift,
    bases_from_geometric_part,
    check_flat_bases,
    coloop_deletion_violation,
    flat_rank_formula,
    geometric_part,
    geometric_support,
    lift_basis_check,
    lift_circuits,
    lift_flat_check,
    lift_rank,
)
from core.polymatroid import CagedPolymatroid, RankCache, bases_of_multiset, cube, free_polymatroid, multiset_rank
from services.instance_generator import GeneratorParams, random_caged_polymatroid
from tests.conftest import INTRO_FLATS

SMALL = GeneratorParams(max_n=3, max_rank=3, max_cage=3)


def test_lift_rank_is_multiset_rank(intro):
    for s in cube(intro.cage):
        assert lift_rank(intro, s) == multiset_rank(intro, s)


def test_geometric_part(intro):
    assert geometric_part(intro, (1, 0, 0, 1)) == (1, 0, 0, 0)
    assert geometric_support(intro, (1, 0, 0, 1)) == 0b0001
    assert geometric_part(intro, (1, 1, 1, 2)) == (1, 1, 1, 2)


def test_flats_of_the_lift(intro):
    flats = sorted(s for s in cube(intro.cage) if lift_flat_check(intro, s))
    assert flats == sorted(INTRO_FLATS)


def test_rank_of_a_flat_from_its_geometric_part(intro):
    assert flat_rank_formula(intro, (0, 0, 1, 1)) == 2
    for s in INTRO_FLATS:
        assert flat_rank_formula(intro, s) == multiset_rank(intro, s)


def test_coloop_copies_can_be_removed(intro):
    for s in INTRO_FLATS:
        assert coloop_deletion_violation(intro, s) is None
    assert multiset_rank(intro, (1, 0, 0, 1)) - multiset_rank(intro, (1, 0, 0, 0)) == 1


def test_bases_of_a_flat_from_its_geometric_part(intro):
    assert bases_from_geometric_part(intro, (0, 0, 1, 1)) == [(0, 0, 1, 1)]
    assert bases_from_geometric_part(intro, (1, 1, 1, 0)) == [(0, 1, 1, 0), (1, 0, 1, 0), (1, 1, 0, 0)]
    for s in INTRO_FLATS:
        assert check_flat_bases(intro, s)


def test_bases(intro):
    assert lift_basis_check(intro, (1, 1, 0, 1))
    assert not lift_basis_check(intro, (1, 1, 1, 0))
    assert not lift_basis_check(intro, (1, 1, 0))


def test_circuits(intro):
    assert lift_circuits(intro) == [(0, 1, 1, 2), (1, 0, 1, 2), (1, 1, 0, 2), (1, 1, 1, 0)]


def test_lift_sets():
    lifted = LiftSet.of([(0, 0), (3, 1), (3, 0)])
    assert lifted.counts == (1, 0, 0, 2)
    assert lifted.representative() == frozenset({(0, 0), (3, 0), (3, 1)})


class TestMaterializedLift:
    def test_intro_lift_is_a_matroid(self, intro):
        lift = MaterializedLift(intro)
        assert lift.size == 5
        assert lift.is_matroid()
        assert lift.matroid_axioms_hold()
        assert len(lift.circuits()) == 4

    def test_flats_come_in_symmetric_families(self, intro):
        lift = MaterializedLift(intro)
        counts = lift.flat_multiplicities()
        assert set(counts) == set(INTRO_FLATS)
        assert counts[(0, 0, 0, 1)] == 2
        for s in INTRO_FLATS:
            assert counts[s] == lift.expected_multiplicity(s)

    def test_refuses_large_cages(self):
        with pytest.raises(TooLarge):
            MaterializedLift(CagedPolymatroid.tight(free_polymatroid((13,))))

    @hypothesis_settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_flat_definitions_agree(self, seed):
        caged = random_caged_polymatroid(seed, SMALL)
        lattice = enumerate_lattice(caged)
        for s in cube(caged.cage):
            assert lift_flat_check(caged, s) == is_combinatorial_flat(caged, s)
        if sum(caged.cage) <= 10:
            lift = MaterializedLift(caged)
            assert lift.flat_multiplicities() == {
                s: lift.expected_multiplicity(s) for s in lattice.elements
            }


@hypothesis_settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_removing_a_coloop_copy_from_a_flat(seed):
    caged = random_caged_polymatroid(seed, SMALL)
    rank = RankCache(caged)
    for s in enumerate_lattice(caged).elements:
        assert coloop_deletion_violation(caged, s, rank) is None


@hypothesis_settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_bases_of_random_flats_come_from_the_geometric_part(seed):
    caged = random_caged_polymatroid(seed, SMALL)
    for s in enumerate_lattice(caged).elements:
        assert sorted(bases_of_multiset(caged, s)) == bases_from_geometric_part(caged, s)

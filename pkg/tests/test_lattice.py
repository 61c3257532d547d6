import dataclasses

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from core.errors import AxiomsFailed, NoMinimum, NotAFlat, NotGraded, TooLarge
from core.lattice import (
    AbstractGradedLattice,
    canonical_invariant,
    check_axioms,
    check_bottom_monotone,
    check_cage_independence,
    check_multiset_submodularity,
    check_semimodular,
    check_top_heavy,
    enumerate_lattice,
    flat_embedding,
    graded_ranks,
    is_isomorphic,
    join,
    join_irreducibles,
    meet,
    multiset_closure,
    ordinary_flat_poset,
    reconstruct_polymatroid,
    whitney,
)
from core.polymatroid import CagedPolymatroid, polymatroids_equivalent, validate
from services.instance_generator import GeneratorParams, random_caged_polymatroid
from tests.conftest import INTRO_FLATS

SMALL = GeneratorParams(max_n=3, max_rank=3, max_cage=3)


def _poset(labels, covers, ranks=None):
    index = {label: k for k, label in enumerate(labels)}
    return AbstractGradedLattice(
        tuple(labels),
        tuple((index[a], index[b]) for a, b in covers),
        tuple(ranks) if ranks is not None else None,
    )


class TestIntroLattice:
    def test_eleven_flats(self, intro):
        lattice = enumerate_lattice(intro)
        assert list(lattice.elements) == INTRO_FLATS
        assert list(lattice.ranks) == [0, 1, 1, 1, 1, 2, 2, 2, 2, 2, 3]

    def test_whitney_numbers(self, intro):
        lattice = enumerate_lattice(intro)
        assert whitney(lattice) == [1, 4, 5, 1]
        assert check_top_heavy(lattice)
        assert check_bottom_monotone(lattice)

    def test_covers(self, intro):
        lattice = enumerate_lattice(intro)
        assert len(lattice.covers) == 19
        index = lattice.index_of
        assert (index((0, 0, 0, 1)), index((0, 0, 0, 2))) in lattice.covers
        assert (index((0, 0, 1, 0)), index((0, 0, 0, 2))) not in lattice.covers

    def test_join_and_meet(self, intro):
        assert join(intro, (0, 0, 1, 0), (0, 1, 0, 0)) == (1, 1, 1, 0)
        assert meet(intro, (0, 0, 1, 1), (0, 1, 0, 1)) == (0, 0, 0, 1)
        assert multiset_closure(intro, (0, 1, 1, 0)) == (1, 1, 1, 0)
        with pytest.raises(NotAFlat):
            join(intro, (0, 1, 1, 0), (0, 0, 0, 0))

    def test_lattice_index_operations(self, intro):
        lattice = enumerate_lattice(intro)
        a = lattice.index_of((0, 0, 1, 0))
        b = lattice.index_of((1, 0, 0, 0))
        assert lattice.elements[lattice.join(a, b)] == (1, 1, 1, 0)
        assert lattice.meet(a, b) == lattice.bottom
        assert lattice.rank_of((1, 1, 1, 2)) == 3
        with pytest.raises(NotAFlat):
            lattice.index_of((1, 1, 0, 0))

    def test_semimodular(self, intro):
        assert check_semimodular(intro)
        assert check_multiset_submodularity(intro) is None

    def test_size_guard(self, intro):
        with pytest.raises(TooLarge):
            enumerate_lattice(intro, bound=10)

    def test_flat_embedding(self, intro):
        assert flat_embedding(intro) == {
            0b0000: (0, 0, 0, 0),
            0b0001: (1, 0, 0, 0),
            0b0010: (0, 1, 0, 0),
            0b0100: (0, 0, 1, 0),
            0b0111: (1, 1, 1, 0),
            0b1000: (0, 0, 0, 2),
            0b1111: (1, 1, 1, 2),
        }

    def test_cage_does_not_change_the_lattice(self, intro):
        loose = CagedPolymatroid(intro.poly, (2, 2, 2, 3))
        assert check_cage_independence(loose)
        assert len(enumerate_lattice(loose)) == 11


class TestSmallLattices:
    def test_two_element(self, two_element):
        lattice = enumerate_lattice(two_element)
        assert list(lattice.elements) == [(0, 0), (0, 1), (1, 0), (2, 2)]
        assert whitney(lattice) == [1, 2, 1]

    def test_chain(self, chain3):
        lattice = enumerate_lattice(chain3)
        assert whitney(lattice) == [1, 1, 1, 1]
        assert check_axioms(lattice).passed

    def test_isomorphic_to_boolean(self, two_element, boolean2):
        first, second = enumerate_lattice(two_element), enumerate_lattice(boolean2)
        assert is_isomorphic(first, second)
        assert canonical_invariant(first) == canonical_invariant(second)
        assert not is_isomorphic(first, enumerate_lattice(CagedPolymatroid(validate((0, 2)), (2,))))

    def test_loops_sit_in_the_bottom(self):
        looped = CagedPolymatroid(validate((0, 0, 1, 1)), (2, 1))
        lattice = enumerate_lattice(looped)
        assert lattice.elements[lattice.bottom] == (2, 0)
        assert whitney(lattice) == [1, 1]


class TestAxioms:
    def test_intro_passes(self, intro):
        report = check_axioms(enumerate_lattice(intro))
        assert report.passed
        assert report.maximal_join_irreducibles == ["0,0,1,0", "0,1,0,0", "1,0,0,0", "0,0,0,2"]

    def test_join_irreducibles(self, intro):
        lattice = enumerate_lattice(intro)
        labels = lattice.labels()
        assert [labels[k] for k in join_irreducibles(lattice)] == [
            "0,0,0,1", "0,0,1,0", "0,1,0,0", "1,0,0,0", "0,0,0,2",
        ]

    def test_reconstruction_recovers_the_polymatroid(self, intro):
        rebuilt = reconstruct_polymatroid(enumerate_lattice(intro))
        assert polymatroids_equivalent(rebuilt, intro.poly)

    def test_ordinary_flats_are_not_graded(self, intro_poly):
        poset = ordinary_flat_poset(intro_poly)
        assert len(poset) == 7
        with pytest.raises(NotGraded) as error:
            check_axioms(poset)
        assert (error.value.lower, error.value.upper) == ("-", "4")

    def test_uniform_diamond(self):
        diamond = _poset(
            ["0", "a", "b", "c", "1"],
            [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        assert graded_ranks(diamond) == (0, 1, 1, 1, 2)
        assert check_axioms(diamond).passed
        assert reconstruct_polymatroid(diamond).rank_table == (0, 1, 1, 2, 1, 2, 2, 2)

    def test_irreducible_above_reducible(self):
        poset = _poset(
            ["0", "a", "b", "c", "d"],
            [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("c", "d")],
        )
        report = check_axioms(poset)
        assert not report.passed
        assert "join-reducible" in report.first_violation
        with pytest.raises(AxiomsFailed):
            reconstruct_polymatroid(poset)

    def test_pentagon_is_not_graded(self):
        pentagon = _poset(
            ["0", "a", "b", "c", "1"],
            [("0", "a"), ("a", "1"), ("0", "b"), ("b", "c"), ("c", "1")],
        )
        with pytest.raises(NotGraded):
            graded_ranks(pentagon)

    def test_two_minima(self):
        poset = _poset(["a", "b", "1"], [("a", "1"), ("b", "1")])
        with pytest.raises(NoMinimum):
            check_axioms(poset)


@hypothesis_settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_random_lattices_are_graded_semimodular_lattices(seed):
    caged = random_caged_polymatroid(seed, SMALL)
    lattice = enumerate_lattice(caged)
    assert check_top_heavy(lattice)
    assert check_bottom_monotone(lattice)
    assert check_semimodular(caged, lattice)
    assert check_axioms(lattice).passed
    assert lattice.elements[lattice.top] == caged.cage


class TestLatticeValue:
    def test_lattice_is_a_frozen_value(self, intro):
        lattice = enumerate_lattice(intro)
        assert {f.name for f in dataclasses.fields(lattice)} == {"caged", "elements", "ranks", "covers", "_index"}
        with pytest.raises(dataclasses.FrozenInstanceError):
            lattice.ranks = ()
        assert lattice == enumerate_lattice(intro)

    def test_indexed_join_matches_closure(self, intro):
        lattice = enumerate_lattice(intro)
        for x, s in enumerate(lattice.elements):
            for y, t in enumerate(lattice.elements):
                assert lattice.elements[lattice.join(x, y)] == join(intro, s, t)

    def test_hasse_graph_is_rebuilt(self, intro):
        abstract = enumerate_lattice(intro).to_abstract()
        graph = abstract.to_graph()
        graph.remove_edges_from(list(graph.edges))
        assert abstract.to_graph().number_of_edges() == len(abstract.covers)

import pytest
from pydantic import ValidationError

from core.lattice import enumerate_lattice
from core.polymatroid import CagedPolymatroid, free_polymatroid
from core.realization import caged_from_subspace
from services.instance_generator import FAMILIES, GeneratorParams, InstanceGenerator, random_caged_polymatroid

PARAMS = GeneratorParams(max_n=4, max_rank=4, max_cage=3)


def test_seeds_are_reproducible():
    generator = InstanceGenerator(PARAMS)
    assert generator.generate(17) == generator.generate(17)
    assert random_caged_polymatroid(17, PARAMS) == generator.generate(17).caged


def test_instances_respect_the_bounds():
    generator = InstanceGenerator(PARAMS)
    for seed in range(60):
        caged = generator.generate(seed).caged
        assert caged.ground_size <= PARAMS.max_n
        assert caged.rank <= PARAMS.max_rank
        assert all(n <= PARAMS.max_cage for n in caged.cage)
        assert all(caged.poly.singleton_rank(i) <= n for i, n in enumerate(caged.cage))


def test_every_family_appears():
    generator = InstanceGenerator(PARAMS)
    assert {generator.generate(seed).family for seed in range(60)} == set(FAMILIES)


def test_subspace_instances_keep_their_subspace():
    generator = InstanceGenerator(PARAMS)
    for seed in range(60):
        instance = generator.generate(seed)
        if instance.family == "subspace":
            assert caged_from_subspace(instance.subspace) == instance.caged
        else:
            assert instance.subspace is None


def test_empty_ground_set():
    caged = random_caged_polymatroid(3, GeneratorParams(max_n=0, max_rank=2, max_cage=2))
    assert caged.ground_size == 0
    assert len(enumerate_lattice(caged)) == 1


def test_bounds_are_validated():
    with pytest.raises(ValidationError):
        GeneratorParams(max_n=6)
    with pytest.raises(ValidationError):
        GeneratorParams(loop_probability=1.5)


@pytest.mark.parametrize("sizes", [(1,), (2, 1), (1, 1, 1), (2, 2)])
def test_free_lattice_is_a_product_of_chains(sizes):
    lattice = enumerate_lattice(CagedPolymatroid.tight(free_polymatroid(sizes)))
    expected = 1
    for n in sizes:
        expected *= n + 1
    assert len(lattice) == expected

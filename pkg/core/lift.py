"""Multisymmetric matroid lifts of caged polymatroids.

The lift replaces element i by n_i interchangeable copies (i,1)..(i,n_i).
Everything here works through multisets: a subset of the lifted ground set
is represented by how many copies of each i it contains. The
:class:`MaterializedLift` enumerates the real lifted ground set and is only
used as an oracle for small cages.
"""

from collections import Counter
from dataclasses import dataclass
from math import comb, prod
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from config.logging_config import get_logger
from config.settings import settings
from core.errors import TooLarge
from core.polymatroid import (
    CagedPolymatroid,
    Multiset,
    add,
    bases_of_multiset,
    cube,
    is_independent,
    leq,
    mask_of,
    members,
)

logger = get_logger('polymatroid')

LiftElement = Tuple[int, int]


@dataclass(frozen=True)
class LiftSet:
    """A subset of the lifted ground set up to multisymmetry"""

    counts: Multiset

    def representative(self) -> FrozenSet[LiftElement]:
        """Canonical representative {(i, 1..s_i)}, 0-based block and copy indices"""
        return frozenset((i, j) for i, s_i in enumerate(self.counts) for j in range(s_i))

    @classmethod
    def of(cls, elements) -> 'LiftSet':
        counts = Counter(i for i, _ in elements)
        size = max(counts, default=-1) + 1
        return cls(tuple(counts.get(i, 0) for i in range(size)))


def lift_rank(caged: CagedPolymatroid, s: Sequence[int]) -> int:
    """rk of the lifted set: min over B of rk(B) + |A minus the blocks of B|"""
    s = caged.check_in_cage(s)
    poly = caged.poly
    best = None
    for mask in range(1 << poly.ground_size):
        outside = sum(s[i] for i in range(len(s)) if not mask >> i & 1)
        value = poly.rk(mask) + outside
        if best is None or value < best:
            best = value
    return best


def geometric_part(caged: CagedPolymatroid, s: Sequence[int]) -> Multiset:
    """Keep only the full blocks of s"""
    s = caged.check_in_cage(s)
    return tuple(n_i if s_i == n_i else 0 for s_i, n_i in zip(s, caged.cage))


def geometric_support(caged: CagedPolymatroid, s: Sequence[int]) -> int:
    """Bitmask of blocks that s fills completely"""
    s = caged.check_in_cage(s)
    return mask_of(i for i, (s_i, n_i) in enumerate(zip(s, caged.cage)) if s_i == n_i)


def lift_flat_check(caged: CagedPolymatroid, s: Sequence[int], rank=None) -> bool:
    """Adding one more copy of any non-full block raises the rank"""
    rank = rank or (lambda t: lift_rank(caged, t))
    s = caged.check_in_cage(s)
    r = rank(s)
    for i, (s_i, n_i) in enumerate(zip(s, caged.cage)):
        if s_i < n_i:
            bigger = s[:i] + (s_i + 1,) + s[i + 1:]
            if rank(bigger) <= r:
                return False
    return True


def lift_basis_check(caged: CagedPolymatroid, b: Sequence[int]) -> bool:
    """b is a basis of the polymatroid lying inside the cage"""
    b = tuple(b)
    return (
        len(b) == caged.ground_size
        and leq(b, caged.cage)
        and sum(b) == caged.rank
        and is_independent(caged.poly, b)
    )


def flat_rank_formula(caged: CagedPolymatroid, s: Sequence[int]) -> int:
    """Rank of a combinatorial flat from its geometric part: rk(s_geo) + |s - s_geo|"""
    geo = geometric_part(caged, s)
    mask = geometric_support(caged, s)
    return caged.poly.rk(mask) + sum(s) - sum(geo)


def coloop_deletion_violation(caged: CagedPolymatroid, s: Sequence[int], rank=None) -> Optional[int]:
    """Index i where removing a copy from a partly filled block of the flat s
    fails to give a flat of rank one less, or None.

    Copies in partly filled blocks are coloops of a combinatorial flat.
    """
    rank = rank or (lambda t: lift_rank(caged, t))
    s = caged.check_in_cage(s)
    r = rank(s)
    for i, (s_i, n_i) in enumerate(zip(s, caged.cage)):
        if not 0 < s_i < n_i:
            continue
        smaller = s[:i] + (s_i - 1,) + s[i + 1:]
        if rank(smaller) != r - 1 or not lift_flat_check(caged, smaller, rank):
            return i
    return None


def bases_from_geometric_part(caged: CagedPolymatroid, s: Sequence[int]) -> List[Multiset]:
    """Bases of a combinatorial flat predicted from its geometric part.

    Each is a basis of the geometric part plus every copy outside the full
    blocks.
    """
    geo = geometric_part(caged, s)
    rest = tuple(s_i - g_i for s_i, g_i in zip(s, geo))
    return sorted(add(b, rest) for b in bases_of_multiset(caged, geo))


def check_flat_bases(caged: CagedPolymatroid, s: Sequence[int]) -> bool:
    """The bases of the flat s are exactly those predicted from its geometric part"""
    return sorted(bases_of_multiset(caged, s)) == bases_from_geometric_part(caged, s)


def lift_circuits(caged: CagedPolymatroid) -> List[Multiset]:
    """Minimal dependent multisets below the cage"""
    found = []
    for d in cube(caged.cage):
        size = sum(d)
        if size == 0 or lift_rank(caged, d) == size:
            continue
        minimal = all(
            lift_rank(caged, d[:i] + (d[i] - 1,) + d[i + 1:]) == size - 1
            for i in range(len(d))
            if d[i] > 0
        )
        if minimal:
            found.append(tuple(d))
    return found


class MaterializedLift:
    """The lifted matroid on an explicit ground set of sum(n) elements"""

    def __init__(self, caged: CagedPolymatroid):
        size = sum(caged.cage)
        if size > settings.ORACLE_MAX_LIFT_SIZE:
            raise TooLarge("ORACLE_MAX_LIFT_SIZE", size, settings.ORACLE_MAX_LIFT_SIZE)
        self.caged = caged
        self.elements: List[LiftElement] = [
            (i, j) for i, n_i in enumerate(caged.cage) for j in range(n_i)
        ]
        self.size = size
        self._block_masks = []
        for i in range(caged.ground_size):
            block = 0
            for position, (k, _) in enumerate(self.elements):
                if k == i:
                    block |= 1 << position
            self._block_masks.append(block)
        self._ranks = self._tabulate()

    def _tabulate(self) -> List[int]:
        poly = self.caged.poly
        unions = []
        for mask in range(1 << poly.ground_size):
            union = 0
            for i in members(mask):
                union |= self._block_masks[i]
            unions.append((poly.rk(mask), ~union))
        return [
            min(rank + bin(subset & outside).count("1") for rank, outside in unions)
            for subset in range(1 << self.size)
        ]

    def rank(self, subset: int) -> int:
        return self._ranks[subset]

    def counts(self, subset: int) -> Multiset:
        return tuple(
            bin(subset & block).count("1") for block in self._block_masks
        )

    def is_flat(self, subset: int) -> bool:
        r = self._ranks[subset]
        return all(
            self._ranks[subset | (1 << e)] > r
            for e in range(self.size)
            if not subset >> e & 1
        )

    def flats(self) -> List[int]:
        return [subset for subset in range(1 << self.size) if self.is_flat(subset)]

    def flat_multiplicities(self) -> Dict[Multiset, int]:
        """How many flats of the lift represent each multiset"""
        return dict(Counter(self.counts(subset) for subset in self.flats()))

    def expected_multiplicity(self, s: Sequence[int]) -> int:
        return prod(comb(n_i, s_i) for n_i, s_i in zip(self.caged.cage, s))

    def is_matroid(self) -> bool:
        return all(self._ranks[1 << e] <= 1 for e in range(self.size))

    def circuits(self) -> List[int]:
        """Minimal dependent subsets"""
        dependent = [
            subset for subset in range(1, 1 << self.size)
            if self._ranks[subset] < bin(subset).count("1")
        ]
        return [
            subset for subset in dependent
            if all(
                self._ranks[subset & ~(1 << e)] == bin(subset).count("1") - 1
                for e in range(self.size)
                if subset >> e & 1
            )
        ]

    def matroid_axioms_hold(self) -> bool:
        """Normalized, unit increasing and submodular on single-element squares"""
        ranks = self._ranks
        if ranks[0] != 0:
            return False
        for subset in range(1 << self.size):
            for e in range(self.size):
                bit = 1 << e
                if subset & bit:
                    continue
                if ranks[subset | bit] - ranks[subset] not in (0, 1):
                    return False
                for f in range(e + 1, self.size):
                    other = 1 << f
                    if subset & other:
                        continue
                    if ranks[subset | bit] + ranks[subset | other] < ranks[subset | bit | other] + ranks[subset]:
                        return False
        return True

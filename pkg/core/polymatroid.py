"""Integer polymatroids on a small ground set.

Subsets of the ground set {1..N} are bitmasks: element i (1-based in all
user-facing text) is bit i-1. Multisets are tuples of naturals of length N.
"""

from dataclasses import dataclass, field
from itertools import permutations, product
from math import prod
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from config.logging_config import get_logger
from config.settings import settings
from core.errors import (
    CageExceeded,
    InvalidCage,
    MalformedTable,
    NotIncreasing,
    NotNormalized,
    NotSubmodular,
    TooLarge,
)

logger = get_logger('polymatroid')

Multiset = Tuple[int, ...]


# Subset helpers

def mask_of(indices: Iterable[int]) -> int:
    """Bitmask of 0-based element indices"""
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def members(mask: int) -> Tuple[int, ...]:
    """0-based indices in a bitmask, ascending"""
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def format_subset(mask: int) -> str:
    if mask == 0:
        return "-"
    return ",".join(str(i + 1) for i in members(mask))


# Multiset helpers

def zero(n: int) -> Multiset:
    return (0,) * n


def unit(n: int, i: int) -> Multiset:
    return tuple(1 if j == i else 0 for j in range(n))


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> Multiset:
    return tuple(x + y for x, y in zip(a, b))


def componentwise_max(a: Sequence[int], b: Sequence[int]) -> Multiset:
    return tuple(max(x, y) for x, y in zip(a, b))


def componentwise_min(a: Sequence[int], b: Sequence[int]) -> Multiset:
    return tuple(min(x, y) for x, y in zip(a, b))


def support(s: Sequence[int]) -> int:
    return mask_of(i for i, x in enumerate(s) if x > 0)


def cube(cage: Sequence[int]) -> Iterator[Multiset]:
    """All multisets below the cage in lexicographic order"""
    return product(*(range(k + 1) for k in cage))


def cube_size(cage: Sequence[int]) -> int:
    return prod(k + 1 for k in cage)


def format_multiset(s: Sequence[int]) -> str:
    return ",".join(str(x) for x in s)


@dataclass(frozen=True)
class Polymatroid:
    """Rank function stored as a table indexed by bitmask.

    Construct through :func:`validate` unless the table is known to satisfy
    the axioms already.
    """

    ground_size: int
    rank_table: Tuple[int, ...]

    @property
    def full_mask(self) -> int:
        return (1 << self.ground_size) - 1

    @property
    def rank(self) -> int:
        return self.rank_table[self.full_mask]

    def rk(self, mask: int) -> int:
        return self.rank_table[mask]

    def singleton_rank(self, i: int) -> int:
        return self.rank_table[1 << i]

    def tight_cage(self) -> Multiset:
        return tuple(self.singleton_rank(i) for i in range(self.ground_size))

    def corank(self, mask: int) -> int:
        return self.rank - self.rank_table[mask]

    def is_matroid(self) -> bool:
        return all(self.singleton_rank(i) <= 1 for i in range(self.ground_size))

    def loops(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.ground_size) if self.singleton_rank(i) == 0)

    def is_loopless(self) -> bool:
        return not self.loops()

    def is_flat(self, mask: int) -> bool:
        r = self.rank_table[mask]
        return all(
            self.rank_table[mask | (1 << i)] > r
            for i in range(self.ground_size)
            if not mask >> i & 1
        )

    def is_simple(self) -> bool:
        """Loopless and every singleton is a flat"""
        return self.is_loopless() and all(self.is_flat(1 << i) for i in range(self.ground_size))

    def __str__(self) -> str:
        return f"Polymatroid(N={self.ground_size}, rank={self.rank})"


def validate(rank_table: Sequence[int], ground_size: Optional[int] = None) -> Polymatroid:
    """Check the polymatroid axioms and return the polymatroid.

    Submodularity is checked on the local squares rk(A+i) + rk(A+j) >=
    rk(A+i+j) + rk(A), which is equivalent to the global inequality.
    """
    table = tuple(int(r) for r in rank_table)
    size = len(table)
    if ground_size is None:
        ground_size = size.bit_length() - 1
    if ground_size < 0 or size != 1 << ground_size:
        raise MalformedTable(f"rank table has {size} entries, expected 2^N")
    if ground_size > settings.MAX_GROUND_SIZE:
        raise TooLarge("MAX_GROUND_SIZE", ground_size, settings.MAX_GROUND_SIZE)

    if table[0] != 0:
        raise NotNormalized(table[0])

    for mask in range(size):
        for i in range(ground_size):
            bit = 1 << i
            if mask & bit:
                continue
            if table[mask] > table[mask | bit]:
                raise NotIncreasing(mask, mask | bit, table[mask], table[mask | bit])

    for mask in range(size):
        r = table[mask]
        for i in range(ground_size):
            bi = 1 << i
            if mask & bi:
                continue
            ri = table[mask | bi]
            for j in range(i + 1, ground_size):
                bj = 1 << j
                if mask & bj:
                    continue
                lhs = ri + table[mask | bj]
                rhs = table[mask | bi | bj] + r
                if lhs < rhs:
                    raise NotSubmodular(mask | bi, mask | bj, lhs, rhs)

    logger.debug(f"validated rank table on {ground_size} elements")
    return Polymatroid(ground_size, table)


def polymatroid_from_function(ground_size: int, rank_of) -> Polymatroid:
    """Tabulate ``rank_of(mask)`` and validate"""
    return validate([rank_of(mask) for mask in range(1 << ground_size)], ground_size)


def free_polymatroid(sizes: Sequence[int]) -> Polymatroid:
    """rk(A) = sum of sizes over A"""
    sizes = tuple(sizes)
    return polymatroid_from_function(
        len(sizes), lambda mask: sum(sizes[i] for i in members(mask))
    )


def polymatroid_from_matroid_partition(
    matroid_rank: Sequence[int], parts: Sequence[Sequence[int]]
) -> Polymatroid:
    """Polymatroid whose element i is the union of the matroid elements in parts[i]"""
    part_masks = [mask_of(part) for part in parts]

    def rank_of(mask: int) -> int:
        union = 0
        for i in members(mask):
            union |= part_masks[i]
        return matroid_rank[union]

    return polymatroid_from_function(len(parts), rank_of)


def closure_set(poly: Polymatroid, mask: int) -> int:
    """Smallest flat containing ``mask``"""
    r = poly.rk(mask)
    closed = mask
    for i in range(poly.ground_size):
        bit = 1 << i
        if not mask & bit and poly.rk(mask | bit) == r:
            closed |= bit
    return closed


def flats_enumerate(poly: Polymatroid) -> List[Tuple[int, int]]:
    """All flats with their ranks, in bitmask order"""
    return [(mask, poly.rk(mask)) for mask in range(1 << poly.ground_size) if poly.is_flat(mask)]


def _subset_sums(s: Sequence[int]) -> List[int]:
    n = len(s)
    sums = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + s[low.bit_length() - 1]
    return sums


def is_independent(poly: Polymatroid, b: Sequence[int]) -> bool:
    """b(A) <= rk(A) for every subset A"""
    sums = _subset_sums(b)
    return all(sums[mask] <= poly.rk(mask) for mask in range(1 << poly.ground_size))


def bases(poly: Polymatroid) -> List[Multiset]:
    """Independent multisets of size rk(E), lexicographic order"""
    target = poly.rank
    bound = cube_size(poly.tight_cage())
    if bound > settings.BRUTE_FORCE_BOUND:
        raise TooLarge("BRUTE_FORCE_BOUND", bound, settings.BRUTE_FORCE_BOUND)
    return [
        b for b in cube(poly.tight_cage())
        if sum(b) == target and is_independent(poly, b)
    ]


@dataclass(frozen=True)
class CagedPolymatroid:
    """A polymatroid with a cage n satisfying n_i >= rk({i})"""

    poly: Polymatroid
    cage: Multiset = field(default=())

    def __post_init__(self):
        cage = tuple(int(x) for x in self.cage)
        object.__setattr__(self, 'cage', cage)
        if len(cage) != self.poly.ground_size:
            raise InvalidCage(
                f"cage has {len(cage)} entries for a ground set of size {self.poly.ground_size}"
            )
        for i, n_i in enumerate(cage):
            if n_i < self.poly.singleton_rank(i):
                raise InvalidCage(
                    f"cage entry n_{i + 1} = {n_i} is below rk({{{i + 1}}}) = {self.poly.singleton_rank(i)}"
                )

    @classmethod
    def tight(cls, poly: Polymatroid) -> 'CagedPolymatroid':
        return cls(poly, poly.tight_cage())

    @property
    def ground_size(self) -> int:
        return self.poly.ground_size

    @property
    def rank(self) -> int:
        return self.poly.rank

    def is_tight(self) -> bool:
        return self.cage == self.poly.tight_cage()

    def check_in_cage(self, s: Sequence[int]) -> Multiset:
        s = tuple(int(x) for x in s)
        if len(s) != self.ground_size or any(x < 0 for x in s) or not leq(s, self.cage):
            raise CageExceeded(s, self.cage)
        return s

    def __str__(self) -> str:
        return f"CagedPolymatroid(N={self.ground_size}, rank={self.rank}, cage={format_multiset(self.cage)})"


def multiset_rank(caged: CagedPolymatroid, s: Sequence[int]) -> int:
    """
    min over B of rk(B) + sum of s_i for i outside B

    Args:
        caged (CagedPolymatroid): Polymatroid and cage
        s (Sequence[int]): Multiset inside the cage

    Returns:
        int: Rank of the multiset
    """
    s = caged.check_in_cage(s)
    poly = caged.poly
    sums = _subset_sums(s)
    total = sums[poly.full_mask]
    return min(poly.rk(mask) + total - sums[mask] for mask in range(1 << poly.ground_size))


class RankCache:
    """Memoized multiset ranks for one caged polymatroid.

    Each call that needs many ranks builds its own cache; no cache is stored
    on a shared value.
    """

    def __init__(self, caged: CagedPolymatroid):
        self.caged = caged
        self._ranks: Dict[Multiset, int] = {}

    def __call__(self, s: Sequence[int]) -> int:
        key = tuple(s)
        value = self._ranks.get(key)
        if value is None:
            value = multiset_rank(self.caged, key)
            self._ranks[key] = value
        return value


def basis_of_multiset(caged: CagedPolymatroid, s: Sequence[int]) -> Multiset:
    """Greedy maximal independent multiset below s, raising indices in ascending order"""
    s = caged.check_in_cage(s)
    poly = caged.poly
    b = [0] * len(s)
    for i in range(len(s)):
        while b[i] < s[i]:
            b[i] += 1
            if not is_independent(poly, b):
                b[i] -= 1
                break
    return tuple(b)


def bases_of_multiset(caged: CagedPolymatroid, s: Sequence[int]) -> List[Multiset]:
    """Every maximal independent multiset below s, lexicographic order"""
    s = caged.check_in_cage(s)
    bound = cube_size(s)
    if bound > settings.BRUTE_FORCE_BOUND:
        raise TooLarge("BRUTE_FORCE_BOUND", bound, settings.BRUTE_FORCE_BOUND)
    target = multiset_rank(caged, s)
    return [b for b in cube(s) if sum(b) == target and is_independent(caged.poly, b)]


def brute_force_multiset_rank(caged: CagedPolymatroid, s: Sequence[int]) -> int:
    """Largest independent multiset below s, found exhaustively"""
    s = caged.check_in_cage(s)
    bound = cube_size(s)
    if bound > settings.BRUTE_FORCE_BOUND:
        raise TooLarge("BRUTE_FORCE_BOUND", bound, settings.BRUTE_FORCE_BOUND)
    return max(sum(b) for b in cube(s) if is_independent(caged.poly, b))


def polymatroids_equivalent(first: Polymatroid, second: Polymatroid) -> bool:
    """Equal up to a bijection of ground sets"""
    if first.ground_size != second.ground_size or first.rank != second.rank:
        return False
    if sorted(first.rank_table) != sorted(second.rank_table):
        return False
    n = first.ground_size
    for perm in permutations(range(n)):
        if perm_singletons_match(first, second, perm) and all(
            first.rk(mask) == second.rk(mask_of(perm[i] for i in members(mask)))
            for mask in range(1 << n)
        ):
            return True
    return False


def perm_singletons_match(first: Polymatroid, second: Polymatroid, perm: Sequence[int]) -> bool:
    return all(first.singleton_rank(i) == second.singleton_rank(perm[i]) for i in range(len(perm)))

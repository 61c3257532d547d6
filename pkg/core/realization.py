"""Polymatroids realized by rational subspaces of a product of coordinate blocks.

A subspace V of Q^{n_1} x ... x Q^{n_N} is stored by a row-reduced basis.
Its polymatroid has rk(A) = dim of the projection of V to the blocks in A,
and every rank question reduces to the rank of a column submatrix.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from config.logging_config import get_logger
from config.settings import settings
from core.errors import DimensionMismatch, NotPG, RankZero, RetryLimit, TooLarge, TranslateChangedPolymatroid
from core.linalg import (
    Matrix,
    column_rank,
    determinant,
    matmul,
    nullspace,
    orthogonal_complement_of_vector,
    rank,
    rref,
    transpose,
)
from core.operations import truncate
from core.polymatroid import (
    CagedPolymatroid,
    Multiset,
    Polymatroid,
    RankCache,
    cube,
    cube_size,
    members,
    polymatroid_from_function,
)

logger = get_logger('realization')


@dataclass(frozen=True)
class RationalSubspace:
    """Row-reduced basis of a subspace, with the block widths as cage"""

    cage: Multiset
    rows: Matrix

    @classmethod
    def from_rows(cls, cage: Sequence[int], rows: Sequence[Sequence]) -> 'RationalSubspace':
        cage = tuple(int(n) for n in cage)
        width = sum(cage)
        for k, row in enumerate(rows):
            if len(row) != width:
                raise DimensionMismatch(f"row {k + 1} has {len(row)} entries, blocks need {width}")
        if not rows:
            return cls(cage, ())
        reduced, _ = rref(rows)
        return cls(cage, reduced)

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return sum(self.cage)

    @property
    def ground_size(self) -> int:
        return len(self.cage)

    def block_offset(self, i: int) -> int:
        return sum(self.cage[:i])

    def columns_of(self, mask: int) -> List[int]:
        columns = []
        for i in members(mask):
            start = self.block_offset(i)
            columns.extend(range(start, start + self.cage[i]))
        return columns

    def killed_columns(self, s: Sequence[int]) -> List[int]:
        """Coordinates (i, 1..s_i) that vanish on the stabilizer of s"""
        columns = []
        for i, s_i in enumerate(s):
            start = self.block_offset(i)
            columns.extend(range(start, start + s_i))
        return columns


def dimension(subspace: RationalSubspace) -> int:
    return subspace.dimension


def polymatroid_from_subspace(subspace: RationalSubspace) -> Polymatroid:
    return polymatroid_from_function(
        subspace.ground_size,
        lambda mask: column_rank(subspace.rows, subspace.columns_of(mask)),
    )


def caged_from_subspace(subspace: RationalSubspace) -> CagedPolymatroid:
    return CagedPolymatroid(polymatroid_from_subspace(subspace), subspace.cage)


def stabilizer_codimension(subspace: RationalSubspace, s: Sequence[int]) -> int:
    """codim of V intersected with the stabilizer of s, inside V"""
    return column_rank(subspace.rows, subspace.killed_columns(s))


def stabilizer_intersection(subspace: RationalSubspace, s: Sequence[int]) -> RationalSubspace:
    columns = subspace.killed_columns(s)
    if not subspace.rows or not columns:
        return subspace
    restricted = transpose([[row[c] for c in columns] for row in subspace.rows])
    combos = nullspace(restricted, subspace.dimension)
    return RationalSubspace.from_rows(subspace.cage, matmul(combos, subspace.rows) if combos else ())


def codim_in_self(subspace: RationalSubspace, sub: RationalSubspace) -> int:
    """Codimension of sub inside subspace; sub must be contained in it"""
    if sub.cage != subspace.cage:
        raise DimensionMismatch(f"blocks {sub.cage} differ from {subspace.cage}")
    if sub.rows and rank(list(subspace.rows) + list(sub.rows)) != subspace.dimension:
        raise DimensionMismatch("subspace is not contained in the ambient subspace")
    return subspace.dimension - sub.dimension


def pg_violation(subspace: RationalSubspace) -> Optional[Tuple[Multiset, int, int]]:
    """First multiset whose rank differs from the stabilizer codimension"""
    size = cube_size(subspace.cage)
    if size > settings.LATTICE_SIZE_BOUND:
        raise TooLarge("LATTICE_SIZE_BOUND", size, settings.LATTICE_SIZE_BOUND)
    rank = RankCache(caged_from_subspace(subspace))
    for s in cube(subspace.cage):
        expected = rank(s)
        observed = stabilizer_codimension(subspace, s)
        if expected != observed:
            return tuple(s), expected, observed
    return None


def is_pg(subspace: RationalSubspace) -> bool:
    """Partially generic position: every multiset rank is a stabilizer codimension"""
    return pg_violation(subspace) is None


def require_pg(subspace: RationalSubspace) -> None:
    violation = pg_violation(subspace)
    if violation is not None:
        raise NotPG(*violation)


def block_translate(subspace: RationalSubspace, blocks: Sequence[Sequence[Sequence]]) -> RationalSubspace:
    """Right-multiply by the block-diagonal matrix with the given blocks"""
    if len(blocks) != subspace.ground_size:
        raise DimensionMismatch(f"{len(blocks)} blocks for {subspace.ground_size} factors")
    width = subspace.width
    full = [[Fraction(0)] * width for _ in range(width)]
    for i, block in enumerate(blocks):
        if len(block) != subspace.cage[i] or any(len(row) != subspace.cage[i] for row in block):
            raise DimensionMismatch(f"block {i + 1} is not {subspace.cage[i]} x {subspace.cage[i]}")
        start = subspace.block_offset(i)
        for a, row in enumerate(block):
            for b, value in enumerate(row):
                full[start + a][start + b] = Fraction(value)
    if not subspace.rows:
        return subspace
    return RationalSubspace.from_rows(subspace.cage, matmul(subspace.rows, full))


def _random_invertible(size: int, rng: random.Random, height: int) -> List[List[Fraction]]:
    while True:
        block = [[Fraction(rng.randint(-height, height)) for _ in range(size)] for _ in range(size)]
        if size == 0 or determinant(block) != 0:
            return block


def random_pg_translate(
    subspace: RationalSubspace,
    seed: Optional[int] = 0,
    retries: Optional[int] = None,
    height: Optional[int] = None,
) -> RationalSubspace:
    """A block-diagonal translate of V in partially generic position.

    Args:
        subspace: Subspace to move
        seed: Seed of the random block matrices
        retries: Number of draws before giving up, PG_RETRY_LIMIT by default
        height: Entries are drawn from [-height, height], RANDOM_COEFF_HEIGHT by default

    Returns:
        RationalSubspace: V itself when already partially generic, otherwise a translate

    Raises:
        TranslateChangedPolymatroid: If an invertible block-diagonal translate
            has a different polymatroid
        RetryLimit: If no draw is partially generic
    """
    if is_pg(subspace):
        return subspace
    retries = settings.PG_RETRY_LIMIT if retries is None else retries
    height = settings.RANDOM_COEFF_HEIGHT if height is None else height
    rng = random.Random(seed)
    original = polymatroid_from_subspace(subspace)
    for attempt in range(1, retries + 1):
        blocks = [_random_invertible(n_i, rng, height) for n_i in subspace.cage]
        candidate = block_translate(subspace, blocks)
        changed = polymatroid_from_subspace(candidate)
        if changed != original:
            mask = next(m for m in range(1 << subspace.ground_size) if changed.rk(m) != original.rk(m))
            logger.error(f"❌ block translate changed the rank of {mask:b} on draw {attempt}")
            raise TranslateChangedPolymatroid(mask, original.rk(mask), changed.rk(mask))
        if is_pg(candidate):
            logger.info(f"✅ found a partially generic translate after {attempt} draws")
            return candidate
        logger.debug(f"draw {attempt} is not partially generic")
    raise RetryLimit("partially generic translate", retries)


def project(subspace: RationalSubspace, mask: int) -> RationalSubspace:
    """Drop the blocks in ``mask``"""
    keep_mask = ((1 << subspace.ground_size) - 1) & ~mask
    columns = subspace.columns_of(keep_mask)
    cage = tuple(subspace.cage[i] for i in members(keep_mask))
    return RationalSubspace.from_rows(cage, [[row[c] for c in columns] for row in subspace.rows])


def intersect_hyperplane(subspace: RationalSubspace, normal: Sequence) -> RationalSubspace:
    """V intersected with {a : normal . a = 0}"""
    if len(normal) != subspace.width:
        raise DimensionMismatch(f"normal has {len(normal)} entries, blocks need {subspace.width}")
    weights = [sum((Fraction(x) * Fraction(h) for x, h in zip(row, normal)), Fraction(0)) for row in subspace.rows]
    if all(w == 0 for w in weights):
        return subspace
    combos = orthogonal_complement_of_vector(weights)
    return RationalSubspace.from_rows(subspace.cage, matmul(combos, subspace.rows) if combos else ())


def realize_truncation(
    subspace: RationalSubspace,
    mask: int,
    seed: Optional[int] = 0,
    retries: Optional[int] = None,
    height: Optional[int] = None,
) -> RationalSubspace:
    """Cut V by a random hyperplane living in the blocks of ``mask``"""
    poly = polymatroid_from_subspace(subspace)
    if poly.rank < 1 or poly.rk(mask) < 1:
        raise RankZero(f"cannot truncate a subspace at a set of rank {poly.rk(mask)}")
    expected = truncate(poly, mask)
    keep_pg = is_pg(subspace)
    retries = settings.PG_RETRY_LIMIT if retries is None else retries
    height = settings.RANDOM_COEFF_HEIGHT if height is None else height
    rng = random.Random(seed)
    columns = set(subspace.columns_of(mask))

    for attempt in range(1, retries + 1):
        normal = [
            Fraction(rng.randint(-height, height)) if c in columns else Fraction(0)
            for c in range(subspace.width)
        ]
        candidate = intersect_hyperplane(subspace, normal)
        if candidate.dimension != subspace.dimension - 1:
            continue
        if polymatroid_from_subspace(candidate) != expected:
            continue
        if keep_pg and not is_pg(candidate):
            continue
        logger.info(f"realized truncation after {attempt} draws")
        return candidate
    raise RetryLimit("truncation hyperplane", retries)


def intersect_subspaces(first: RationalSubspace, second: RationalSubspace) -> RationalSubspace:
    """Intersection of two subspaces of the same product of blocks"""
    if first.cage != second.cage:
        raise DimensionMismatch(f"blocks {first.cage} differ from {second.cage}")
    if not first.rows or not second.rows:
        return RationalSubspace(first.cage, ())
    stacked = list(first.rows) + list(second.rows)
    combos = [x[:first.dimension] for x in nullspace(transpose(stacked), len(stacked))]
    return RationalSubspace.from_rows(first.cage, matmul(combos, first.rows) if combos else ())


def flag_ranks(subspace: RationalSubspace) -> Dict[Multiset, int]:
    """codim of V in the intersection of the flag pieces V_{i,s_i}, for every s.

    Each piece V_{i,j} is V cut down by the first j coordinates of block i,
    and the pieces of different blocks are intersected as subspaces.
    """
    require_pg(subspace)
    pieces = {
        (i, j): stabilizer_intersection(subspace, tuple(j if k == i else 0 for k in range(subspace.ground_size)))
        for i, n_i in enumerate(subspace.cage)
        for j in range(n_i + 1)
    }
    ranks: Dict[Multiset, int] = {}
    for s in cube(subspace.cage):
        flag = subspace
        for i, s_i in enumerate(s):
            flag = intersect_subspaces(flag, pieces[(i, s_i)])
        ranks[tuple(s)] = codim_in_self(subspace, flag)
    return ranks


def lift_matroid_ranks(subspace: RationalSubspace) -> List[int]:
    """Rank of every set of columns, as a table indexed by column bitmask"""
    if subspace.width > settings.ORACLE_MAX_LIFT_SIZE:
        raise TooLarge("ORACLE_MAX_LIFT_SIZE", subspace.width, settings.ORACLE_MAX_LIFT_SIZE)
    return [
        column_rank(subspace.rows, members(subset))
        for subset in range(1 << subspace.width)
    ]


def check_projection_pg(subspace: RationalSubspace) -> bool:
    """Projections of a partially generic subspace stay partially generic"""
    return all(is_pg(project(subspace, 1 << i)) for i in range(subspace.ground_size))

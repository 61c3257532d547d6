"""Unipotent action on products of projective spaces.

The group of each factor is the additive group of Q^n acting on P^n through
lower-triangular Toeplitz matrices built from complete Bell polynomials. The
torus Q^* acts by weighted rescaling. All arithmetic is exact.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, List, Sequence, Tuple

from config.logging_config import get_logger
from core.errors import DimensionMismatch, InvalidPoint, ZeroScalar
from core.linalg import Matrix, identity, mat_vec, matmul
from core.polymatroid import Multiset
from core.realization import RationalSubspace

logger = get_logger('ht_action')


def _partitions(k: int, largest: int) -> Iterator[Tuple[int, ...]]:
    """Partitions of k into parts of size at most ``largest``, parts descending"""
    if k == 0:
        yield ()
        return
    for part in range(min(k, largest), 0, -1):
        for rest in _partitions(k - part, part):
            yield (part,) + rest


@lru_cache(maxsize=None)
def _partition_list(k: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(_partitions(k, k))


def bell(k: int, xs: Sequence) -> Fraction:
    """Complete exponential Bell polynomial B_k(x_1, ..., x_k)"""
    if k < 0:
        raise ValueError("Bell polynomial degree must be nonnegative")
    if k == 0:
        return Fraction(1)
    if len(xs) < k:
        raise DimensionMismatch(f"B_{k} needs {k} arguments, got {len(xs)}")
    total = Fraction(0)
    for partition in _partition_list(k):
        multiplicities = {}
        for part in partition:
            multiplicities[part] = multiplicities.get(part, 0) + 1
        term = Fraction(factorial(k))
        for m, j in multiplicities.items():
            term *= (Fraction(xs[m - 1]) / factorial(m)) ** j / factorial(j)
        total += term
    return total


def rho(n: int, a: Sequence) -> Matrix:
    """(n+1) x (n+1) matrix of a in Q^n acting on P^n"""
    if len(a) != n:
        raise DimensionMismatch(f"rho_{n} needs {n} parameters, got {len(a)}")
    a = [Fraction(x) for x in a]
    arguments = [factorial(m + 1) * a[m] for m in range(n)]
    diagonals = [bell(k, arguments[:k]) / factorial(k) for k in range(n + 1)]
    return tuple(
        tuple(diagonals[i - j] if i >= j else Fraction(0) for j in range(n + 1))
        for i in range(n + 1)
    )


def torus_matrix(n: int, t) -> Matrix:
    """diag(1, t, ..., t^n)"""
    t = Fraction(t)
    if t == 0:
        raise ZeroScalar()
    return tuple(
        tuple(t ** i if i == j else Fraction(0) for j in range(n + 1))
        for i in range(n + 1)
    )


def weighted_rescale(a: Sequence, t) -> Tuple[Fraction, ...]:
    """(t a_1, t^2 a_2, ..., t^n a_n)"""
    t = Fraction(t)
    if t == 0:
        raise ZeroScalar()
    return tuple(Fraction(x) * t ** (m + 1) for m, x in enumerate(a))


def inverse_torus_matrix(n: int, t) -> Matrix:
    t = Fraction(t)
    if t == 0:
        raise ZeroScalar()
    return torus_matrix(n, 1 / t)


def conjugate_by_torus(n: int, a: Sequence, t) -> Matrix:
    """lambda(t) rho(a) lambda(t)^-1"""
    return matmul(matmul(torus_matrix(n, t), rho(n, a)), inverse_torus_matrix(n, t))


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^{n_1} x ... x P^{n_N}, each factor normalized so its first nonzero entry is 1"""

    factors: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def of(cls, factors: Sequence[Sequence]) -> 'ProjectivePoint':
        normalized = []
        for i, coordinates in enumerate(factors):
            coordinates = [Fraction(x) for x in coordinates]
            lead = next((x for x in coordinates if x != 0), None)
            if lead is None:
                raise InvalidPoint(i)
            normalized.append(tuple(x / lead for x in coordinates))
        return cls(tuple(normalized))

    @property
    def cage(self) -> Multiset:
        return tuple(len(factor) - 1 for factor in self.factors)


def act(a: Sequence[Sequence], point: ProjectivePoint) -> ProjectivePoint:
    """Factorwise action of a = (a_1, ..., a_N) with a_i in Q^{n_i}"""
    if len(a) != len(point.factors):
        raise DimensionMismatch(f"{len(a)} group factors for a point with {len(point.factors)} factors")
    moved = []
    for i, (a_i, coordinates) in enumerate(zip(a, point.factors)):
        n_i = len(coordinates) - 1
        if len(a_i) != n_i:
            raise DimensionMismatch(f"factor {i + 1}: group element has {len(a_i)} entries, expected {n_i}")
        moved.append(mat_vec(rho(n_i, a_i), coordinates))
    return ProjectivePoint.of(moved)


def torus_act(t, point: ProjectivePoint) -> ProjectivePoint:
    return ProjectivePoint.of(
        mat_vec(torus_matrix(len(coordinates) - 1, t), coordinates) for coordinates in point.factors
    )


def orbit_index(point: ProjectivePoint) -> Multiset:
    """s_i = n_i minus the position of the first nonzero coordinate"""
    indices = []
    for coordinates in point.factors:
        first = next(k for k, x in enumerate(coordinates) if x != 0)
        indices.append(len(coordinates) - 1 - first)
    return tuple(indices)


def fixed_point(n: int, k: int) -> Tuple[Fraction, ...]:
    """The torus-fixed point of P^n lying in the orbit with index k"""
    if not 0 <= k <= n:
        raise DimensionMismatch(f"orbit index {k} outside 0..{n}")
    return tuple(Fraction(1 if j == n - k else 0) for j in range(n + 1))


def orbit_representative(cage: Sequence[int], s: Sequence[int]) -> ProjectivePoint:
    if len(cage) != len(s):
        raise DimensionMismatch(f"multiset of length {len(s)} for {len(cage)} factors")
    return ProjectivePoint.of(fixed_point(n_i, s_i) for n_i, s_i in zip(cage, s))


def stabilizer_dim(cage: Sequence[int], s: Sequence[int]) -> int:
    """Dimension of the stabilizer of any point in the orbit O_s"""
    return sum(n_i - s_i for n_i, s_i in zip(cage, s))


def in_stabilizer(a: Sequence[Sequence], s: Sequence[int]) -> bool:
    """a fixes the orbit representative of s exactly when a_{i,1..s_i} vanish"""
    return all(all(Fraction(x) == 0 for x in a_i[:s_i]) for a_i, s_i in zip(a, s))


def base_point(cage: Sequence[int]) -> ProjectivePoint:
    return orbit_representative(cage, cage)


def iota(cage: Sequence[int], v: Sequence) -> ProjectivePoint:
    """rho(v) applied to [1:0:...:0] in every factor, i.e. the first columns"""
    if len(v) != sum(cage):
        raise DimensionMismatch(f"vector has {len(v)} entries, blocks need {sum(cage)}")
    factors: List[Tuple[Fraction, ...]] = []
    offset = 0
    for n_i in cage:
        block = v[offset:offset + n_i]
        offset += n_i
        factors.append(tuple(row[0] for row in rho(n_i, block)))
    return ProjectivePoint.of(factors)


def weighted_rescale_subspace(subspace: RationalSubspace, ts: Sequence) -> RationalSubspace:
    """Scale column (i, j) by t_i^j; the polymatroid and partial genericity are unchanged"""
    if len(ts) != subspace.ground_size:
        raise DimensionMismatch(f"{len(ts)} torus parameters for {subspace.ground_size} factors")
    scale = []
    for t, n_i in zip(ts, subspace.cage):
        t = Fraction(t)
        if t == 0:
            raise ZeroScalar()
        scale.extend(t ** (j + 1) for j in range(n_i))
    return RationalSubspace.from_rows(
        subspace.cage,
        [[x * c for x, c in zip(row, scale)] for row in subspace.rows],
    )


def is_identity(matrix: Matrix) -> bool:
    return matrix == identity(len(matrix))

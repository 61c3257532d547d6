"""Deletion, truncation, reduction and simplification of caged polymatroids"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from config.logging_config import get_logger
from core.errors import LoopReduction, RankZero, TooLarge
from core.lattice import enumerate_lattice, multiset_closure
from core.polymatroid import (
    CagedPolymatroid,
    Multiset,
    Polymatroid,
    RankCache,
    closure_set,
    componentwise_max,
    cube,
    flats_enumerate,
    format_multiset,
    leq,
    mask_of,
    members,
    polymatroid_from_function,
    polymatroids_equivalent,
)

logger = get_logger('operations')


def _compress(mask: int, keep: Sequence[int]) -> int:
    return mask_of(k for k, i in enumerate(keep) if mask >> i & 1)


def _expand(mask: int, keep: Sequence[int]) -> int:
    return mask_of(keep[k] for k in members(mask))


def relabel(poly: Polymatroid, order: Sequence[int]) -> Polymatroid:
    """New element k is old element order[k]"""
    order = tuple(order)
    return polymatroid_from_function(len(order), lambda mask: poly.rk(_expand(mask, order)))


def restrict(poly: Polymatroid, keep_mask: int) -> Polymatroid:
    keep = members(keep_mask)
    return polymatroid_from_function(len(keep), lambda mask: poly.rk(_expand(mask, keep)))


def delete(poly: Polymatroid, mask: int) -> Polymatroid:
    """Restrict the rank function to the complement of ``mask``"""
    return restrict(poly, poly.full_mask & ~mask)


def delete_caged(caged: CagedPolymatroid, mask: int) -> CagedPolymatroid:
    keep = members(caged.poly.full_mask & ~mask)
    return CagedPolymatroid(delete(caged.poly, mask), tuple(caged.cage[i] for i in keep))


def truncate(poly: Polymatroid, mask: int) -> Polymatroid:
    """Lower by one the rank of every set whose rank does not grow when ``mask`` is added.

    Args:
        poly: Polymatroid to truncate
        mask: Subset to truncate at; only its closure matters

    Returns:
        Polymatroid: The truncation, of rank rk(P) - 1

    Raises:
        RankZero: If rk(mask) is 0. Such a mask consists of loops, so no set
            gains rank from it and the empty set would drop to rank -1. This
            covers rk(P) = 0 as well.
    """
    if poly.rk(mask) < 1:
        raise RankZero(f"cannot truncate at a set of rank {poly.rk(mask)}")

    def rank_of(subset: int) -> int:
        r = poly.rk(subset)
        return r - 1 if r == poly.rk(subset | mask) else r

    return polymatroid_from_function(poly.ground_size, rank_of)


def truncate_caged(caged: CagedPolymatroid, mask: int) -> CagedPolymatroid:
    return CagedPolymatroid(truncate(caged.poly, mask), caged.cage)


def check_truncation_closure(poly: Polymatroid, mask: int) -> bool:
    """Truncating at a set and at its closure give the same polymatroid"""
    return truncate(poly, mask) == truncate(poly, closure_set(poly, mask))


def reduction_polymatroid(poly: Polymatroid, i: int) -> Polymatroid:
    """Lower rk(A) by one exactly when rk(A) = rk(A - i) + rk(i)"""
    bit = 1 << i
    rk_i = poly.singleton_rank(i)
    if rk_i == 0:
        raise LoopReduction(i)

    def rank_of(mask: int) -> int:
        r = poly.rk(mask)
        return r - 1 if r == poly.rk(mask & ~bit) + rk_i else r

    return polymatroid_from_function(poly.ground_size, rank_of)


def reduce(caged: CagedPolymatroid, i: int) -> CagedPolymatroid:
    """Delete one copy of element i from the lift"""
    rk_i = caged.poly.singleton_rank(i)
    if rk_i == 0:
        raise LoopReduction(i)
    cage = caged.cage[:i] + (caged.cage[i] - 1,) + caged.cage[i + 1:]
    if caged.cage[i] > rk_i:
        return CagedPolymatroid(caged.poly, cage)
    return CagedPolymatroid(reduction_polymatroid(caged.poly, i), cage)


def deloop(caged: CagedPolymatroid) -> CagedPolymatroid:
    return delete_caged(caged, mask_of(caged.poly.loops()))


def adjoin_loop(caged: CagedPolymatroid, cage_entry: int = 0) -> CagedPolymatroid:
    """Append a rank-zero element with the given cage entry"""
    poly = caged.poly
    top = 1 << poly.ground_size
    extended = polymatroid_from_function(poly.ground_size + 1, lambda mask: poly.rk(mask & (top - 1)))
    return CagedPolymatroid(extended, caged.cage + (cage_entry,))


# Simplification

@dataclass(frozen=True)
class TraceStep:
    tag: str
    index: int
    result: CagedPolymatroid

    def describe(self) -> str:
        return f"{self.tag}({self.index + 1}) -> cage {format_multiset(self.result.cage)}"


@dataclass(frozen=True)
class SimplificationTrace:
    """Deloop and Reduce steps in the order they were taken.

    Each Reduce lowers the cage total by one, so there are at most sum(cage)
    of them. Deloop steps are not counted against that bound; there is at
    most one per element of the ground set.
    """

    start: CagedPolymatroid
    steps: Tuple[TraceStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def reductions(self) -> int:
        return sum(1 for step in self.steps if step.tag == "Reduce")

    @property
    def deloops(self) -> int:
        return sum(1 for step in self.steps if step.tag == "Deloop")


def _deloop_steps(caged: CagedPolymatroid, steps: List[TraceStep]) -> CagedPolymatroid:
    while caged.poly.loops():
        i = caged.poly.loops()[0]
        caged = delete_caged(caged, 1 << i)
        steps.append(TraceStep("Deloop", i, caged))
    return caged


def _reduction_pivots(caged: CagedPolymatroid) -> List[int]:
    poly = caged.poly
    return [
        i for i in range(poly.ground_size)
        if not poly.is_flat(1 << i) or caged.cage[i] > poly.singleton_rank(i)
    ]


def simplify(caged: CagedPolymatroid) -> Tuple[CagedPolymatroid, SimplificationTrace]:
    """Deloop and reduce until the polymatroid is simple with tight cage.

    Always reduces at the smallest eligible index, so the trace is
    deterministic. The trace holds at most sum(cage) Reduce steps and at most
    one Deloop step per element.
    """
    steps: List[TraceStep] = []
    current = _deloop_steps(caged, steps)
    while True:
        pivots = _reduction_pivots(current)
        if not pivots:
            break
        i = pivots[0]
        current = reduce(current, i)
        steps.append(TraceStep("Reduce", i, current))
        current = _deloop_steps(current, steps)

    logger.info(f"simplified {caged} to {current} in {len(steps)} steps")
    return current, SimplificationTrace(caged, tuple(steps))


def simplify_all_orders(caged: CagedPolymatroid, max_states: int = 5000) -> List[CagedPolymatroid]:
    """Simple endpoints reached by every choice of reduction order"""
    endpoints: List[CagedPolymatroid] = []
    seen: Set[CagedPolymatroid] = set()
    stack = [_deloop_steps(caged, [])]
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen.add(current)
        if len(seen) > max_states:
            raise TooLarge("simplification states", len(seen), max_states)
        pivots = _reduction_pivots(current)
        if not pivots:
            endpoints.append(current)
            continue
        for i in pivots:
            stack.append(_deloop_steps(reduce(current, i), []))
    return endpoints


def check_simplification_unique(caged: CagedPolymatroid) -> bool:
    endpoints = simplify_all_orders(caged)
    first = endpoints[0].poly
    return all(polymatroids_equivalent(first, other.poly) for other in endpoints[1:])


# Commutation with the lift

@dataclass(frozen=True)
class Delete:
    mask: int


@dataclass(frozen=True)
class Truncate:
    mask: int


@dataclass(frozen=True)
class Reduce:
    index: int


LiftOperation = Union[Delete, Truncate, Reduce]


def lift_commutation_discrepancy(caged: CagedPolymatroid, op: LiftOperation) -> Optional[Multiset]:
    """First multiset where operating before and after lifting disagree"""
    rank = RankCache(caged)
    if isinstance(op, Delete):
        reduced = delete_caged(caged, op.mask)
        reduced_rank = RankCache(reduced)
        keep = members(caged.poly.full_mask & ~op.mask)
        for t in cube(reduced.cage):
            s = [0] * caged.ground_size
            for k, i in enumerate(keep):
                s[i] = t[k]
            if reduced_rank(t) != rank(s):
                return tuple(t)
        return None

    if isinstance(op, Truncate):
        truncated = RankCache(truncate_caged(caged, op.mask))
        filled = tuple(n_i if op.mask >> i & 1 else 0 for i, n_i in enumerate(caged.cage))
        for s in cube(caged.cage):
            r = rank(s)
            expected = r - 1 if r == rank(componentwise_max(s, filled)) else r
            if truncated(s) != expected:
                return tuple(s)
        return None

    reduced = reduce(caged, op.index)
    reduced_rank = RankCache(reduced)
    for s in cube(reduced.cage):
        if reduced_rank(s) != rank(s):
            return tuple(s)
    return None


def verify_lift_commutes(caged: CagedPolymatroid, op: LiftOperation) -> bool:
    return lift_commutation_discrepancy(caged, op) is None


# Effect on flats

def check_deletion_flats(poly: Polymatroid, mask: int) -> bool:
    """Flats of the deletion are the flats of P with the deleted part removed"""
    keep = members(poly.full_mask & ~mask)
    deleted = delete(poly, mask)
    actual = {flat for flat, _ in flats_enumerate(deleted)}
    predicted = {_compress(flat & ~mask, keep) for flat, _ in flats_enumerate(poly)}
    return actual == predicted


def check_local_product(caged: CagedPolymatroid, i: int) -> Optional[Multiset]:
    """Where the closure leaves block i open, flatness is decided after deleting i"""
    rank = RankCache(caged)
    deleted = delete_caged(caged, 1 << i)
    deleted_lattice = enumerate_lattice(deleted)
    lattice = enumerate_lattice(caged)
    for s in cube(caged.cage):
        if multiset_closure(caged, s, rank)[i] >= caged.cage[i]:
            continue
        projected = s[:i] + s[i + 1:]
        if deleted_lattice.contains(projected) != lattice.contains(s):
            return tuple(s)
    return None


def check_truncation_flats(caged: CagedPolymatroid, flat_mask: int) -> Optional[Multiset]:
    """Flats and ranks of the truncation at a flat, predicted from the original lattice"""
    rank = RankCache(caged)
    lattice = enumerate_lattice(caged)
    truncated = enumerate_lattice(truncate_caged(caged, flat_mask))
    filled = tuple(n_i if flat_mask >> i & 1 else 0 for i, n_i in enumerate(caged.cage))

    predicted: Dict[Multiset, int] = {}
    for s, r in zip(lattice.elements, lattice.ranks):
        if leq(filled, s):
            predicted[s] = r - 1
            continue
        stays = all(
            not leq(filled, multiset_closure(caged, s[:i] + (s[i] + 1,) + s[i + 1:], rank))
            for i in range(caged.ground_size)
            if s[i] < caged.cage[i]
        )
        if stays:
            predicted[s] = r

    actual = dict(zip(truncated.elements, truncated.ranks))
    for s in sorted(set(predicted) | set(actual)):
        if predicted.get(s) != actual.get(s):
            return s
    return None

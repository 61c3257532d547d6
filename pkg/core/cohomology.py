"""Graded ring on the combinatorial flats with an exact multiplication table.

The product of basis classes y_s and y_t is defined through bases of the two
flats: their sum, clamped at the singleton ranks and closed, is the target
flat, and the scalar comes from a coefficient function on independent
multisets.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product as cartesian
from math import comb, prod
from typing import Dict, List, Optional, Sequence, Tuple

from config.logging_config import get_logger
from config.settings import settings
from core.errors import InvalidCage, NoAdditiveBasisPair, NotAFlat
from core.lattice import ComboFlatLattice, enumerate_lattice, is_combinatorial_flat, multiset_closure
from core.polymatroid import (
    CagedPolymatroid,
    Multiset,
    RankCache,
    add,
    basis_of_multiset,
    bases_of_multiset,
    componentwise_min,
    cube,
    format_multiset,
    is_independent,
    leq,
    unit,
)

logger = get_logger('cohomology')

# sparse element of the ring: lattice index -> coefficient
RingElement = Dict[int, Fraction]


def basis_label(s: Sequence[int]) -> str:
    return f"y_({format_multiset(s)})"


class CoeffMode(str, Enum):
    CONJECTURAL_BINOMIAL = "binomial"
    ALL_ONES = "ones"


def coefficient(caged: CagedPolymatroid, b: Sequence[int], mode: CoeffMode) -> Fraction:
    if mode == CoeffMode.ALL_ONES:
        return Fraction(1)
    return Fraction(prod(comb(n_i, b_i) for n_i, b_i in zip(caged.cage, b)))


def _clamped_sum(caged: CagedPolymatroid, b: Sequence[int], c: Sequence[int]) -> Multiset:
    poly = caged.poly
    return tuple(min(x + y, poly.singleton_rank(i)) for i, (x, y) in enumerate(zip(b, c)))


def cup(caged: CagedPolymatroid, s: Sequence[int], t: Sequence[int], rank=None) -> Multiset:
    """Closure of the clamped sum of the greedy bases of two flats"""
    rank = rank or RankCache(caged)
    for flat in (s, t):
        if not is_combinatorial_flat(caged, flat, rank):
            raise NotAFlat(flat)
    b = basis_of_multiset(caged, s)
    c = basis_of_multiset(caged, t)
    return multiset_closure(caged, _clamped_sum(caged, b, c), rank)


def check_cup_well_defined(caged: CagedPolymatroid, s: Sequence[int], t: Sequence[int]) -> bool:
    """Every pair of bases gives the same cup"""
    rank = RankCache(caged)
    results = {
        multiset_closure(caged, _clamped_sum(caged, b, c), rank)
        for b in bases_of_multiset(caged, s)
        for c in bases_of_multiset(caged, t)
    }
    return len(results) == 1


def check_cup_bounds(caged: CagedPolymatroid, s: Sequence[int], t: Sequence[int], rank=None) -> bool:
    """cup(s, t) lies above the meet of s and t and has rank at most rk(s) + rk(t)"""
    rank = rank or RankCache(caged)
    product = cup(caged, s, t, rank)
    return leq(componentwise_min(s, t), product) and rank(product) <= rank(s) + rank(t)


@dataclass
class RingDiagnostic:
    s: Multiset
    t: Multiset
    detail: str

    def as_error(self) -> NoAdditiveBasisPair:
        return NoAdditiveBasisPair(self.s, self.t, self.detail)


@dataclass
class CohomologyRing:
    """Multiplication table on the basis {y_s : s a combinatorial flat}"""

    lattice: ComboFlatLattice
    mode: CoeffMode
    table: Dict[Tuple[int, int], Optional[Tuple[int, Fraction]]]
    diagnostics: List[RingDiagnostic] = field(default_factory=list)

    @property
    def caged(self) -> CagedPolymatroid:
        return self.lattice.caged

    def degree(self, k: int) -> int:
        return self.lattice.ranks[k]

    def basis_element(self, s: Sequence[int]) -> RingElement:
        return {self.lattice.index_of(s): Fraction(1)}

    def unit(self) -> RingElement:
        return {self.lattice.bottom: Fraction(1)}

    def multiply_basis(self, x: int, y: int) -> RingElement:
        entry = self.table[(x, y)]
        if entry is None:
            return {}
        target, scalar = entry
        return {target: scalar}

    def multiply(self, first: RingElement, second: RingElement) -> RingElement:
        result: RingElement = {}
        for x, a in first.items():
            for y, b in second.items():
                entry = self.table[(x, y)]
                if entry is None:
                    continue
                target, scalar = entry
                result[target] = result.get(target, Fraction(0)) + a * b * scalar
        return {k: v for k, v in result.items() if v != 0}

    def scale(self, element: RingElement, factor: Fraction) -> RingElement:
        if factor == 0:
            return {}
        return {k: v * factor for k, v in element.items()}


def _search_basis_pairs(
    caged: CagedPolymatroid,
    s_bases: List[Multiset],
    t_bases: List[Multiset],
    target: Multiset,
    mode: CoeffMode,
) -> Tuple[List[Fraction], bool]:
    scalars: List[Fraction] = []
    inspected = 0
    for b, c in cartesian(s_bases, t_bases):
        inspected += 1
        if inspected > settings.BASIS_PAIR_LIMIT:
            return scalars, True
        total = add(b, c)
        if not leq(total, target) or not is_independent(caged.poly, total):
            continue
        scalars.append(
            coefficient(caged, total, mode) / (coefficient(caged, b, mode) * coefficient(caged, c, mode))
        )
    return scalars, False


def structure_constants(
    caged: CagedPolymatroid,
    mode: CoeffMode = CoeffMode.CONJECTURAL_BINOMIAL,
    lattice: Optional[ComboFlatLattice] = None,
    strict: bool = False,
) -> CohomologyRing:
    """Multiplication table for every ordered pair of combinatorial flats.

    A product is nonzero exactly when the ranks add. Its scalar is taken
    from the first additive pair of bases in lexicographic order. When the
    pairs disagree the first scalar is kept and a diagnostic is recorded, or
    raised when ``strict``. No additive pair at all always raises.

    Args:
        caged (CagedPolymatroid): Polymatroid and cage
        mode (CoeffMode): Coefficient function on independent multisets
        lattice (Optional[ComboFlatLattice]): Precomputed lattice of flats
        strict (bool): Raise on the first basis-dependent scalar

    Returns:
        CohomologyRing: Table keyed by ordered pairs of lattice indices
    """
    if lattice is None:
        lattice = enumerate_lattice(caged)
    rank = RankCache(caged)
    elements = lattice.elements
    bases = {k: bases_of_multiset(caged, s) for k, s in enumerate(elements)}
    greedy = {k: basis_of_multiset(caged, s) for k, s in enumerate(elements)}

    table: Dict[Tuple[int, int], Optional[Tuple[int, Fraction]]] = {}
    diagnostics: List[RingDiagnostic] = []
    for x, s in enumerate(elements):
        for y, t in enumerate(elements):
            target = multiset_closure(caged, _clamped_sum(caged, greedy[x], greedy[y]), rank)
            z = lattice.index_of(target)
            if lattice.ranks[z] != lattice.ranks[x] + lattice.ranks[y]:
                table[(x, y)] = None
                continue
            scalars, truncated = _search_basis_pairs(caged, bases[x], bases[y], target, mode)
            if not scalars:
                raise NoAdditiveBasisPair(s, t, "ranks add but no pair of bases sums to a basis of the product")
            if len(set(scalars)) > 1:
                diagnostic = RingDiagnostic(
                    s, t, f"scalar depends on the basis pair: {sorted(set(str(q) for q in scalars))}"
                )
                if strict:
                    raise diagnostic.as_error()
                diagnostics.append(diagnostic)
            if truncated:
                logger.warning(f"basis pair search for {s} * {t} stopped at {settings.BASIS_PAIR_LIMIT} pairs")
            table[(x, y)] = (z, scalars[0])

    logger.info(
        f"built {mode.value} ring with {len(elements)} basis classes and {len(diagnostics)} diagnostics"
    )
    return CohomologyRing(lattice, mode, table, diagnostics)


def matroid_product_violation(ring: CohomologyRing) -> Optional[Tuple[Multiset, Multiset]]:
    """First pair whose product is neither zero nor y of their join, or None.

    Only defined for a cage of all ones, where the polymatroid is a matroid
    and every coefficient is one.
    """
    if any(n_i != 1 for n_i in ring.caged.cage):
        raise InvalidCage(f"matroid products need a cage of ones, got {ring.caged.cage}")
    lattice = ring.lattice
    for (x, y), entry in sorted(ring.table.items()):
        if entry is not None and entry != (lattice.join(x, y), Fraction(1)):
            return lattice.elements[x], lattice.elements[y]
    return None


def hilbert(ring: CohomologyRing) -> List[int]:
    """Dimension of each graded piece"""
    counts = [0] * (ring.lattice.height + 1)
    for r in ring.lattice.ranks:
        counts[r] += 1
    return counts


@dataclass
class RingAxiomReport:
    failure: Optional[str] = None
    sampled: bool = False
    triples: int = 0

    @property
    def passed(self) -> bool:
        return self.failure is None

    def status(self) -> str:
        if self.failure:
            return f"fail: {self.failure}"
        return f"sampled pass ({self.triples} triples)" if self.sampled else "pass"


def check_ring_axioms(ring: CohomologyRing, sample_size: Optional[int] = None) -> RingAxiomReport:
    """Check unit, grading, commutativity and associativity of the table.

    Args:
        ring: Multiplication table to check
        sample_size: When given and smaller than the basis, associativity runs
            on an evenly strided sample of that many basis classes and the
            report is marked as sampled

    Returns:
        RingAxiomReport: The first failure, if any, and how many triples were checked
    """
    lattice = ring.lattice
    size = len(lattice)
    bottom = lattice.bottom
    labels = lattice.labels()
    report = RingAxiomReport()

    for x in range(size):
        if ring.multiply_basis(bottom, x) != {x: Fraction(1)}:
            report.failure = f"unit fails on y_({labels[x]})"
            return report

    for x in range(size):
        for y in range(size):
            left = ring.multiply_basis(x, y)
            if left != ring.multiply_basis(y, x):
                report.failure = f"y_({labels[x]}) and y_({labels[y]}) do not commute"
                return report
            for z in left:
                if lattice.ranks[z] != lattice.ranks[x] + lattice.ranks[y]:
                    report.failure = f"y_({labels[x]}) * y_({labels[y]}) leaves degree {lattice.ranks[x] + lattice.ranks[y]}"
                    return report

    basis = range(size)
    if sample_size is not None and 0 < sample_size < size:
        basis = range(0, size, -(-size // sample_size))
        report.sampled = True
        logger.warning(f"⚠️ associativity sampled on {len(basis)} of {size} basis classes")
    for x, y, z in cartesian(basis, repeat=3):
        report.triples += 1
        left = ring.multiply(ring.multiply_basis(x, y), {z: Fraction(1)})
        right = ring.multiply({x: Fraction(1)}, ring.multiply_basis(y, z))
        if left != right:
            report.failure = f"associativity fails on y_({labels[x]}), y_({labels[y]}), y_({labels[z]})"
            return report
    return report


# Presentation by generators

@dataclass
class PresentationReport:
    dependent_vanish: bool = True
    proportional: bool = True
    independent_monomials: bool = True
    witness: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.dependent_vanish and self.proportional and self.independent_monomials

    def __bool__(self) -> bool:
        return self.passed


def generator(ring: CohomologyRing, i: int) -> RingElement:
    """x_i = c(e_i) y of the closure of e_i, zero for a loop"""
    caged = ring.caged
    e_i = unit(caged.ground_size, i)
    if caged.poly.singleton_rank(i) == 0:
        return {}
    closure = multiset_closure(caged, e_i)
    return ring.scale(ring.basis_element(closure), coefficient(caged, e_i, ring.mode))


def monomial(ring: CohomologyRing, b: Sequence[int], cache: Optional[Dict[Multiset, RingElement]] = None) -> RingElement:
    """Product of x_i^{b_i}"""
    cache = cache if cache is not None else {}
    b = tuple(b)
    if b in cache:
        return cache[b]
    if sum(b) == 0:
        value = ring.unit()
    else:
        i = max(k for k, v in enumerate(b) if v > 0)
        lower = b[:i] + (b[i] - 1,) + b[i + 1:]
        value = ring.multiply(monomial(ring, lower, cache), generator(ring, i))
    cache[b] = value
    return value


def check_presentation(caged: CagedPolymatroid, ring: CohomologyRing) -> PresentationReport:
    """Evaluate every monomial of degree at most rk(P) inside the cage"""
    report = PresentationReport()
    cache: Dict[Multiset, RingElement] = {}
    rank = RankCache(caged)
    by_closure: Dict[Multiset, Tuple[Multiset, RingElement]] = {}

    for b in cube(caged.cage):
        if sum(b) > caged.rank:
            continue
        value = monomial(ring, b, cache)
        if not is_independent(caged.poly, b):
            if value and report.dependent_vanish:
                report.dependent_vanish = False
                report.witness = report.witness or f"dependent monomial {b} is nonzero"
            continue

        closure = multiset_closure(caged, b, rank)
        expected = ring.scale(ring.basis_element(closure), coefficient(caged, b, ring.mode))
        if value != expected and report.independent_monomials:
            report.independent_monomials = False
            report.witness = report.witness or f"monomial {b} is not c_b {basis_label(closure)}"

        if closure in by_closure:
            other, other_value = by_closure[closure]
            lhs = ring.scale(value, coefficient(caged, other, ring.mode))
            rhs = ring.scale(other_value, coefficient(caged, b, ring.mode))
            if lhs != rhs and report.proportional:
                report.proportional = False
                report.witness = report.witness or f"monomials {other} and {b} are not proportional"
        else:
            by_closure[closure] = (b, value)

    logger.info(f"presentation check ({ring.mode.value}): {'pass' if report.passed else report.witness}")
    return report

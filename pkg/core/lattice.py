"""Lattices of combinatorial flats and abstract graded lattices.

A :class:`ComboFlatLattice` is computed from a caged polymatroid. An
:class:`AbstractGradedLattice` is any finite poset given by its cover
relation; :func:`check_axioms` decides whether it is the lattice of
combinatorial flats of some polymatroid and :func:`reconstruct_polymatroid`
recovers that polymatroid.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from config.logging_config import get_logger
from config.settings import settings
from core.errors import AxiomsFailed, NoMinimum, NotAFlat, NotGraded, TooLarge
from core.polymatroid import (
    CagedPolymatroid,
    Multiset,
    Polymatroid,
    RankCache,
    componentwise_max,
    componentwise_min,
    cube,
    cube_size,
    flats_enumerate,
    format_multiset,
    format_subset,
    leq,
    members,
    polymatroid_from_function,
)

logger = get_logger('lattice')


def multiset_closure(caged: CagedPolymatroid, s: Sequence[int], rank=None) -> Multiset:
    """Fill every block whose next copy does not raise the rank, until nothing changes"""
    rank = rank or RankCache(caged)
    current = list(caged.check_in_cage(s))
    r = rank(current)
    changed = True
    while changed:
        changed = False
        for i, n_i in enumerate(caged.cage):
            if current[i] >= n_i:
                continue
            current[i] += 1
            if rank(current) == r:
                current[i] = n_i
                changed = True
            else:
                current[i] -= 1
    return tuple(current)


def is_combinatorial_flat(caged: CagedPolymatroid, s: Sequence[int], rank=None) -> bool:
    rank = rank or RankCache(caged)
    s = caged.check_in_cage(s)
    r = rank(s)
    for i, n_i in enumerate(caged.cage):
        if s[i] < n_i and rank(s[:i] + (s[i] + 1,) + s[i + 1:]) <= r:
            return False
    return True


@dataclass(frozen=True)
class ComboFlatLattice:
    """Combinatorial flats of a caged polymatroid, ordered by rank then lexicographically"""

    caged: CagedPolymatroid
    elements: Tuple[Multiset, ...]
    ranks: Tuple[int, ...]
    covers: Tuple[Tuple[int, int], ...]
    _index: Dict[Multiset, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def height(self) -> int:
        return self.ranks[-1] if self.ranks else 0

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.elements) - 1

    def index_of(self, s: Sequence[int]) -> int:
        key = tuple(s)
        if key not in self._index:
            raise NotAFlat(key)
        return self._index[key]

    def contains(self, s: Sequence[int]) -> bool:
        return tuple(s) in self._index

    def rank_of(self, s: Sequence[int]) -> int:
        return self.ranks[self.index_of(s)]

    def join(self, first: int, second: int) -> int:
        """First upper bound in (rank, lex) order; flats above the join have larger rank"""
        merged = componentwise_max(self.elements[first], self.elements[second])
        return next(k for k in range(max(first, second), len(self.elements)) if leq(merged, self.elements[k]))

    def meet(self, first: int, second: int) -> int:
        return self._index[componentwise_min(self.elements[first], self.elements[second])]

    def labels(self) -> Tuple[str, ...]:
        return tuple(format_multiset(s) for s in self.elements)

    def to_abstract(self) -> 'AbstractGradedLattice':
        return AbstractGradedLattice(self.labels(), self.covers, self.ranks)


def enumerate_lattice(caged: CagedPolymatroid, bound: Optional[int] = None) -> ComboFlatLattice:
    """
    Every combinatorial flat with its rank, and the cover relation

    Args:
        caged (CagedPolymatroid): Polymatroid and cage
        bound (Optional[int]): Largest cage cube to scan, LATTICE_SIZE_BOUND by default

    Returns:
        ComboFlatLattice: Flats sorted by rank then lexicographically
    """
    bound = bound if bound is not None else settings.LATTICE_SIZE_BOUND
    size = cube_size(caged.cage)
    if size > bound:
        raise TooLarge("LATTICE_SIZE_BOUND", size, bound)

    rank = RankCache(caged)
    flats = [s for s in cube(caged.cage) if is_combinatorial_flat(caged, s, rank)]
    flats.sort(key=lambda s: (rank(s), s))
    ranks = [rank(s) for s in flats]

    by_rank: Dict[int, List[int]] = {}
    for k, r in enumerate(ranks):
        by_rank.setdefault(r, []).append(k)

    covers = []
    for r, lower in sorted(by_rank.items()):
        for x in lower:
            for y in by_rank.get(r + 1, ()):
                if leq(flats[x], flats[y]):
                    covers.append((x, y))

    logger.info(f"enumerated {len(flats)} combinatorial flats of {caged}")
    return ComboFlatLattice(caged, tuple(flats), tuple(ranks), tuple(covers))


def join(caged: CagedPolymatroid, s: Sequence[int], t: Sequence[int]) -> Multiset:
    """Least combinatorial flat above both flats"""
    rank = RankCache(caged)
    for flat in (s, t):
        if not is_combinatorial_flat(caged, flat, rank):
            raise NotAFlat(flat)
    return multiset_closure(caged, componentwise_max(s, t), rank)


def meet(caged: CagedPolymatroid, s: Sequence[int], t: Sequence[int]) -> Multiset:
    """Componentwise minimum, itself a flat"""
    rank = RankCache(caged)
    for flat in (s, t):
        if not is_combinatorial_flat(caged, flat, rank):
            raise NotAFlat(flat)
    return componentwise_min(s, t)


def whitney(lattice: ComboFlatLattice) -> List[int]:
    """Number of flats of each rank 0..rk(P)"""
    counts = [0] * (lattice.height + 1)
    for r in lattice.ranks:
        counts[r] += 1
    return counts


def check_top_heavy(lattice: ComboFlatLattice) -> bool:
    counts = whitney(lattice)
    d = len(counts) - 1
    return all(counts[k] <= counts[d - k] for k in range(d // 2 + 1))


def check_bottom_monotone(lattice: ComboFlatLattice) -> bool:
    """Whitney numbers increase up to the middle rank"""
    counts = whitney(lattice)
    d = len(counts) - 1
    return all(counts[k] <= counts[k + 1] for k in range(d // 2))


def first_semimodular_violation(
    caged: CagedPolymatroid, lattice: Optional[ComboFlatLattice] = None
) -> Optional[Tuple[Multiset, Multiset]]:
    if lattice is None:
        lattice = enumerate_lattice(caged)
    for x in range(len(lattice)):
        for y in range(x + 1, len(lattice)):
            lhs = lattice.ranks[lattice.meet(x, y)] + lattice.ranks[lattice.join(x, y)]
            if lhs > lattice.ranks[x] + lattice.ranks[y]:
                return lattice.elements[x], lattice.elements[y]
    return None


def check_semimodular(caged: CagedPolymatroid, lattice: Optional[ComboFlatLattice] = None) -> bool:
    return first_semimodular_violation(caged, lattice) is None


def check_multiset_submodularity(caged: CagedPolymatroid) -> Optional[Tuple[Multiset, Multiset]]:
    """Submodularity of the multiset rank over every pair below the cage"""
    size = cube_size(caged.cage)
    if size * size > settings.LATTICE_SIZE_BOUND:
        raise TooLarge("LATTICE_SIZE_BOUND", size * size, settings.LATTICE_SIZE_BOUND)
    rank = RankCache(caged)
    points = list(cube(caged.cage))
    for a_index, a in enumerate(points):
        for b in points[a_index + 1:]:
            if rank(componentwise_min(a, b)) + rank(componentwise_max(a, b)) > rank(a) + rank(b):
                return a, b
    return None


def flat_embedding(caged: CagedPolymatroid) -> Dict[int, Multiset]:
    """Each flat F of P sent to the multiset filling the blocks of F"""
    return {
        mask: tuple(n_i if mask >> i & 1 else 0 for i, n_i in enumerate(caged.cage))
        for mask, _ in flats_enumerate(caged.poly)
    }


# Abstract lattices

@dataclass(frozen=True)
class AbstractGradedLattice:
    """A finite poset presented by labels and cover pairs of label indices.

    ``ranks`` may be omitted, in which case they are derived from chain
    lengths when the poset turns out to be graded.
    """

    labels: Tuple[str, ...]
    covers: Tuple[Tuple[int, int], ...]
    ranks: Optional[Tuple[int, ...]] = None

    def __len__(self) -> int:
        return len(self.labels)

    def to_graph(self) -> nx.DiGraph:
        """Hasse diagram as a fresh networkx graph"""
        graph = nx.DiGraph()
        for k, label in enumerate(self.labels):
            graph.add_node(k, label=label)
        graph.add_edges_from(self.covers)
        return graph


def _as_abstract(lattice: Union[ComboFlatLattice, AbstractGradedLattice]) -> AbstractGradedLattice:
    if isinstance(lattice, ComboFlatLattice):
        return lattice.to_abstract()
    return lattice


def graded_ranks(lattice: AbstractGradedLattice) -> Tuple[int, ...]:
    """Check gradedness and return the rank of every element.

    Raises NoMinimum unless there is exactly one minimal element, and
    NotGraded if some cover does not raise the rank by exactly one.
    """
    graph = lattice.to_graph()
    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        lower, upper = cycle[0]
        raise NotGraded(lattice.labels[lower], lattice.labels[upper], "cover relation has a cycle")

    minima = [k for k in graph.nodes if graph.in_degree(k) == 0]
    if len(minima) != 1:
        raise NoMinimum([lattice.labels[k] for k in minima])
    bottom = minima[0]

    if lattice.ranks is not None:
        if lattice.ranks[bottom] != 0:
            raise NotGraded(lattice.labels[bottom], lattice.labels[bottom], "minimum has nonzero rank")
        for lower, upper in lattice.covers:
            if lattice.ranks[upper] != lattice.ranks[lower] + 1:
                raise NotGraded(
                    lattice.labels[lower],
                    lattice.labels[upper],
                    f"rank jumps from {lattice.ranks[lower]} to {lattice.ranks[upper]}",
                )
        return tuple(lattice.ranks)

    shortest: Dict[int, int] = {bottom: 0}
    longest: Dict[int, int] = {bottom: 0}
    for node in nx.topological_sort(graph):
        for upper in graph.successors(node):
            shortest[upper] = min(shortest.get(upper, shortest[node] + 1), shortest[node] + 1)
            longest[upper] = max(longest.get(upper, longest[node] + 1), longest[node] + 1)
    for node in nx.topological_sort(graph):
        if shortest[node] != longest[node]:
            lower = next(iter(graph.predecessors(node)))
            raise NotGraded(
                lattice.labels[lower],
                lattice.labels[node],
                f"maximal chains of lengths {shortest[node]} and {longest[node]}",
            )
    return tuple(shortest[k] for k in range(len(lattice)))


class _PosetTables:
    """Order, joins and meets of a graded poset as bitsets"""

    def __init__(self, lattice: AbstractGradedLattice, ranks: Tuple[int, ...]):
        self.lattice = lattice
        self.ranks = ranks
        graph = lattice.to_graph()
        size = len(lattice)
        self.up = [0] * size
        self.down = [0] * size
        for node in reversed(list(nx.topological_sort(graph))):
            bits = 1 << node
            for upper in graph.successors(node):
                bits |= self.up[upper]
            self.up[node] = bits
        for node in nx.topological_sort(graph):
            bits = 1 << node
            for lower in graph.predecessors(node):
                bits |= self.down[lower]
            self.down[node] = bits
        self.lower_covers = [list(graph.predecessors(k)) for k in range(size)]

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def _least(self, bits: int) -> Optional[int]:
        if not bits:
            return None
        candidates = [k for k in members(bits)]
        least = min(candidates, key=lambda k: self.ranks[k])
        return least if bits & ~self.up[least] == 0 else None

    def _greatest(self, bits: int) -> Optional[int]:
        if not bits:
            return None
        candidates = [k for k in members(bits)]
        greatest = max(candidates, key=lambda k: self.ranks[k])
        return greatest if bits & ~self.down[greatest] == 0 else None

    def join(self, x: int, y: int) -> Optional[int]:
        return self._least(self.up[x] & self.up[y])

    def meet(self, x: int, y: int) -> Optional[int]:
        return self._greatest(self.down[x] & self.down[y])


@dataclass
class AxiomReport:
    """Outcome of checking the three lattice axioms"""

    passed: bool = True
    failures: List[str] = field(default_factory=list)
    join_irreducibles: List[str] = field(default_factory=list)
    maximal_join_irreducibles: List[str] = field(default_factory=list)

    @property
    def first_violation(self) -> Optional[str]:
        return self.failures[0] if self.failures else None

    def fail(self, message: str) -> None:
        self.passed = False
        self.failures.append(message)


def join_irreducibles(lattice: Union[ComboFlatLattice, AbstractGradedLattice]) -> List[int]:
    """Indices of elements covering exactly one element"""
    abstract = _as_abstract(lattice)
    graph = abstract.to_graph()
    return [k for k in range(len(abstract)) if graph.in_degree(k) == 1]


def _axiom_tables(lattice: AbstractGradedLattice) -> Tuple[AxiomReport, Optional[_PosetTables], List[int], List[int]]:
    ranks = graded_ranks(lattice)
    tables = _PosetTables(lattice, ranks)
    labels = lattice.labels
    report = AxiomReport()
    size = len(lattice)

    # semimodular lattice
    for x in range(size):
        for y in range(x + 1, size):
            upper = tables.join(x, y)
            lower = tables.meet(x, y)
            if upper is None or lower is None:
                report.fail(f"not a lattice: {labels[x]} and {labels[y]} have no "
                            f"{'join' if upper is None else 'meet'}")
                return report, None, [], []
            if ranks[upper] + ranks[lower] > ranks[x] + ranks[y]:
                report.fail(f"not semimodular at {labels[x]}, {labels[y]}")
                return report, None, [], []

    irreducible = join_irreducibles(lattice)
    irreducible_bits = sum(1 << k for k in irreducible)
    report.join_irreducibles = [labels[k] for k in irreducible]

    # join-irreducibles form a down-set of the lattice minus its bottom
    for j in irreducible:
        below = tables.down[j]
        for x in members(below):
            if ranks[x] > 0 and not irreducible_bits >> x & 1:
                report.fail(f"{labels[x]} lies below join-irreducible {labels[j]} but is join-reducible")
                return report, tables, irreducible, []

    maximal = [
        j for j in irreducible
        if not any(k != j and tables.leq(j, k) for k in irreducible)
    ]
    report.maximal_join_irreducibles = [labels[k] for k in maximal]

    bottom = min(range(size), key=lambda k: ranks[k])

    def nullity(e: int) -> int:
        return bin(tables.down[e] & irreducible_bits).count("1") - ranks[e]

    for e in range(size):
        geo = bottom
        for j in maximal:
            if tables.leq(j, e):
                geo = tables.join(geo, j)
        if nullity(e) != nullity(geo):
            report.fail(
                f"nullity of {labels[e]} is {nullity(e)} but its geometric part "
                f"{labels[geo]} has nullity {nullity(geo)}"
            )
            return report, tables, irreducible, maximal

    return report, tables, irreducible, maximal


def check_axioms(lattice: Union[ComboFlatLattice, AbstractGradedLattice]) -> AxiomReport:
    """Decide whether a graded poset is a lattice of combinatorial flats"""
    report, _, _, _ = _axiom_tables(_as_abstract(lattice))
    if report.passed:
        logger.info(f"✅ lattice with {len(lattice)} elements satisfies the axioms")
    else:
        logger.info(f"❌ lattice axioms fail: {report.first_violation}")
    return report


def reconstruct_polymatroid(lattice: Union[ComboFlatLattice, AbstractGradedLattice]) -> Polymatroid:
    """Polymatroid on the maximal join-irreducibles whose rank is the rank of their join"""
    abstract = _as_abstract(lattice)
    report, tables, _, maximal = _axiom_tables(abstract)
    if not report.passed:
        raise AxiomsFailed(report)

    bottom = min(range(len(abstract)), key=lambda k: tables.ranks[k])

    def rank_of(mask: int) -> int:
        element = bottom
        for i in members(mask):
            element = tables.join(element, maximal[i])
        return tables.ranks[element]

    return polymatroid_from_function(len(maximal), rank_of)


def ordinary_flat_poset(poly: Polymatroid) -> AbstractGradedLattice:
    """Flats of P under inclusion, with polymatroid ranks"""
    flats = flats_enumerate(poly)
    flats.sort(key=lambda item: (item[1], item[0]))
    masks = [mask for mask, _ in flats]
    covers = []
    for x, lower in enumerate(masks):
        for y, upper in enumerate(masks):
            if x == y or lower & ~upper or lower == upper:
                continue
            between = any(
                mid not in (lower, upper) and lower & ~mid == 0 and mid & ~upper == 0
                for mid in masks
            )
            if not between:
                covers.append((x, y))
    return AbstractGradedLattice(
        tuple(format_subset(mask) for mask in masks),
        tuple(covers),
        tuple(r for _, r in flats),
    )


# Isomorphism

def _signature_graph(lattice: AbstractGradedLattice) -> nx.DiGraph:
    ranks = graded_ranks(lattice)
    hasse = lattice.to_graph()
    graph = nx.DiGraph()
    for k in range(len(lattice)):
        graph.add_node(k, signature=f"{ranks[k]}:{hasse.in_degree(k)}:{hasse.out_degree(k)}")
    graph.add_edges_from(lattice.covers)
    return graph


def canonical_invariant(lattice: Union[ComboFlatLattice, AbstractGradedLattice]) -> str:
    """Refinement hash of the Hasse diagram, equal for isomorphic lattices"""
    graph = _signature_graph(_as_abstract(lattice))
    return nx.weisfeiler_lehman_graph_hash(graph, node_attr="signature", iterations=3)


def is_isomorphic(
    first: Union[ComboFlatLattice, AbstractGradedLattice],
    second: Union[ComboFlatLattice, AbstractGradedLattice],
) -> bool:
    first, second = _as_abstract(first), _as_abstract(second)
    if len(first) != len(second) or len(first.covers) != len(second.covers):
        return False
    g1, g2 = _signature_graph(first), _signature_graph(second)
    if nx.weisfeiler_lehman_graph_hash(g1, node_attr="signature") != \
            nx.weisfeiler_lehman_graph_hash(g2, node_attr="signature"):
        return False
    matcher = DiGraphMatcher(g1, g2, node_match=lambda a, b: a["signature"] == b["signature"])
    return matcher.is_isomorphic()


def check_cage_independence(caged: CagedPolymatroid) -> bool:
    """The lattice for any cage matches the one for the tight cage"""
    tight = CagedPolymatroid.tight(caged.poly)
    return is_isomorphic(enumerate_lattice(caged), enumerate_lattice(tight))

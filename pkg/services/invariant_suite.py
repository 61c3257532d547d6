"""Invariant checks over random caged polymatroids.

Every check returns None on success or a short description of the first
counterexample. Checks whose inputs exceed a configured size bound are
recorded as skipped rather than failed.
"""

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from config.logging_config import get_logger
from core.cohomology import (
    CoeffMode,
    basis_label,
    check_cup_bounds,
    check_cup_well_defined,
    check_presentation,
    check_ring_axioms,
    hilbert,
    matroid_product_violation,
    structure_constants,
)
from core.errors import NoAdditiveBasisPair, PolymatroidToolkitError, TooLarge
from core.lattice import (
    ComboFlatLattice,
    check_axioms,
    check_bottom_monotone,
    check_cage_independence,
    check_multiset_submodularity,
    check_top_heavy,
    enumerate_lattice,
    first_semimodular_violation,
    flat_embedding,
    is_combinatorial_flat,
    is_isomorphic,
    reconstruct_polymatroid,
)
from core.lift import (
    MaterializedLift,
    check_flat_bases,
    coloop_deletion_violation,
    flat_rank_formula,
    geometric_support,
    lift_flat_check,
    lift_rank,
)
from core.operations import (
    Delete,
    Reduce,
    Truncate,
    check_deletion_flats,
    check_local_product,
    check_simplification_unique,
    check_truncation_closure,
    check_truncation_flats,
    lift_commutation_discrepancy,
    simplify,
    truncate,
)
from core.polymatroid import (
    CagedPolymatroid,
    RankCache,
    basis_of_multiset,
    brute_force_multiset_rank,
    cube,
    closure_set,
    cube_size,
    flats_enumerate,
    format_multiset,
    polymatroids_equivalent,
    validate,
)
from core.realization import (
    check_projection_pg,
    flag_ranks,
    is_pg,
    polymatroid_from_subspace,
    random_pg_translate,
    realize_truncation,
)
from services.instance_generator import GeneratedInstance, GeneratorParams, InstanceGenerator
from utils.file_handler import file_handler

logger = get_logger('fuzz')

BRUTE_FORCE_CUBE = 81
PAIRWISE_LATTICE = 60
RING_LATTICE = 150
CUP_LATTICE = 30


@dataclass
class CheckFailure:
    check: str
    detail: str


@dataclass
class InstanceReport:
    seed: int
    family: str
    caged: CagedPolymatroid
    failures: List[CheckFailure] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def reproducer(self) -> str:
        """Polymatroid file reproducing this instance"""
        header = f"# seed {self.seed}, family {self.family}\n"
        return header + file_handler.serialize_polymatroid(self.caged.poly, self.caged.cage)


@dataclass
class FuzzReport:
    seed: int
    reports: List[InstanceReport]

    @property
    def failed(self) -> List[InstanceReport]:
        return [report for report in self.reports if not report.passed]

    @property
    def passed(self) -> bool:
        return not self.failed

    def summary(self) -> str:
        skipped = sum(len(report.skipped) for report in self.reports)
        return (
            f"fuzz seed {self.seed}: {len(self.reports)} instances, "
            f"{len(self.failed)} failing, {skipped} checks skipped"
        )


class _Context:
    """Shared intermediate results for the checks of one instance"""

    def __init__(self, instance: GeneratedInstance):
        self.instance = instance
        self.caged = instance.caged
        self.rank = RankCache(instance.caged)
        self._lattice: Optional[ComboFlatLattice] = None
        self.notes: Dict[str, str] = {}

    @property
    def lattice(self) -> ComboFlatLattice:
        if self._lattice is None:
            self._lattice = enumerate_lattice(self.caged)
        return self._lattice


class InvariantSuite:
    """Runs every invariant check on generated instances"""

    def __init__(self, params: Optional[GeneratorParams] = None):
        self.params = params or GeneratorParams()
        self.generator = InstanceGenerator(self.params)
        self.checks: List[Callable[[_Context], Optional[str]]] = [
            self.check_axioms_hold,
            self.check_multiset_rank,
            self.check_closure_set,
            self.check_lift,
            self.check_lift_oracle,
            self.check_coloops,
            self.check_bases_of_flats,
            self.check_lattice_shape,
            self.check_lattice_pairs,
            self.check_lattice_axioms,
            self.check_simplification,
            self.check_lift_commutation,
            self.check_flat_structure,
            self.check_truncation_at_closure,
            self.check_ring,
            self.check_cup_product,
            self.check_realization,
        ]

    # Runner

    def run_instance(self, instance: GeneratedInstance) -> InstanceReport:
        report = InstanceReport(instance.seed, instance.family, instance.caged)
        context = _Context(instance)
        for check in self.checks:
            name = check.__name__.replace('check_', '')
            try:
                detail = check(context)
            except TooLarge as e:
                report.skipped.append(f"{name}: {e.message}")
                continue
            except PolymatroidToolkitError as e:
                detail = f"{type(e).__name__}: {e.message}"
            except Exception as e:
                logger.error(f"❌ check {name} crashed on seed {instance.seed}: {str(e)}", exc_info=True)
                detail = f"{type(e).__name__}: {e}"
            if detail is not None:
                report.failures.append(CheckFailure(name, detail))
        report.notes.update(context.notes)
        if report.failures:
            logger.error(f"❌ seed {instance.seed} ({instance.family}) failed: {report.failures[0].check}")
        return report

    def run_seed(self, seed: int) -> InstanceReport:
        return self.run_instance(self.generator.generate(seed))

    def run(self, seed: int, count: int, workers: int = 1) -> FuzzReport:
        """
        Fuzz a batch of instances derived from one seed

        Args:
            seed (int): Master seed, each instance gets its own seed from it
            count (int): Number of instances
            workers (int): Worker processes, 1 runs in this process

        Returns:
            FuzzReport: One report per instance, in seed order
        """
        rng = random.Random(seed)
        seeds = [rng.randrange(2 ** 32) for _ in range(count)]
        logger.info(f"🔍 fuzzing {count} instances from seed {seed} with {workers} workers")
        if workers <= 1:
            reports = [self.run_seed(s) for s in seeds]
        else:
            params = self.params.model_dump()
            with ProcessPoolExecutor(max_workers=workers) as pool:
                reports = list(pool.map(_run_seed_in_worker, seeds, [params] * len(seeds)))
        fuzz = FuzzReport(seed, reports)
        logger.info(fuzz.summary())
        return fuzz

    # Polymatroid layer

    def check_axioms_hold(self, ctx: _Context) -> Optional[str]:
        validate(ctx.caged.poly.rank_table, ctx.caged.ground_size)
        return None

    def check_multiset_rank(self, ctx: _Context) -> Optional[str]:
        caged = ctx.caged
        brute = cube_size(caged.cage) <= BRUTE_FORCE_CUBE
        for s in cube(caged.cage):
            r = ctx.rank(s)
            greedy = sum(basis_of_multiset(caged, s))
            if greedy != r:
                return f"greedy basis of {format_multiset(s)} has size {greedy}, rank {r}"
            if lift_rank(caged, s) != r:
                return f"lift rank of {format_multiset(s)} differs"
            if r > sum(s):
                return f"rank of {format_multiset(s)} exceeds its size"
            for i in range(caged.ground_size):
                if s[i] < caged.cage[i]:
                    step = ctx.rank(s[:i] + (s[i] + 1,) + s[i + 1:]) - r
                    if step not in (0, 1):
                        return f"adding e_{i + 1} to {format_multiset(s)} changes the rank by {step}"
            if all(x in (0, n) for x, n in zip(s, caged.cage)):
                if r != caged.poly.rk(geometric_support(caged, s)):
                    return f"full-block multiset {format_multiset(s)} has rank {r}"
            if brute and brute_force_multiset_rank(caged, s) != r:
                return f"exhaustive rank of {format_multiset(s)} differs from {r}"
        return None

    def check_closure_set(self, ctx: _Context) -> Optional[str]:
        poly = ctx.caged.poly
        for mask in range(1 << poly.ground_size):
            closed = closure_set(poly, mask)
            if closed & mask != mask or poly.rk(closed) != poly.rk(mask):
                return f"closure of {mask:b} is {closed:b}"
            if not poly.is_flat(closed) or closure_set(poly, closed) != closed:
                return f"closure of {mask:b} is not a flat"
            for i in range(poly.ground_size):
                if closure_set(poly, mask | 1 << i) & closed != closed:
                    return f"closure is not monotone at {mask:b} plus {i + 1}"
        return None

    # Lift

    def check_lift(self, ctx: _Context) -> Optional[str]:
        caged = ctx.caged
        for s in cube(caged.cage):
            flat = is_combinatorial_flat(caged, s, ctx.rank)
            if flat != lift_flat_check(caged, s):
                return f"flat definitions disagree on {format_multiset(s)}"
            if flat and flat_rank_formula(caged, s) != ctx.rank(s):
                return f"rank of flat {format_multiset(s)} is not rk(geometric part) + rest"
        for mask, multiset in flat_embedding(caged).items():
            if not is_combinatorial_flat(caged, multiset, ctx.rank):
                return f"flat {mask:b} of P does not embed as a combinatorial flat"
        return None

    def check_lift_oracle(self, ctx: _Context) -> Optional[str]:
        lift = MaterializedLift(ctx.caged)
        if not lift.matroid_axioms_hold():
            return "materialized lift is not a matroid"
        expected = {s: lift.expected_multiplicity(s) for s in ctx.lattice.elements}
        actual = lift.flat_multiplicities()
        if actual != expected:
            bad = next(s for s in sorted(set(actual) | set(expected)) if actual.get(s) != expected.get(s))
            return f"lift flats do not match combinatorial flats at {format_multiset(bad)}"
        return None

    def check_coloops(self, ctx: _Context) -> Optional[str]:
        for s in ctx.lattice.elements:
            i = coloop_deletion_violation(ctx.caged, s, ctx.rank)
            if i is not None:
                return f"removing a copy of {i + 1} from flat {format_multiset(s)} is not a flat of rank one less"
        return None

    def check_bases_of_flats(self, ctx: _Context) -> Optional[str]:
        for s in ctx.lattice.elements:
            if not check_flat_bases(ctx.caged, s):
                return f"bases of flat {format_multiset(s)} are not those of its geometric part plus the rest"
        return None

    # Lattice

    def check_lattice_shape(self, ctx: _Context) -> Optional[str]:
        lattice = ctx.lattice
        caged = ctx.caged
        if lattice.elements[-1] != caged.cage or lattice.ranks[-1] != caged.rank:
            return "top element is not the cage"
        if lattice.ranks[0] != 0 or sum(1 for r in lattice.ranks if r == 0) != 1:
            return "no unique rank-zero flat"
        has_lower = {y for _, y in lattice.covers}
        has_upper = {x for x, _ in lattice.covers}
        for k in range(len(lattice)):
            if k != lattice.bottom and k not in has_lower:
                return f"{format_multiset(lattice.elements[k])} covers nothing"
            if k != lattice.top and k not in has_upper:
                return f"{format_multiset(lattice.elements[k])} is covered by nothing"
        if not check_top_heavy(lattice):
            return "Whitney numbers are not top-heavy; this is an implementation bug, not a counterexample"
        if not check_bottom_monotone(lattice):
            return "Whitney numbers are not increasing below the middle"
        violation = first_semimodular_violation(caged, lattice)
        if violation:
            return f"semimodularity fails at {format_multiset(violation[0])}, {format_multiset(violation[1])}"
        violation = check_multiset_submodularity(caged)
        if violation:
            return f"multiset rank not submodular at {format_multiset(violation[0])}, {format_multiset(violation[1])}"
        return None

    def check_lattice_pairs(self, ctx: _Context) -> Optional[str]:
        lattice = ctx.lattice
        size = len(lattice)
        if size > PAIRWISE_LATTICE:
            raise TooLarge("pairwise lattice checks", size, PAIRWISE_LATTICE)
        elements = lattice.elements
        for x in range(size):
            for y in range(size):
                j = lattice.join(x, y)
                m = lattice.meet(x, y)
                upper = [u for u in range(size) if _leq(elements[x], elements[u]) and _leq(elements[y], elements[u])]
                if any(not _leq(elements[j], elements[u]) for u in upper) or j not in upper:
                    return f"join of {format_multiset(elements[x])}, {format_multiset(elements[y])} is not least"
                lower = [d for d in range(size) if _leq(elements[d], elements[x]) and _leq(elements[d], elements[y])]
                if any(not _leq(elements[d], elements[m]) for d in lower) or m not in lower:
                    return f"meet of {format_multiset(elements[x])}, {format_multiset(elements[y])} is not greatest"
        return None

    def check_lattice_axioms(self, ctx: _Context) -> Optional[str]:
        report = check_axioms(ctx.lattice)
        if not report.passed:
            return report.first_violation
        if not check_cage_independence(ctx.caged):
            return "lattice changes when the cage is made tight"
        return None

    # Operations

    def check_simplification(self, ctx: _Context) -> Optional[str]:
        simple, trace = simplify(ctx.caged)
        if not simple.poly.is_simple() or not simple.is_tight():
            return "simplification did not reach a simple polymatroid with tight cage"
        if trace.reductions > sum(ctx.caged.cage):
            return f"{trace.reductions} reductions exceed the cage total {sum(ctx.caged.cage)}"
        if trace.deloops > ctx.caged.ground_size:
            return f"{trace.deloops} loop deletions on {ctx.caged.ground_size} elements"
        for k, step in enumerate(trace.steps):
            if not is_isomorphic(ctx.lattice, enumerate_lattice(step.result)):
                return f"lattice changed at simplification step {k + 1}: {step.describe()}"
        if not is_isomorphic(ctx.lattice, enumerate_lattice(simple)):
            return f"lattice changed during simplification ({len(trace)} steps)"
        rebuilt = reconstruct_polymatroid(ctx.lattice)
        if not polymatroids_equivalent(rebuilt, simple.poly):
            return "reconstruction from the lattice differs from the simplification"
        try:
            if not check_simplification_unique(ctx.caged):
                return "reduction orders reach different simple polymatroids"
        except TooLarge:
            pass
        return None

    def check_lift_commutation(self, ctx: _Context) -> Optional[str]:
        caged = ctx.caged
        poly = caged.poly
        operations = [Delete(1 << i) for i in range(caged.ground_size)]
        operations += [Reduce(i) for i in range(caged.ground_size) if poly.singleton_rank(i) > 0]
        operations += [Truncate(mask) for mask, r in flats_enumerate(poly) if r >= 1]
        for op in operations:
            bad = lift_commutation_discrepancy(caged, op)
            if bad is not None:
                return f"{op} does not commute with the lift at {format_multiset(bad)}"
        return None

    def check_flat_structure(self, ctx: _Context) -> Optional[str]:
        caged = ctx.caged
        poly = caged.poly
        for i in range(caged.ground_size):
            if not check_deletion_flats(poly, 1 << i):
                return f"flats of the deletion of {i + 1} are not the restricted flats"
            bad = check_local_product(caged, i)
            if bad is not None:
                return f"local product fails for element {i + 1} at {format_multiset(bad)}"
        for mask, r in flats_enumerate(poly):
            if r < 1:
                continue
            bad = check_truncation_flats(caged, mask)
            if bad is not None:
                return f"truncation at flat {mask:b} mispredicted at {format_multiset(bad)}"
        return None

    def check_truncation_at_closure(self, ctx: _Context) -> Optional[str]:
        poly = ctx.caged.poly
        for mask in range(1, 1 << poly.ground_size):
            if poly.rk(mask) >= 1 and not check_truncation_closure(poly, mask):
                return f"truncation at {mask:b} differs from truncation at its closure"
        return None

    # Cohomology

    def check_ring(self, ctx: _Context) -> Optional[str]:
        lattice = ctx.lattice
        if len(lattice) > RING_LATTICE:
            raise TooLarge("ring checks", len(lattice), RING_LATTICE)
        notes = {}
        for mode in CoeffMode:
            try:
                ring = structure_constants(ctx.caged, mode, lattice)
            except NoAdditiveBasisPair as e:
                return f"{mode.value}: NoAdditiveBasisPair {e.message}"
            if ring.diagnostics:
                first = ring.diagnostics[0]
                return (
                    f"{mode.value}: NoAdditiveBasisPair {basis_label(first.s)} * "
                    f"{basis_label(first.t)}: {first.detail}"
                )
            if hilbert(ring) != [lattice.ranks.count(r) for r in range(lattice.height + 1)]:
                return f"{mode.value}: Hilbert function differs from the Whitney numbers"
            axioms = check_ring_axioms(ring)
            if not axioms.passed:
                return f"{mode.value}: {axioms.failure}"
            if all(n_i == 1 for n_i in ctx.caged.cage):
                pair = matroid_product_violation(ring)
                if pair is not None:
                    return f"{mode.value}: product of {format_multiset(pair[0])}, {format_multiset(pair[1])} is not the join"
            presentation = check_presentation(ctx.caged, ring)
            notes[f"presentation_{mode.value}"] = "pass" if presentation.passed else presentation.witness
        ctx.notes.update(notes)
        return None

    def check_cup_product(self, ctx: _Context) -> Optional[str]:
        lattice = ctx.lattice
        if len(lattice) > RING_LATTICE:
            raise TooLarge("cup checks", len(lattice), RING_LATTICE)
        exhaustive = len(lattice) <= CUP_LATTICE
        for x, s in enumerate(lattice.elements):
            for t in lattice.elements[x:]:
                if not check_cup_bounds(ctx.caged, s, t, ctx.rank):
                    return f"cup of {format_multiset(s)}, {format_multiset(t)} is below their meet or too large"
                if exhaustive and not check_cup_well_defined(ctx.caged, s, t):
                    return f"cup of {format_multiset(s)}, {format_multiset(t)} depends on the bases"
        return None

    # Realization

    def check_realization(self, ctx: _Context) -> Optional[str]:
        subspace = ctx.instance.subspace
        if subspace is None:
            return None
        poly = ctx.caged.poly
        if polymatroid_from_subspace(subspace) != poly:
            return "subspace polymatroid differs from the instance"
        translate = random_pg_translate(subspace, seed=ctx.instance.seed)
        if polymatroid_from_subspace(translate) != poly:
            return "translate changed the polymatroid"
        if not is_pg(translate):
            return "translate is not partially generic"
        ranks = flag_ranks(translate)
        for s, codim in ranks.items():
            if codim != ctx.rank(s):
                return f"flag codimension at {format_multiset(s)} is {codim}, rank {ctx.rank(s)}"
        if not check_projection_pg(translate):
            return "a projection of the translate is not partially generic"
        if poly.rank >= 1:
            cut = realize_truncation(translate, poly.full_mask, seed=ctx.instance.seed)
            if polymatroid_from_subspace(cut) != truncate(poly, poly.full_mask):
                return "hyperplane section does not realize the truncation"
        return None


def _leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _run_seed_in_worker(seed: int, params: dict) -> InstanceReport:
    return InvariantSuite(GeneratorParams(**params)).run_seed(seed)

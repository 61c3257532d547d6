import argparse
import sys
from typing import Optional, Sequence

from config.settings import settings
from config.logging_config import get_logger
from core.cohomology import CoeffMode, check_presentation, structure_constants
from core.errors import ParseError, PolymatroidToolkitError
from core.lattice import check_axioms, enumerate_lattice, ordinary_flat_poset, reconstruct_polymatroid
from core.lift import lift_circuits
from core.operations import simplify
from core.polymatroid import bases, bases_of_multiset, format_multiset
from core.realization import caged_from_subspace, pg_violation, random_pg_translate
from services.instance_generator import GeneratorParams
from services.invariant_suite import InvariantSuite
from utils.file_handler import file_handler
from utils.response_formatter import response_formatter

logger = get_logger('cli')

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def validate_environment() -> bool:
    """Validate environment variables and configuration"""
    try:
        settings.validate_settings()
        settings.create_directories()
        return True
    except Exception as e:
        logger.error(f"❌ Environment validation failed: {str(e)}")
        print(str(e), file=sys.stderr)
        return False


def _load(args):
    cage = tuple(args.cage) if getattr(args, 'cage', None) else None
    return file_handler.load_caged(args.file, cage)


def _parse_multiset(text: str) -> tuple:
    try:
        return tuple(int(token) for token in text.split(','))
    except ValueError:
        raise ParseError(0, f"multiset {text!r} must be comma separated integers")


# Commands

def cmd_validate(args) -> int:
    caged = _load(args)
    print(f"OK: N={caged.ground_size}, rank {caged.rank}, cage {format_multiset(caged.cage)}")
    return EXIT_OK


def cmd_flats(args) -> int:
    lattice = enumerate_lattice(_load(args))
    print(response_formatter.format_flats(lattice, covers=args.covers))
    return EXIT_OK


def cmd_hasse(args) -> int:
    dot = response_formatter.format_dot(enumerate_lattice(_load(args)))
    if args.dot:
        file_handler.write_text(args.dot, dot + "\n")
    else:
        print(dot)
    return EXIT_OK


def cmd_whitney(args) -> int:
    print(response_formatter.format_whitney(enumerate_lattice(_load(args))))
    return EXIT_OK


def cmd_simplify(args) -> int:
    simple, trace = simplify(_load(args))
    print(response_formatter.format_trace(trace))
    text = file_handler.serialize_polymatroid(simple.poly, simple.cage)
    if args.output:
        file_handler.write_text(args.output, text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_cohomology(args) -> int:
    caged = _load(args)
    ring = structure_constants(caged, CoeffMode(args.coeffs), strict=args.strict)
    print(response_formatter.format_cohomology(ring))
    if args.presentation:
        report = check_presentation(caged, ring)
        print(f"# presentation: {'pass' if report.passed else report.witness}")
    return EXIT_FAILURE if ring.diagnostics else EXIT_OK


def cmd_check_axioms(args) -> int:
    if args.ordinary:
        lattice = ordinary_flat_poset(file_handler.load_caged(args.file).poly)
    else:
        lattice = file_handler.parse_lattice(file_handler.read_text(args.file))
    try:
        report = check_axioms(lattice)
    except PolymatroidToolkitError as e:
        print(f"FAIL: {type(e).__name__}: {e.message}")
        return EXIT_FAILURE
    print(response_formatter.format_axiom_report(report))
    if report.passed and args.reconstruct:
        poly = reconstruct_polymatroid(lattice)
        print(file_handler.serialize_polymatroid(poly), end="")
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_realize(args) -> int:
    subspace = file_handler.parse_subspace(file_handler.read_text(args.file))
    if args.translate:
        subspace = random_pg_translate(subspace, seed=args.seed)
        print("# partially generic translate")
        print(file_handler.serialize_subspace(subspace), end="")
    caged = caged_from_subspace(subspace)
    print(file_handler.serialize_polymatroid(caged.poly, caged.cage), end="")
    if not args.check_pg:
        return EXIT_OK
    violation = pg_violation(subspace)
    if violation is None:
        print("pg: yes")
        return EXIT_OK
    witness, expected, observed = violation
    print(f"pg: no at {format_multiset(witness)} (rank {expected}, codimension {observed})")
    return EXIT_FAILURE


def cmd_bases(args) -> int:
    caged = _load(args)
    if args.multiset:
        found = bases_of_multiset(caged, _parse_multiset(args.multiset))
    else:
        found = bases(caged.poly)
    for b in found:
        print(format_multiset(b))
    return EXIT_OK


def cmd_circuits(args) -> int:
    for d in lift_circuits(_load(args)):
        print(format_multiset(d))
    return EXIT_OK


def cmd_fuzz(args) -> int:
    params = GeneratorParams(max_n=args.max_n, max_rank=args.max_rank, max_cage=args.max_cage)
    report = InvariantSuite(params).run(args.seed, args.count, workers=args.workers)
    for failed in report.failed:
        for failure in failed.failures:
            print(f"seed {failed.seed} ({failed.family}) {failure.check}: {failure.detail}")
        print(failed.reproducer())
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_serve(args) -> int:
    import uvicorn

    from routes.router import app

    logger.info(f"🚀 Starting FastAPI server on {args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="info", access_log=True)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polymatroid-toolkit",
        description="Combinatorial flats of caged polymatroids and their invariants",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def with_file(name: str, handler, help_text: str, cage: bool = True) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("file", help="polymatroid file")
        if cage:
            sub.add_argument("--cage", type=int, nargs="+", help="cage entries n_1 ... n_N")
        sub.set_defaults(handler=handler)
        return sub

    with_file("validate", cmd_validate, "check the polymatroid axioms")

    sub = with_file("flats", cmd_flats, "list the combinatorial flats with ranks")
    sub.add_argument("--covers", action="store_true", help="append the cover relations")

    sub = with_file("hasse", cmd_hasse, "Hasse diagram in DOT")
    sub.add_argument("--dot", metavar="OUT", help="write the DOT graph to this file")

    with_file("whitney", cmd_whitney, "Whitney numbers and their shape")

    sub = with_file("simplify", cmd_simplify, "deloop and reduce to a simple polymatroid")
    sub.add_argument("--output", metavar="OUT", help="write the simplified polymatroid here")

    sub = with_file("cohomology", cmd_cohomology, "multiplication table of the ring on flats")
    sub.add_argument("--coeffs", choices=[mode.value for mode in CoeffMode], default=CoeffMode.CONJECTURAL_BINOMIAL.value)
    sub.add_argument("--strict", action="store_true", help="fail on the first scalar mismatch")
    sub.add_argument("--presentation", action="store_true", help="also check the generator presentation")

    sub = subparsers.add_parser("check-axioms", help="decide whether a lattice file is a lattice of combinatorial flats")
    sub.add_argument("file", help="lattice file, or a polymatroid file with --ordinary")
    sub.add_argument("--ordinary", action="store_true", help="check the ordinary flats of a polymatroid file")
    sub.add_argument("--reconstruct", action="store_true", help="print the polymatroid the lattice determines")
    sub.set_defaults(handler=cmd_check_axioms)

    sub = subparsers.add_parser("realize", help="polymatroid of a rational subspace")
    sub.add_argument("file", help="subspace file")
    sub.add_argument("--check-pg", action="store_true", help="report partial genericity")
    sub.add_argument("--translate", action="store_true", help="first move to a partially generic translate")
    sub.add_argument("--seed", type=int, default=0)
    sub.set_defaults(handler=cmd_realize)

    sub = with_file("bases", cmd_bases, "bases of the polymatroid or of a multiset")
    sub.add_argument("--multiset", help="comma separated multiset below the cage")

    with_file("circuits", cmd_circuits, "minimal dependent multisets below the cage")

    sub = subparsers.add_parser("fuzz", help="run the invariant suite on random instances")
    sub.add_argument("--seed", type=int, default=settings.FUZZ_SEED)
    sub.add_argument("--count", type=int, default=settings.FUZZ_COUNT)
    sub.add_argument("--max-n", type=int, default=settings.FUZZ_MAX_N)
    sub.add_argument("--max-rank", type=int, default=settings.FUZZ_MAX_RANK)
    sub.add_argument("--max-cage", type=int, default=settings.FUZZ_MAX_CAGE)
    sub.add_argument("--workers", type=int, default=settings.FUZZ_WORKERS)
    sub.set_defaults(handler=cmd_fuzz)

    sub = subparsers.add_parser("serve", help="run the HTTP API")
    sub.add_argument("--host", default=settings.API_HOST)
    sub.add_argument("--port", type=int, default=settings.API_PORT)
    sub.set_defaults(handler=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    if not validate_environment():
        return EXIT_USAGE

    logger.info(f"▶️ command {args.command}")
    try:
        return args.handler(args)
    except PolymatroidToolkitError as e:
        logger.error(f"❌ {args.command} failed: {type(e).__name__}: {e.message}")
        print(f"{type(e).__name__}: {e.message}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        # pydantic bounds on the fuzz parameters
        logger.error(f"{args.command}: {str(e)}")
        print(str(e), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

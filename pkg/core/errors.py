"""Error hierarchy shared by every layer of the toolkit.

Every failure is a typed exception carrying a human-readable message and,
where one exists, a witness (subset pair, multiset, line number).
"""

from typing import Any, Dict, Optional, Sequence, Tuple


def _format_mask(mask: int) -> str:
    if mask == 0:
        return "{}"
    members = [str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1]
    return "{" + ",".join(members) + "}"


def _format_multiset(s: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in s) + ")"


class PolymatroidToolkitError(Exception):
    """Base class for every toolkit failure"""

    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message}


# Polymatroid axioms

class AxiomViolation(PolymatroidToolkitError):
    """A rank table violates one of the polymatroid axioms"""


class NotNormalized(AxiomViolation):
    def __init__(self, value: int):
        super().__init__(f"rk(empty set) = {value}, expected 0")
        self.value = value


class NotIncreasing(AxiomViolation):
    def __init__(self, a: int, b: int, rank_a: int, rank_b: int):
        super().__init__(
            f"{_format_mask(a)} is contained in {_format_mask(b)} "
            f"but rk = {rank_a} > {rank_b}"
        )
        self.a = a
        self.b = b

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["witness"] = [self.a, self.b]
        return data


class NotSubmodular(AxiomViolation):
    def __init__(self, a: int, b: int, lhs: int, rhs: int):
        super().__init__(
            f"rk({_format_mask(a)}) + rk({_format_mask(b)}) = {lhs} < "
            f"rk(union) + rk(intersection) = {rhs}"
        )
        self.a = a
        self.b = b

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["witness"] = [self.a, self.b]
        return data


class MalformedTable(PolymatroidToolkitError):
    def __init__(self, message: str):
        super().__init__(message)


class InvalidCage(PolymatroidToolkitError):
    def __init__(self, message: str):
        super().__init__(message)


class CageExceeded(PolymatroidToolkitError):
    def __init__(self, s: Sequence[int], cage: Sequence[int]):
        super().__init__(f"multiset {_format_multiset(s)} exceeds cage {_format_multiset(cage)}")
        self.s = tuple(s)
        self.cage = tuple(cage)


class TooLarge(PolymatroidToolkitError):
    def __init__(self, bound_name: str, value: int, bound: int):
        super().__init__(f"{bound_name}: {value} exceeds the configured bound {bound}")
        self.bound_name = bound_name
        self.value = value
        self.bound = bound


class NotAFlat(PolymatroidToolkitError):
    def __init__(self, s: Sequence[int]):
        super().__init__(f"{_format_multiset(s)} is not a combinatorial flat")
        self.s = tuple(s)


# Operations

class RankZero(PolymatroidToolkitError):
    def __init__(self, message: str = "truncation needs positive rank"):
        super().__init__(message)


class LoopReduction(PolymatroidToolkitError):
    def __init__(self, index: int):
        super().__init__(f"cannot reduce at loop {index + 1}")
        self.index = index


class AxiomsFailed(PolymatroidToolkitError):
    def __init__(self, report: Any):
        super().__init__(f"lattice fails the polymatroid lattice axioms: {report.first_violation}")
        self.report = report


# Cohomology

class NoAdditiveBasisPair(PolymatroidToolkitError):
    def __init__(self, s: Sequence[int], s_prime: Sequence[int], detail: str):
        super().__init__(
            f"y_{_format_multiset(s)} * y_{_format_multiset(s_prime)}: {detail}"
        )
        self.s = tuple(s)
        self.s_prime = tuple(s_prime)
        self.detail = detail

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["witness"] = {"s": list(self.s), "s_prime": list(self.s_prime), "detail": self.detail}
        return data


# Realization

class NotPG(PolymatroidToolkitError):
    def __init__(self, witness: Sequence[int], expected: int, observed: int):
        super().__init__(
            f"subspace is not in partially generic position at {_format_multiset(witness)}: "
            f"multiset rank {expected}, codimension {observed}"
        )
        self.witness = tuple(witness)


class RetryLimit(PolymatroidToolkitError):
    def __init__(self, what: str, attempts: int):
        super().__init__(f"{what}: no success after {attempts} random draws")
        self.attempts = attempts


class TranslateChangedPolymatroid(PolymatroidToolkitError):
    def __init__(self, mask: int, expected: int, observed: int):
        super().__init__(
            f"block-diagonal translate changed the rank of {_format_mask(mask)} from {expected} to {observed}"
        )
        self.witness = mask


# Hypertoric action

class DimensionMismatch(PolymatroidToolkitError):
    def __init__(self, message: str):
        super().__init__(message)


class ZeroScalar(PolymatroidToolkitError):
    def __init__(self):
        super().__init__("torus parameter t must be nonzero")


class InvalidPoint(PolymatroidToolkitError):
    def __init__(self, factor: int):
        super().__init__(f"projective factor {factor + 1} has all coordinates zero")
        self.factor = factor


# Abstract lattices

class NotGraded(PolymatroidToolkitError):
    def __init__(self, lower: Any, upper: Any, detail: str = ""):
        message = f"poset is not graded at cover {lower} < {upper}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class NoMinimum(PolymatroidToolkitError):
    def __init__(self, minima: Sequence[Any]):
        super().__init__(f"poset has no unique minimum: {', '.join(str(m) for m in minima)}")
        self.minima = tuple(minima)


# Input

class ParseError(PolymatroidToolkitError):
    exit_code = 2

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.detail = message


def witness_of(error: PolymatroidToolkitError) -> Optional[Tuple[Any, ...]]:
    """Return the witness carried by an error, when it has one"""
    for attr in ("witness", "s"):
        value = getattr(error, attr, None)
        if value is not None:
            return tuple(value) if not isinstance(value, tuple) else value
    if isinstance(error, (NotIncreasing, NotSubmodular)):
        return (error.a, error.b)
    return None

from datetime import datetime
from typing import Any, Dict, List, Optional

from config.logging_config import get_logger
from core.cohomology import CohomologyRing, basis_label
from core.lattice import AxiomReport, ComboFlatLattice, check_bottom_monotone, check_top_heavy, whitney
from core.operations import SimplificationTrace
from core.polymatroid import format_multiset

logger = get_logger('cli')


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


class ResponseFormatter:
    """Text and JSON renderings of toolkit results"""

    def create_success_response(
        self,
        message: str,
        data: Optional[Dict[str, Any]] = None,
    ) -> Dict[str, Any]:
        """
        Create a success response

        Args:
            message (str): Success message
            data (Optional[Dict[str, Any]]): Additional data

        Returns:
            Dict[str, Any]: Formatted success response
        """
        response = {
            "success": True,
            "text": message,
            "timestamp": self._get_timestamp(),
            "type": "success"
        }

        if data:
            response["data"] = data

        return response

    def create_error_response(
        self,
        message: str,
        error_code: Optional[str] = None,
        data: Optional[Dict[str, Any]] = None,
    ) -> Dict[str, Any]:
        """
        Create an error response

        Args:
            message (str): Error message
            error_code (Optional[str]): Error class name
            data (Optional[Dict[str, Any]]): Witness or other details

        Returns:
            Dict[str, Any]: Formatted error response
        """
        response = {
            "success": False,
            "text": message,
            "timestamp": self._get_timestamp(),
            "type": "error"
        }

        if error_code:
            response["error_code"] = error_code

        if data:
            response["data"] = data

        return response

    # Lattices

    def format_flats(self, lattice: ComboFlatLattice, covers: bool = False) -> str:
        """One '<multiset> : <rank>' line per flat, optionally followed by cover lines"""
        lines = [
            f"{format_multiset(s)} : {r}" for s, r in zip(lattice.elements, lattice.ranks)
        ]
        if covers:
            labels = lattice.labels()
            lines.extend(f"cover {labels[x]} {labels[y]}" for x, y in lattice.covers)
        return "\n".join(lines)

    def format_dot(self, lattice: ComboFlatLattice) -> str:
        """Hasse diagram in Graphviz DOT, one rank per row"""
        lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=box];"]
        for k, (s, r) in enumerate(zip(lattice.elements, lattice.ranks)):
            lines.append(f'  n{k} [label="{format_multiset(s)} | {r}"];')
        by_rank: Dict[int, List[int]] = {}
        for k, r in enumerate(lattice.ranks):
            by_rank.setdefault(r, []).append(k)
        for r in sorted(by_rank):
            members = "; ".join(f"n{k}" for k in by_rank[r])
            lines.append(f"  {{ rank=same; {members}; }}")
        for x, y in lattice.covers:
            lines.append(f"  n{x} -> n{y};")
        lines.append("}")
        return "\n".join(lines)

    def format_whitney(self, lattice: ComboFlatLattice) -> str:
        counts = whitney(lattice)
        return "\n".join([
            " ".join(str(c) for c in counts),
            f"top-heavy: {_yes_no(check_top_heavy(lattice))}",
            f"bottom-monotone: {_yes_no(check_bottom_monotone(lattice))}",
        ])

    def format_axiom_report(self, report: AxiomReport) -> str:
        if report.passed:
            lines = ["PASS"]
            lines.append("maximal join-irreducibles: " + " ".join(report.maximal_join_irreducibles))
            return "\n".join(lines)
        return f"FAIL: {report.first_violation}"

    # Operations

    def format_trace(self, trace: SimplificationTrace) -> str:
        if not trace.steps:
            return "already simple with tight cage"
        return "\n".join(step.describe() for step in trace.steps)

    # Cohomology

    def format_cohomology(self, ring: CohomologyRing) -> str:
        """'y_(s) * y_(t) = q * y_(u)' or '= 0' for every unordered pair"""
        elements = ring.lattice.elements
        lines = []
        for x in range(len(elements)):
            for y in range(x, len(elements)):
                left = f"{basis_label(elements[x])} * {basis_label(elements[y])}"
                entry = ring.table[(x, y)]
                if entry is None:
                    lines.append(f"{left} = 0")
                else:
                    target, scalar = entry
                    lines.append(f"{left} = {scalar} * {basis_label(elements[target])}")
        for diagnostic in ring.diagnostics:
            lines.append(
                f"# NoAdditiveBasisPair {basis_label(diagnostic.s)} * "
                f"{basis_label(diagnostic.t)}: {diagnostic.detail}"
            )
        return "\n".join(lines)

    # JSON

    def lattice_to_dict(self, lattice: ComboFlatLattice) -> Dict[str, Any]:
        return {
            "cage": list(lattice.caged.cage),
            "flats": [
                {"multiset": list(s), "rank": r} for s, r in zip(lattice.elements, lattice.ranks)
            ],
            "covers": [list(pair) for pair in lattice.covers],
            "whitney": whitney(lattice),
            "top_heavy": check_top_heavy(lattice),
            "bottom_monotone": check_bottom_monotone(lattice),
        }

    def ring_to_dict(self, ring: CohomologyRing) -> Dict[str, Any]:
        elements = ring.lattice.elements
        products = []
        for (x, y), entry in sorted(ring.table.items()):
            if x > y or entry is None:
                continue
            target, scalar = entry
            products.append({
                "left": list(elements[x]),
                "right": list(elements[y]),
                "product": list(elements[target]),
                "scalar": str(scalar),
            })
        return {
            "mode": ring.mode.value,
            "basis": [list(s) for s in elements],
            "products": products,
            "diagnostics": [
                {"s": list(d.s), "t": list(d.t), "detail": d.detail} for d in ring.diagnostics
            ],
        }

    def _get_timestamp(self) -> str:
        """Get current timestamp"""
        return datetime.now().isoformat()


# Create global instance
response_formatter = ResponseFormatter()

"""Reading and writing the plain-text file formats.

Polymatroid files::

    # comment
    N 4
    cage 1 1 1 2          (optional)
    S - 0                 (one line per subset, indices 1-based, comma separated)
    S 1,4 3

Subspace files::

    blocks 1 1 1 2
    1 0 1 2 1             (one basis row per line, entries p/q)

Lattice files reuse the flats output and add cover lines; the N line is optional::

    N 2
    0,0 : 0
    1,0 : 1
    cover 0,0 1,0
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from config.logging_config import get_logger
from core.errors import ParseError
from core.lattice import AbstractGradedLattice
from core.polymatroid import CagedPolymatroid, Multiset, Polymatroid, format_subset, validate
from core.realization import RationalSubspace

logger = get_logger('cli')


@dataclass
class PolymatroidFile:
    """A parsed polymatroid file before the axioms are checked"""

    ground_size: int
    rank_table: Tuple[int, ...]
    cage: Optional[Multiset] = None

    def to_polymatroid(self) -> Polymatroid:
        return validate(self.rank_table, self.ground_size)

    def to_caged(self, cage: Optional[Multiset] = None) -> CagedPolymatroid:
        poly = self.to_polymatroid()
        chosen = cage if cage is not None else self.cage
        if chosen is None:
            return CagedPolymatroid.tight(poly)
        return CagedPolymatroid(poly, chosen)


def _content_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if line:
            yield line_no, line


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(line_no, f"{what} {token!r} is not an integer")
    if value < 0:
        raise ParseError(line_no, f"{what} {token!r} is negative")
    return value


class FileHandler:
    """Parsers and serializers for polymatroid, subspace and lattice files"""

    def read_text(self, path: str) -> str:
        if not os.path.exists(path):
            raise ParseError(0, f"file not found: {path}")
        with open(path, 'r', encoding='utf-8') as handle:
            return handle.read()

    def write_text(self, path: str, text: str) -> str:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
        logger.info(f"wrote {path}")
        return path

    # Polymatroids

    def parse_polymatroid(self, text: str) -> PolymatroidFile:
        """
        Parse a polymatroid file

        Args:
            text (str): File contents

        Returns:
            PolymatroidFile: Ground size, rank table and optional cage
        """
        ground_size: Optional[int] = None
        cage: Optional[Multiset] = None
        ranks: Dict[int, int] = {}
        last_line = 0

        for line_no, line in _content_lines(text):
            last_line = line_no
            tokens = line.split()
            keyword = tokens[0]

            if keyword == 'N':
                if ground_size is not None:
                    raise ParseError(line_no, "N given twice")
                if len(tokens) != 2:
                    raise ParseError(line_no, "expected 'N <size>'")
                ground_size = _parse_int(tokens[1], line_no, "ground size")
                continue

            if ground_size is None:
                raise ParseError(line_no, "the first line must be 'N <size>'")

            if keyword == 'cage':
                if cage is not None:
                    raise ParseError(line_no, "cage given twice")
                if len(tokens) != ground_size + 1:
                    raise ParseError(line_no, f"cage needs {ground_size} entries")
                cage = tuple(_parse_int(t, line_no, "cage entry") for t in tokens[1:])
                continue

            if keyword != 'S':
                raise ParseError(line_no, f"unknown keyword {keyword!r}")
            if len(tokens) != 3:
                raise ParseError(line_no, "expected 'S <indices or -> <rank>'")
            mask = self._parse_subset(tokens[1], ground_size, line_no)
            if mask in ranks:
                raise ParseError(line_no, f"subset {format_subset(mask)} listed twice")
            ranks[mask] = _parse_int(tokens[2], line_no, "rank")

        if ground_size is None:
            raise ParseError(last_line + 1, "missing 'N <size>' line")
        missing = [mask for mask in range(1 << ground_size) if mask not in ranks]
        if missing:
            raise ParseError(
                last_line + 1,
                f"{len(missing)} subsets have no rank, first is {format_subset(missing[0])}",
            )
        return PolymatroidFile(ground_size, tuple(ranks[m] for m in range(1 << ground_size)), cage)

    def _parse_subset(self, token: str, ground_size: int, line_no: int) -> int:
        if token == '-':
            return 0
        mask = 0
        for part in token.split(','):
            index = _parse_int(part, line_no, "element")
            if not 1 <= index <= ground_size:
                raise ParseError(line_no, f"element {index} outside 1..{ground_size}")
            if mask >> (index - 1) & 1:
                raise ParseError(line_no, f"element {index} repeated")
            mask |= 1 << (index - 1)
        return mask

    def serialize_polymatroid(self, poly: Polymatroid, cage: Optional[Multiset] = None) -> str:
        lines = [f"N {poly.ground_size}"]
        if cage is not None:
            lines.append("cage " + " ".join(str(n) for n in cage))
        for mask in range(1 << poly.ground_size):
            lines.append(f"S {format_subset(mask)} {poly.rk(mask)}")
        return "\n".join(lines) + "\n"

    def load_caged(self, path: str, cage: Optional[Multiset] = None) -> CagedPolymatroid:
        return self.parse_polymatroid(self.read_text(path)).to_caged(cage)

    # Subspaces

    def parse_subspace(self, text: str) -> RationalSubspace:
        """
        Parse a subspace file

        Args:
            text (str): File contents

        Returns:
            RationalSubspace: Row-reduced subspace with its block widths
        """
        blocks: Optional[Multiset] = None
        rows: List[List[Fraction]] = []
        last_line = 0
        for line_no, line in _content_lines(text):
            last_line = line_no
            tokens = line.split()
            if tokens[0] == 'blocks':
                if blocks is not None:
                    raise ParseError(line_no, "blocks given twice")
                blocks = tuple(_parse_int(t, line_no, "block width") for t in tokens[1:])
                continue
            if blocks is None:
                raise ParseError(line_no, "the first line must be 'blocks <n_1> ... <n_N>'")
            if len(tokens) != sum(blocks):
                raise ParseError(line_no, f"row has {len(tokens)} entries, blocks need {sum(blocks)}")
            try:
                rows.append([Fraction(t) for t in tokens])
            except (ValueError, ZeroDivisionError):
                raise ParseError(line_no, f"row entries must be rationals p/q: {line}")
        if blocks is None:
            raise ParseError(last_line + 1, "missing 'blocks' line")
        return RationalSubspace.from_rows(blocks, rows)

    def serialize_subspace(self, subspace: RationalSubspace) -> str:
        lines = ["blocks " + " ".join(str(n) for n in subspace.cage)]
        for row in subspace.rows:
            lines.append(" ".join(str(x) for x in row))
        return "\n".join(lines) + "\n"

    # Lattices

    def parse_lattice(self, text: str) -> AbstractGradedLattice:
        """
        Parse a lattice file of '<label> : <rank>' lines and 'cover <lower> <upper>' lines

        Ranks are optional but must then be omitted for every element.
        """
        labels: List[str] = []
        ranks: List[Optional[int]] = []
        index: Dict[str, int] = {}
        covers: List[Tuple[int, int]] = []
        ground_size: Optional[int] = None

        for line_no, line in _content_lines(text):
            tokens = line.split()
            if tokens[0] == 'N' and len(tokens) == 2 and not labels and ground_size is None:
                ground_size = _parse_int(tokens[1], line_no, "ground size")
                continue
            if tokens[0] == 'cover':
                if len(tokens) != 3:
                    raise ParseError(line_no, "expected 'cover <lower> <upper>'")
                for token in tokens[1:]:
                    if token not in index:
                        raise ParseError(line_no, f"unknown element {token!r}")
                covers.append((index[tokens[1]], index[tokens[2]]))
                continue

            if ':' in line:
                label, rank_text = (part.strip() for part in line.split(':', 1))
                rank = _parse_int(rank_text, line_no, "rank")
            else:
                label, rank = line, None
            if not label or ' ' in label:
                raise ParseError(line_no, f"labels must be single tokens: {label!r}")
            if label in index:
                raise ParseError(line_no, f"element {label!r} listed twice")
            if ground_size is not None and ',' in label and len(label.split(',')) != ground_size:
                raise ParseError(line_no, f"multiset {label!r} needs {ground_size} entries")
            index[label] = len(labels)
            labels.append(label)
            ranks.append(rank)

        if not labels:
            raise ParseError(1, "lattice file has no elements")
        given = [r is not None for r in ranks]
        if any(given) and not all(given):
            raise ParseError(1, "give a rank for every element or for none")
        return AbstractGradedLattice(
            tuple(labels),
            tuple(covers),
            tuple(ranks) if all(given) else None,
        )


# Create global instance
file_handler = FileHandler()

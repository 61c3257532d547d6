"""Exact rational matrices as tuples of rows of Fractions"""

from fractions import Fraction
from typing import List, Sequence, Tuple

Row = Tuple[Fraction, ...]
Matrix = Tuple[Row, ...]


def to_fraction_rows(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row echelon form with zero rows dropped, and the pivot columns"""
    work = to_fraction_rows(rows)
    width = len(work[0]) if work else 0
    pivots: List[int] = []
    pivot_row = 0
    for col in range(width):
        found = next((r for r in range(pivot_row, len(work)) if work[r][col] != 0), None)
        if found is None:
            continue
        work[pivot_row], work[found] = work[found], work[pivot_row]
        lead = work[pivot_row][col]
        work[pivot_row] = [x / lead for x in work[pivot_row]]
        for r in range(len(work)):
            if r != pivot_row and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[pivot_row])]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(work):
            break
    return tuple(tuple(row) for row in work[:pivot_row]), tuple(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not rows[0]:
        return 0
    return len(rref(rows)[1])


def column_rank(rows: Sequence[Sequence], columns: Sequence[int]) -> int:
    """Rank of the submatrix on the given columns"""
    if not columns:
        return 0
    return rank([[row[c] for c in columns] for row in rows])


def matmul(left: Sequence[Sequence], right: Sequence[Sequence]) -> Matrix:
    inner = len(right)
    width = len(right[0]) if right else 0
    return tuple(
        tuple(sum((row[k] * right[k][j] for k in range(inner)), Fraction(0)) for j in range(width))
        for row in left
    )


def mat_vec(matrix: Sequence[Sequence], vector: Sequence) -> Row:
    return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in matrix)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    work = to_fraction_rows(matrix)
    n = len(work)
    det = Fraction(1)
    for col in range(n):
        found = next((r for r in range(col, n) if work[r][col] != 0), None)
        if found is None:
            return Fraction(0)
        if found != col:
            work[col], work[found] = work[found], work[col]
            det = -det
        lead = work[col][col]
        det *= lead
        for r in range(col + 1, n):
            factor = work[r][col] / lead
            if factor:
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return det


def orthogonal_complement_of_vector(w: Sequence[Fraction]) -> Matrix:
    """Basis of {x : x . w = 0}; w must be nonzero"""
    k = next(i for i, x in enumerate(w) if x != 0)
    basis = []
    for j in range(len(w)):
        if j == k:
            continue
        row = [Fraction(0)] * len(w)
        row[j] = Fraction(1)
        row[k] = -Fraction(w[j]) / w[k]
        basis.append(tuple(row))
    return tuple(basis)


def nullspace(matrix: Sequence[Sequence], width: int) -> Matrix:
    """Basis of {x : matrix x = 0} for x of length ``width``"""
    if not matrix:
        return identity(width)
    reduced, pivots = rref(matrix)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        vector = [Fraction(0)] * width
        vector[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vector[p] = -row[f]
        basis.append(tuple(vector))
    return tuple(basis)


def transpose(matrix: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(column) for column in zip(*matrix))

"""Dense exact linear algebra over the rationals.

Matrices are plain row-major lists of lists of Fractions.  Sizes here are
tiny (a few dozen rows at most), so clarity wins over cleverness.
"""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .rational import as_rational

Matrix = List[List[Fraction]]

__all__ = [
    "to_matrix",
    "transpose",
    "matmul",
    "matvec",
    "rref",
    "rank",
    "nullspace_basis",
    "solve_unique",
    "determinant",
    "identity",
]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    out = [[as_rational(x) for x in row] for row in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def identity(size: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]


def transpose(m: Sequence[Sequence]) -> Matrix:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def rref(m: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = [[as_rational(x) for x in row] for row in m]
    rows = len(a)
    cols = ncols if ncols is not None else (len(a[0]) if a else 0)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot_row = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[1])


def nullspace_basis(m: Sequence[Sequence], ncols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis vectors of the kernel of ``m``, read off the reduced echelon form.

    One vector per free column; the vector has a 1 in its free column and 0 in
    the other free columns.  ``ncols`` is needed only when ``m`` has no rows.
    """
    cols = ncols if ncols is not None else (len(m[0]) if m else 0)
    reduced, pivots = rref(m, cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * cols
        vec[free] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            vec[pc] = -row[free]
        basis.append(vec)
    return basis


def solve_unique(m: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """The unique solution of m x = b, or None if there is none or many."""
    cols = len(m[0]) if m else 0
    aug = [list(row) + [as_rational(bi)] for row, bi in zip(m, b)]
    reduced, pivots = rref(aug, cols + 1)
    if cols in pivots or len(pivots) != cols:
        return None
    x = [Fraction(0)] * cols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[cols]
    return x


def determinant(m: Sequence[Sequence]) -> Fraction:
    a = [[as_rational(x) for x in row] for row in m]
    size = len(a)
    det = Fraction(1)
    for c in range(size):
        p = next((i for i in range(c, size) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, size):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det

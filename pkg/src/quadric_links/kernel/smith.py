"""Integer Smith normal form with optional unimodular transforms."""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

__all__ = ["SmithForm", "smith_normal_form", "int_identity"]


@dataclass(frozen=True)
class SmithForm:
    """Diagonal of ``left @ m @ right``; transforms only when requested.

    ``left_inverse`` and ``right_inverse`` are the exact integer inverses of
    the two unimodular transforms.
    """

    diagonal: Tuple[int, ...]
    rank: int
    left: Optional[Tuple[Tuple[int, ...], ...]] = None
    right: Optional[Tuple[Tuple[int, ...], ...]] = None
    left_inverse: Optional[Tuple[Tuple[int, ...], ...]] = None
    right_inverse: Optional[Tuple[Tuple[int, ...], ...]] = None

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(x for x in self.diagonal if x != 0)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(x for x in self.diagonal if x > 1)


def int_identity(size: int) -> List[List[int]]:
    return [[int(i == j) for j in range(size)] for i in range(size)]


def smith_normal_form(m: Sequence[Sequence[int]], transforms: bool = False, ncols: Optional[int] = None) -> SmithForm:
    """Smith normal form by elimination with a minimal-absolute-value pivot.

    ``ncols`` gives the column count for a matrix with no rows.  With
    ``transforms`` the inverses are tracked alongside (each row operation on
    ``left`` is undone by a column operation on its inverse, and likewise
    for ``right``).
    """
    a = [[int(x) for x in row] for row in m]
    rows = len(a)
    cols = ncols if ncols is not None else (len(a[0]) if a else 0)
    left = int_identity(rows) if transforms else None
    right = int_identity(cols) if transforms else None
    left_inv = int_identity(rows) if transforms else None
    right_inv = int_identity(cols) if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if left is not None:
            left[i], left[j] = left[j], left[i]
            for row in left_inv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if right is not None:
            for row in right:
                row[i], row[j] = row[j], row[i]
            right_inv[i], right_inv[j] = right_inv[j], right_inv[i]

    def add_row(dst, src, f):
        # row[dst] += f * row[src]
        ra, rs = a[dst], a[src]
        for k in range(cols):
            if rs[k]:
                ra[k] += f * rs[k]
        if left is not None:
            la, ls = left[dst], left[src]
            for k in range(rows):
                if ls[k]:
                    la[k] += f * ls[k]
            for row in left_inv:
                if row[dst]:
                    row[src] -= f * row[dst]

    def add_col(dst, src, f):
        for row in a:
            if row[src]:
                row[dst] += f * row[src]
        if right is not None:
            for row in right:
                if row[src]:
                    row[dst] += f * row[src]
            ri, rd = right_inv[src], right_inv[dst]
            for k in range(cols):
                if rd[k]:
                    ri[k] -= f * rd[k]

    diagonal: List[int] = []
    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                row = a[i]
                for j in range(t, cols):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, rows):
                if any(a[i][j] % p for j in range(t + 1, cols)):
                    bad = i
                    break
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if t >= rows or t >= cols or a[t][t] == 0:
            # no nonzero entries remain
            diagonal.extend([0] * (min(rows, cols) - t))
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if left is not None:
                left[t] = [-x for x in left[t]]
                for row in left_inv:
                    row[t] = -row[t]
        diagonal.append(a[t][t])

    rank = sum(1 for x in diagonal if x)

    def frozen(mat):
        return tuple(tuple(r) for r in mat) if mat is not None else None

    return SmithForm(
        diagonal=tuple(diagonal),
        rank=rank,
        left=frozen(left),
        right=frozen(right),
        left_inverse=frozen(left_inv),
        right_inverse=frozen(right_inv),
    )

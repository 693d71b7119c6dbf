"""Pure-Python homology of cell lists with the simplicial boundary.

Cells are bitmasks.  ``cells_by_dim[q]`` lists the cells of degree q - 1,
so entry 0 is where the empty cell (mask 0) of an augmented complex sits.
The boundary of a cell is the usual alternating sum over removed vertices,
restricted to the cells present one degree lower.  For a simplicial complex
this is the augmented chain complex; for the critical cells of a cone
matching it is the Morse complex (see ``homology.py``).

The compiled module ``_elim`` implements the same two functions with the
same signatures.
"""
from typing import Dict, List, Sequence, Tuple

from .smith import smith_normal_form

__all__ = ["boundary_invariants", "cells_homology", "FaceTable"]


def _boundary_columns(cells: Sequence[int], lower_index: Dict[int, int]) -> List[Dict[int, int]]:
    cols = []
    for c in cells:
        col = {}
        sign = 1
        m = c
        while m:
            low = m & -m
            face = c ^ low
            r = lower_index.get(face)
            if r is not None:
                col[r] = sign
            sign = -sign
            m ^= low
        cols.append(col)
    return cols


def boundary_invariants(cols: List[Dict[int, int]]) -> Tuple[int, List[int]]:
    """Rank and the non-unit invariant factors of a sparse integer matrix.

    Unit pivots are eliminated first (each one splits off a 1 in the Smith
    form without changing the rest); whatever is left has no unit entries and
    goes through the dense Smith normal form.
    """
    # row -> {col: value} and col -> set(rows), kept in step
    rows: Dict[int, Dict[int, int]] = {}
    colrows: Dict[int, set] = {}
    for j, col in enumerate(cols):
        if col:
            colrows[j] = set(col)
            for i, v in col.items():
                rows.setdefault(i, {})[j] = v
    rank = 0
    progress = True
    while progress and rows:
        progress = False
        # columns in order of fill, cheapest first
        for j in sorted(colrows, key=lambda c: len(colrows[c])):
            rs = colrows.get(j)
            if not rs:
                colrows.pop(j, None)
                continue
            pivot = None
            for i in rs:
                v = rows[i][j]
                if v == 1 or v == -1:
                    if pivot is None or len(rows[i]) < len(rows[pivot]):
                        pivot = i
            if pivot is None:
                continue
            prow = rows.pop(pivot)
            pv = prow[j]
            for i in list(rs):
                if i == pivot:
                    continue
                row = rows[i]
                f = row[j] * pv  # pv is ±1, so row[j]/pv = row[j]*pv
                for k, val in prow.items():
                    nv = row.get(k, 0) - f * val
                    if nv:
                        if k not in row:
                            colrows[k].add(i)
                        row[k] = nv
                    else:
                        if k in row:
                            del row[k]
                            colrows[k].discard(i)
                if not row:
                    del rows[i]
            for k in prow:
                s = colrows.get(k)
                if s is not None:
                    s.discard(pivot)
            colrows.pop(j, None)
            rank += 1
            progress = True
    if not rows:
        return rank, []
    rlist = sorted(rows)
    clist = sorted({k for r in rows.values() for k in r})
    cidx = {c: t for t, c in enumerate(clist)}
    dense = []
    for r in rlist:
        line = [0] * len(clist)
        for k, v in rows[r].items():
            line[cidx[k]] = v
        dense.append(line)
    snf = smith_normal_form(dense)
    return rank + snf.rank, [x for x in snf.diagonal if x > 1]


def cells_homology(cells_by_dim: Sequence[Sequence[int]]) -> Tuple[List[int], List[List[int]]]:
    """Betti numbers and torsion per degree, degree q - 1 at list index q."""
    top = len(cells_by_dim)
    ranks = [0] * (top + 1)  # ranks[q]: rank of the boundary out of index q
    torsion: List[List[int]] = [[] for _ in range(top)]
    for q in range(1, top):
        lower = cells_by_dim[q - 1]
        if not lower or not cells_by_dim[q]:
            continue
        index = {c: i for i, c in enumerate(lower)}
        r, tors = boundary_invariants(_boundary_columns(cells_by_dim[q], index))
        ranks[q] = r
        torsion[q - 1] = sorted(tors)
    betti = [len(cells_by_dim[q]) - ranks[q] - ranks[q + 1] for q in range(top)]
    return betti, torsion


def _popcount(x: int) -> int:
    return bin(x).count("1")


class FaceTable:
    """All faces of a simplicial sphere as bitmasks, with subset queries.

    ``induced(mask, cone_bit)`` is the homology of the induced subcomplex on
    ``mask``.  With a vertex ``cone_bit`` inside ``mask`` it uses the critical
    cells of the cone matching σ ↔ σ ∪ {v}: faces avoiding v whose union with
    v is not a face.  ``link(vmask, cone_bit)`` does the same for the complex
    of nonempty J ⊆ vmask whose complement in vmask is not a face; there the
    critical cells are J = vmask ∖ G for G ∋ v with G ∖ {v} a face and G not.
    Results are (betti, torsion) lists indexed by degree + 1.
    """

    def __init__(self, faces):
        self.faces = sorted(set(faces))
        self.face_set = frozenset(self.faces)
        self.top = max(_popcount(f) for f in self.faces) if self.faces else 0

    def _grade(self, cells, top):
        by = [[] for _ in range(top + 1)]
        for c in cells:
            by[_popcount(c)].append(c)
        while len(by) > 1 and not by[-1]:
            by.pop()
        return by

    def induced(self, mask: int, cone_bit: int = 0):
        if mask == 0:
            return [1], [[]]
        fs = self.face_set
        if cone_bit:
            rest = mask & ~cone_bit
            cells = [f for f in self.faces if f and not f & ~rest and (f | cone_bit) not in fs]
        else:
            cells = [f for f in self.faces if not f & ~mask]
        by = self._grade(cells, self.top)
        return cells_homology(by)

    def link(self, vmask: int, cone_bit: int):
        fs = self.face_set
        rest = vmask & ~cone_bit
        cells = [vmask ^ (f | cone_bit) for f in self.faces if not f & ~rest and (f | cone_bit) not in fs]
        by = self._grade(cells, _popcount(vmask))
        return cells_homology(by)

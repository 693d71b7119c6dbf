"""Quadric configurations: admissibility, faces, circles and constructions.

A configuration is a p×n rational matrix whose columns A_1..A_n are the
coefficient vectors of the quadrics Σ A_i |z_i|² = 0.  Admissible means 0 lies
in the convex hull of all columns and in no hull of p or fewer columns.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InadmissibleConfiguration, InvalidInput
from .kernel import HullCertificate, as_rational, format_rational, nullspace_basis, zero_in_convex_hull

__all__ = [
    "Configuration",
    "AdmissibilityReport",
    "LinkDescriptor",
    "check_admissible",
    "require_admissible",
    "face_condition",
    "indispensable_points",
    "split_circles",
    "add_circles",
    "product",
    "suspend_for_complex_structure",
    "affine_extension",
    "lvm_report",
    "gale_transform",
    "link_descriptor",
]


@dataclass(frozen=True)
class Configuration:
    """Columns of the coefficient matrix, each a tuple of p Fractions.

    ``labels`` names the columns (default "1".."n"); polytopes built from the
    configuration inherit these names for their facets.
    """

    p: int
    columns: Tuple[Tuple[Fraction, ...], ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        cols = tuple(tuple(as_rational(x) for x in col) for col in self.columns)
        if not cols:
            raise InvalidInput("a configuration needs at least one column")
        if self.p < 0 or any(len(col) != self.p for col in cols):
            raise InvalidInput(f"every column must have exactly p={self.p} entries")
        object.__setattr__(self, "columns", cols)
        labels = tuple(str(x) for x in self.labels) if self.labels else tuple(str(i + 1) for i in range(len(cols)))
        if len(labels) != len(cols) or len(set(labels)) != len(labels):
            raise InvalidInput("labels must be distinct, one per column")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.columns)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], n: Optional[int] = None, labels: Sequence[str] = ()) -> "Configuration":
        rows = [[as_rational(x) for x in r] for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise InvalidInput("ragged matrix")
        else:
            if n is None:
                raise InvalidInput("a p=0 configuration needs an explicit column count")
            width = n
        cols = tuple(tuple(r[j] for r in rows) for j in range(width))
        return cls(len(rows), cols, tuple(labels))

    def rows(self) -> List[List[Fraction]]:
        return [[col[r] for col in self.columns] for r in range(self.p)]

    def translate(self, v: Sequence) -> "Configuration":
        v = [as_rational(x) for x in v]
        if len(v) != self.p:
            raise InvalidInput(f"translation needs {self.p} entries")
        return Configuration(self.p, tuple(tuple(a + b for a, b in zip(col, v)) for col in self.columns), self.labels)

    def to_json(self) -> dict:
        out = {"n": self.n, "p": self.p, "columns": [[format_rational(x) for x in col] for col in self.columns]}
        if self.labels != tuple(str(i + 1) for i in range(self.n)):
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Configuration":
        try:
            p = int(data["p"])
            cols = [[as_rational(x) for x in col] for col in data["columns"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"configuration JSON needs 'p' and 'columns': {exc}") from exc
        if "n" in data and int(data["n"]) != len(cols):
            raise InvalidInput(f"'n' is {data['n']} but {len(cols)} columns were given")
        return cls(p, tuple(tuple(c) for c in cols), tuple(data.get("labels", ())))


@dataclass(frozen=True)
class AdmissibilityReport:
    siegel: HullCertificate
    violator: Optional[Tuple[int, ...]]  # 1-based indices, smallest size then lexicographic
    violator_witness: Optional[HullCertificate]
    indispensable: Tuple[int, ...]  # 1-based
    indispensable_separators: Dict[int, Tuple[Fraction, ...]] = field(default_factory=dict)

    @property
    def weakly_hyperbolic(self) -> bool:
        return self.violator is None

    @property
    def admissible(self) -> bool:
        return self.siegel.member and self.violator is None

    @property
    def k(self) -> int:
        return len(self.indispensable)

    def to_json(self) -> dict:
        def cert(c: Optional[HullCertificate]):
            if c is None:
                return None
            if c.member:
                return {"member": True, "witness": [format_rational(x) for x in c.witness]}
            return {"member": False, "separator": [format_rational(x) for x in c.separator]}

        return {
            "admissible": self.admissible,
            "siegel": cert(self.siegel),
            "weak_hyperbolicity": "pass" if self.violator is None else {"violator": list(self.violator), "certificate": cert(self.violator_witness)},
            "indispensable": list(self.indispensable),
            "indispensable_separators": {str(i): [format_rational(x) for x in s] for i, s in sorted(self.indispensable_separators.items())},
            "k": self.k,
        }


@dataclass(frozen=True)
class LinkDescriptor:
    n: int
    p: int
    k: int
    dim_x: int
    d: int
    connectivity: Optional[int] = None

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "k": self.k, "dim_x": self.dim_x, "d": self.d, "connectivity": self.connectivity}


def _integer_columns(c: Configuration) -> List[Tuple[int, ...]]:
    # positive rescaling of a column does not change any hull-of-0 question
    out = []
    for col in c.columns:
        m = lcm(*(x.denominator for x in col)) if col else 1
        out.append(tuple(int(x * m) for x in col))
    return out


def _independent(vectors: Sequence[Sequence[int]]) -> bool:
    """Linear independence of integer vectors by fraction-free elimination."""
    rows = [list(v) for v in vectors]
    if not rows:
        return True
    width = len(rows[0])
    if len(rows) > width:
        return False
    r = 0
    prev = 1
    for col in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        for i in range(r + 1, len(rows)):
            a = rows[i][col]
            rows[i] = [(pv * x - a * y) // prev for x, y in zip(rows[i], rows[r])]
        prev = pv
        r += 1
        if r == len(rows):
            return True
    return r == len(rows)


def _hull(cols: Sequence[Sequence], dim: int) -> HullCertificate:
    return zero_in_convex_hull(cols, dim)


def _subset_contains_zero(icols, subset, dim) -> Optional[HullCertificate]:
    pts = [icols[i] for i in subset]
    if _independent(pts):
        return None
    cert = _hull(pts, dim)
    return cert if cert.member else None


def check_admissible(c: Configuration) -> AdmissibilityReport:
    """Siegel and weak hyperbolicity conditions plus the indispensable points.

    The minimal violator is the lexicographically first index set of the
    smallest size whose hull contains 0.  Independent vectors never have 0 in
    their hull, which prunes almost every subset.
    """
    p, n = c.p, c.n
    icols = _integer_columns(c)
    siegel = _hull(icols, p)
    violator = None
    witness = None
    top = min(p, n)
    if top > 0:
        found = False
        for subset in combinations(range(n), top):
            if _subset_contains_zero(icols, subset, p) is not None:
                found = True
                break
        if found:
            for size in range(1, top + 1):
                for subset in combinations(range(n), size):
                    cert = _subset_contains_zero(icols, subset, p)
                    if cert is not None:
                        violator = tuple(i + 1 for i in subset)
                        witness = cert
                        break
                if violator is not None:
                    break
    indispensable = []
    separators = {}
    for i in range(n):
        others = [icols[j] for j in range(n) if j != i]
        cert = _hull(others, p)
        if not cert.member:
            indispensable.append(i + 1)
            separators[i + 1] = cert.separator
    return AdmissibilityReport(siegel, violator, witness, tuple(indispensable), separators)


def require_admissible(c: Configuration) -> AdmissibilityReport:
    rep = check_admissible(c)
    if not rep.siegel.member:
        raise InadmissibleConfiguration("Siegel condition fails: 0 is not in the convex hull of the columns")
    if rep.violator is not None:
        raise InadmissibleConfiguration(
            f"weak hyperbolicity fails: 0 lies in the hull of columns {list(rep.violator)} (at most p={c.p} of them)"
        )
    return rep


def indispensable_points(c: Configuration) -> Tuple[int, ...]:
    icols = _integer_columns(c)
    return tuple(i + 1 for i in range(c.n) if not _hull([icols[j] for j in range(c.n) if j != i], c.p).member)


class FaceOracle:
    """Memoised face queries on one configuration (1-based index sets)."""

    def __init__(self, c: Configuration):
        self.c = c
        self._cols = _integer_columns(c)
        self._cache: Dict[int, bool] = {}

    def is_face(self, i_set: Iterable[int]) -> bool:
        mask = 0
        for i in i_set:
            if not 1 <= i <= self.c.n:
                raise InvalidInput(f"index {i} outside 1..{self.c.n}")
            mask |= 1 << (i - 1)
        hit = self._cache.get(mask)
        if hit is None:
            comp = [self._cols[j] for j in range(self.c.n) if not mask >> j & 1]
            if not comp:
                hit = False
            elif self.c.p == 0:
                hit = True
            else:
                hit = _hull(comp, self.c.p).member
            self._cache[mask] = hit
        return hit


def face_condition(c: Configuration, i_set: Iterable[int]) -> bool:
    """True iff 0 lies in the convex hull of the columns outside ``i_set``."""
    return FaceOracle(c).is_face(i_set)


def split_circles(c: Configuration) -> Tuple[Configuration, int]:
    """Remove indispensable columns one at a time by projecting along them.

    With A_i indispensable and row r where a_{r,i} ≠ 0, every other column
    becomes A_j - A_i·a_{r,j}/a_{r,i} with coordinate r dropped.  Labels of the
    surviving columns are kept.
    """
    require_admissible(c)
    k = 0
    cur = c
    while True:
        ind = indispensable_points(cur)
        if not ind:
            return cur, k
        i = ind[0] - 1
        col_i = cur.columns[i]
        r = next(t for t in range(cur.p) if col_i[t] != 0)
        new_cols = []
        new_labels = []
        for j, col in enumerate(cur.columns):
            if j == i:
                continue
            f = col[r] / col_i[r]
            proj = tuple(col[t] - col_i[t] * f for t in range(cur.p) if t != r)
            new_cols.append(proj)
            new_labels.append(cur.labels[j])
        cur = Configuration(cur.p - 1, tuple(new_cols), tuple(new_labels))
        k += 1


def add_circles(c: Configuration, k: int) -> Configuration:
    """Append k indispensable columns, one bridging row each."""
    cur = c
    for _ in range(k):
        cols = [col + (Fraction(-1),) for col in cur.columns]
        cols.append(tuple(Fraction(0) for _ in range(cur.p)) + (Fraction(1),))
        labels = cur.labels + (_fresh_label(cur.labels, "c"),)
        cur = Configuration(cur.p + 1, tuple(cols), labels)
    return cur


def _fresh_label(existing: Sequence[str], stem: str) -> str:
    t = 1
    while f"{stem}{t}" in existing:
        t += 1
    return f"{stem}{t}"


def product(c1: Configuration, c2: Configuration) -> Configuration:
    """Block matrix [[A, 0], [-1 … -1, 1 … 1], [0, B]], columns numbered afresh."""
    require_admissible(c1)
    require_admissible(c2)
    p = c1.p + c2.p + 1
    zero1 = tuple(Fraction(0) for _ in range(c1.p))
    zero2 = tuple(Fraction(0) for _ in range(c2.p))
    cols = [col + (Fraction(-1),) + zero2 for col in c1.columns]
    cols += [zero1 + (Fraction(1),) + col for col in c2.columns]
    out = Configuration(p, tuple(cols))
    require_admissible(out)
    return out


def suspend_for_complex_structure(c: Configuration) -> Configuration:
    """Odd p: append one column (0,…,0,-1) and a row of ones.  Even p: two."""
    require_admissible(c)
    one = Fraction(1)
    if c.p % 2 == 1:
        cols = [col + (one,) for col in c.columns]
        cols.append(tuple(Fraction(0) for _ in range(c.p)) + (Fraction(-1),))
        labels = c.labels + (_fresh_label(c.labels, "s"),)
        out = Configuration(c.p + 1, tuple(cols), labels)
    else:
        cols = [col + (one, one) for col in c.columns]
        zero = tuple(Fraction(0) for _ in range(c.p))
        cols.append(zero + (Fraction(-1), Fraction(0)))
        cols.append(zero + (Fraction(0), Fraction(-1)))
        first = _fresh_label(c.labels, "s")
        second = _fresh_label(c.labels + (first,), "s")
        out = Configuration(c.p + 2, tuple(cols), c.labels + (first, second))
    require_admissible(out)
    return out


def affine_extension(c: Configuration, l: int) -> Configuration:
    """The complex matrix that adds 2l indispensable points, in real form.

    Complex coordinate r is the real row pair (2r, 2r+1) = (Re, Im).  Each of
    the l new complex rows has -1-i under every old column and the pair
    (1, i) under its own two new columns.
    """
    if c.p % 2:
        raise InvalidInput("the complex form needs an even number of rows")
    if l < 0:
        raise InvalidInput("l must be nonnegative")
    p = c.p
    total_rows = p + 2 * l
    cols = []
    for col in c.columns:
        cols.append(tuple(col) + tuple(Fraction(-1) for _ in range(2 * l)))
    for r in range(l):
        for re, im in ((1, 0), (0, 1)):
            v = [Fraction(0)] * total_rows
            v[p + 2 * r] = Fraction(re)
            v[p + 2 * r + 1] = Fraction(im)
            cols.append(tuple(v))
    labels = list(c.labels)
    for _ in range(2 * l):
        labels.append(_fresh_label(labels, "a"))
    return Configuration(total_rows, tuple(cols), tuple(labels))


def lvm_report(c: Configuration) -> dict:
    if c.p % 2:
        raise InvalidInput(f"p={c.p} is odd; the complex-manifold report needs p = 2m")
    rep = require_admissible(c)
    m = c.p // 2
    out = {
        "m": m,
        "n": c.n,
        "complex_dimension": c.n - m - 1,
        "indispensable": list(rep.indispensable),
        "indispensable_count": rep.k,
        "affine_criterion": rep.k >= m + 1,
    }
    if m == 0:
        out["note"] = "m = 0: the manifold is complex projective space of dimension n - 1"
    return out


def gale_transform(points: Sequence[Sequence]) -> Configuration:
    """Columns from the kernel of [points; 1 … 1] (reduced-echelon basis)."""
    pts = [[as_rational(x) for x in pt] for pt in points]
    n = len(pts)
    q = len(pts[0]) if pts else 0
    system = [[pt[r] for pt in pts] for r in range(q)] + [[Fraction(1)] * n]
    basis = nullspace_basis(system, n)
    p = len(basis)
    cols = tuple(tuple(basis[b][i] for b in range(p)) for i in range(n))
    return Configuration(p, cols)


def link_descriptor(c: Configuration, neighbourliness: Optional[int] = None) -> LinkDescriptor:
    rep = require_admissible(c)
    d = c.n - c.p - 1
    dim_x = 2 * c.n - c.p - 1
    if rep.k > 0:
        conn = 0
    elif neighbourliness is not None:
        conn = 2 * (neighbourliness + 1)
    else:
        conn = None
    return LinkDescriptor(c.n, c.p, rep.k, dim_x, d, conn)

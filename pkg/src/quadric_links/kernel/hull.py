"""Exact convex-hull membership of the origin by two-phase simplex.

``zero_in_convex_hull`` decides whether 0 is a convex combination of the
given points and always returns a certificate that can be checked by
substitution: the convex weights, or a functional positive on every point.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .rational import as_rational

__all__ = ["HullCertificate", "zero_in_convex_hull", "LPResult", "solve_standard_lp"]


@dataclass(frozen=True)
class HullCertificate:
    member: bool
    witness: Optional[Tuple[Fraction, ...]] = None
    separator: Optional[Tuple[Fraction, ...]] = None

    def verify(self, points: Sequence[Sequence[Fraction]], dim: int) -> bool:
        if self.member:
            lam = self.witness
            if lam is None or len(lam) != len(points) or self.separator is not None:
                return False
            if any(x < 0 for x in lam) or sum(lam) != 1:
                return False
            return all(sum(l * pt[r] for l, pt in zip(lam, points)) == 0 for r in range(dim))
        c = self.separator
        if c is None or len(c) != dim or self.witness is not None:
            return False
        return all(sum(ci * xi for ci, xi in zip(c, pt)) > 0 for pt in points)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[Tuple[Fraction, ...]]
    farkas: Optional[Tuple[Fraction, ...]]  # y with y.A >= 0 and y.b < 0 when infeasible
    objective: Optional[Fraction] = None


def _pivot(tab: List[List[Fraction]], basis: List[int], row: int, col: int) -> None:
    prow = tab[row]
    inv = 1 / prow[col]
    if inv != 1:
        tab[row] = prow = [x * inv for x in prow]
    for i, r in enumerate(tab):
        if i != row:
            f = r[col]
            if f:
                tab[i] = [x - f * y if y else x for x, y in zip(r, prow)]
    basis[row] = col


def _run_simplex(tab, basis, cost_row_index, allowed) -> str:
    """Minimise the objective in tab[cost_row_index] with Bland's rule.

    The cost row stores reduced costs; the last column of each row is the
    right-hand side.  Only columns in ``allowed`` may enter.
    """
    m = cost_row_index
    while True:
        cost = tab[m]
        entering = next((j for j in allowed if cost[j] < 0), None)
        if entering is None:
            return "optimal"
        best = None
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, best[1], entering)


def solve_standard_lp(a_eq: Sequence[Sequence], b_eq: Sequence, c: Optional[Sequence] = None) -> LPResult:
    """min c.x subject to a_eq x = b_eq, x >= 0, by two-phase simplex.

    Exact rational pivoting with Bland's rule, so it always terminates and
    its answer does not depend on floating point.
    """
    rows = [[as_rational(x) for x in r] for r in a_eq]
    rhs = [as_rational(x) for x in b_eq]
    m = len(rows)
    n = len(rows[0]) if rows else (len(c) if c is not None else 0)
    signs = []
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
            signs.append(-1)
        else:
            signs.append(1)
    width = n + m + 1
    tab = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab.append(rows[i] + art + [rhs[i]])
    # phase-one reduced costs: artificial costs 1 priced out of the row sums
    phase1 = [Fraction(0)] * width
    for i in range(m):
        for j in range(n):
            phase1[j] -= tab[i][j]
        phase1[-1] -= rhs[i]
    tab.append(phase1)
    basis = [n + i for i in range(m)]
    _run_simplex(tab, basis, m, range(n + m))
    if tab[m][-1] != 0:
        # y_i = 1 - reduced cost of artificial i is the optimal phase-one dual
        y = [1 - tab[m][n + i] for i in range(m)]
        farkas = tuple(-yi * s for yi, s in zip(y, signs))
        return LPResult("infeasible", None, farkas)
    # drive artificial variables out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    keep = [i for i in range(m) if basis[i] < n]
    tab = [tab[i] for i in keep] + [tab[m]]
    basis = [basis[i] for i in keep]
    mm = len(basis)
    costs = [as_rational(x) for x in c] if c is not None else [Fraction(0)] * n
    obj = [Fraction(0)] * width
    for j in range(n):
        obj[j] = costs[j]
    for i in range(mm):
        cb = costs[basis[i]]
        if cb:
            obj = [o - cb * t for o, t in zip(obj, tab[i])]
    tab[mm] = obj
    status = _run_simplex(tab, basis, mm, range(n))
    x = [Fraction(0)] * n
    for i in range(mm):
        x[basis[i]] = tab[i][-1]
    if status == "unbounded":
        return LPResult("unbounded", tuple(x), None)
    return LPResult("optimal", tuple(x), None, sum(ci * xi for ci, xi in zip(costs, x)))


def zero_in_convex_hull(points: Sequence[Sequence], dim: Optional[int] = None) -> HullCertificate:
    """Decide 0 ∈ conv(points) exactly.

    ``dim`` is required only for an empty point list (it fixes the length of
    the trivial separator).
    """
    pts = [tuple(as_rational(x) for x in p) for p in points]
    if dim is None:
        dim = len(pts[0]) if pts else 0
    if any(len(p) != dim for p in pts):
        raise ValueError("points of unequal dimension")
    if not pts:
        return HullCertificate(False, None, tuple(Fraction(0) for _ in range(dim)))
    a_eq = [[p[r] for p in pts] for r in range(dim)] + [[Fraction(1)] * len(pts)]
    b_eq = [Fraction(0)] * dim + [Fraction(1)]
    res = solve_standard_lp(a_eq, b_eq)
    if res.status == "infeasible":
        y = res.farkas
        # y.A >= 0 and y.b < 0: the first dim entries separate strictly
        cert = HullCertificate(False, None, tuple(y[:dim]))
    else:
        cert = HullCertificate(True, tuple(res.x), None)
    if not cert.verify(pts, dim):
        raise ArithmeticError("hull certificate failed its own substitution check")
    return cert

"""Integer cohomology and cup products of the link of a simple polytope.

For a polytope with n facets in dimension d the link X has dimension n + d.
The group part sums, over facet subsets I, the reduced homology of the
induced dual subcomplex K_I shifted into degree i = d + |Ī| - j - 1 (Ī is
the complement of I).  Products are computed on the link complexes
L_I = {J ⊆ Ī : Ī ∖ J is not a face}, whose degree-K homology carries the
classes of degree i = 2|Ī| - K - 2, with the join formula

    a ⌣ b = (-1)^{n + K(K'+1) + 1} ⟨i_J̄ - i_Ī⟩ ∗ c_a ∗ c_b  in L_{I ∩ J}

when I ∪ J is every facet, and zero otherwise.  The join is the exterior
product of vertex sets, so overlapping terms vanish and signs come from
sorting.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb, gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidInput, InvariantViolation, RefusedComputation
from .homology import CycleBasis, HomologySummary, SubsetHomology, cycle_basis_of_cells, mask_of, members_of
from .kernel import smith_normal_form
from .polytopes import CombPolytope, neighbourliness, one_cycles_of_facets, is_truncated_simplex

__all__ = [
    "DEFAULT_MAX_N",
    "DEFAULT_PRODUCT_MAX_N",
    "Summand",
    "CohomologyReport",
    "cohomology_of",
    "homology_of",
    "universal_coefficients_agree",
    "CohomologyClass",
    "CupRing",
    "cup_product",
    "sign_epsilon",
    "commutativity_sign_check",
    "VertexCutPrediction",
    "vertex_cut_update",
    "multiplication_invariants",
    "predicted_multiplication_invariants",
    "classify_ring",
    "connected_sum_from_betti",
    "kunneth_with_torus",
    "kunneth_product",
    "primary_torsion",
]

DEFAULT_MAX_N = 22
DEFAULT_PRODUCT_MAX_N = 12

Group = Tuple[int, Tuple[int, ...]]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _threads(threads: Optional[int]) -> int:
    if threads is None:
        env = os.environ.get("QUADRIC_LINKS_THREADS")
        try:
            threads = int(env) if env else 1
        except ValueError:
            raise InvalidInput(f"QUADRIC_LINKS_THREADS must be an integer, got {env!r}") from None
    return max(1, threads)


def _check_cap(p: CombPolytope, max_n: int) -> None:
    if p.n > max_n:
        raise RefusedComputation(f"the subset sweep needs 2^{p.n} subsets; raise --max-n above {max_n} to allow it")


def _sweep(masks: Sequence[int], worker, threads: int) -> Dict[int, HomologySummary]:
    """Evaluate ``worker`` on every mask, split into contiguous chunks across threads."""
    if threads == 1 or len(masks) < 1024:
        return {m: worker(m) for m in masks}
    size = (len(masks) + threads - 1) // threads
    chunks = [masks[t : t + size] for t in range(0, len(masks), size)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda chunk: [(m, worker(m)) for m in chunk], chunks))
    return {m: s for part in parts for m, s in part}


# ---------------------------------------------------------------- group part


@dataclass(frozen=True)
class Summand:
    """One piece of H^i(X): H̃_j(K_I) placed in degree i, with its link degree."""

    support: Tuple[int, ...]
    degree: int
    source_degree: int
    betti: int
    torsion: Tuple[int, ...]
    complement_size: int

    @property
    def link_degree(self) -> int:
        return 2 * self.complement_size - self.degree - 2

    def to_json(self, labels: Sequence[str]) -> dict:
        return {
            "support": [labels[v - 1] for v in self.support],
            "betti": self.betti,
            "torsion": list(self.torsion),
            "source_degree": self.source_degree,
        }


class CohomologyReport:
    """H^*(X) by degree, each degree a list of summands keyed by support."""

    def __init__(self, n: int, d: int, labels: Sequence[str], summands: Iterable[Summand]):
        self.n = n
        self.d = d
        self.labels = tuple(labels)
        self.dim_x = n + d
        by = {i: [] for i in range(self.dim_x + 1)}
        for s in summands:
            if not 0 <= s.degree <= self.dim_x:
                raise InvariantViolation(f"summand in degree {s.degree} outside 0..{self.dim_x}")
            by[s.degree].append(s)
        for i in by:
            by[i].sort(key=lambda s: (mask_of(s.support), s.source_degree))
        self.by_degree = by

    def summands(self, i: int) -> List[Summand]:
        return list(self.by_degree.get(i, []))

    def betti(self, i: int) -> int:
        return sum(s.betti for s in self.by_degree.get(i, []))

    def torsion(self, i: int) -> Tuple[int, ...]:
        return tuple(sorted(t for s in self.by_degree.get(i, []) for t in s.torsion))

    def betti_vector(self) -> List[int]:
        return [self.betti(i) for i in range(self.dim_x + 1)]

    def groups(self) -> Dict[int, Group]:
        return {i: (self.betti(i), self.torsion(i)) for i in range(self.dim_x + 1)}

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti_vector()))

    def poincare_failures(self) -> List[str]:
        """Degrees where b_i ≠ b_{N-i} or tors H^i ≠ tors H^{N-i+1}."""
        out = []
        top = self.dim_x
        for i in range(top + 1):
            if self.betti(i) != self.betti(top - i):
                out.append(f"b_{i} = {self.betti(i)} but b_{top - i} = {self.betti(top - i)}")
            if 1 <= i <= top and self.torsion(i) != self.torsion(top - i + 1):
                out.append(f"torsion of H^{i} {list(self.torsion(i))} differs from H^{top - i + 1} {list(self.torsion(top - i + 1))}")
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "dim_x": self.dim_x,
            "betti": self.betti_vector(),
            "degrees": [
                {
                    "degree": i,
                    "betti": self.betti(i),
                    "torsion": list(self.torsion(i)),
                    "summands": [s.to_json(self.labels) for s in self.by_degree[i]],
                }
                for i in range(self.dim_x + 1)
            ],
        }

    def table(self) -> str:
        lines = [f"dim X = {self.dim_x}  (n = {self.n}, d = {self.d})"]
        for i in range(self.dim_x + 1):
            group = _describe_group(self.betti(i), self.torsion(i))
            parts = []
            for s in self.by_degree[i]:
                names = ",".join(self.labels[v - 1] for v in s.support) or "∅"
                parts.append(f"{{{names}}}: {_describe_group(s.betti, s.torsion)}")
            tail = "   " + "; ".join(parts) if parts else ""
            lines.append(f"H^{i:<3}= {group}{tail}")
        return "\n".join(lines)


def _describe_group(betti: int, torsion: Sequence[int]) -> str:
    terms = ([f"Z^{betti}" if betti > 1 else "Z"] if betti else []) + [f"Z/{t}" for t in torsion]
    return " + ".join(terms) if terms else "0"


def subset_homology(p: CombPolytope, max_n: int = DEFAULT_MAX_N, threads: Optional[int] = None) -> Dict[int, HomologySummary]:
    """H̃_*(K_I) for every facet subset I, keyed by bitmask."""
    _check_cap(p, max_n)
    sh = SubsetHomology(p)
    empty = HomologySummary({})
    faces = sh.face_set

    def worker(mask):
        if mask and mask in faces:
            return empty  # a simplex is contractible
        return sh.induced(mask)

    return _sweep(list(range(1 << p.n)), worker, _threads(threads))


def cohomology_of(
    p: CombPolytope,
    max_n: int = DEFAULT_MAX_N,
    threads: Optional[int] = None,
    induced: Optional[Dict[int, HomologySummary]] = None,
) -> CohomologyReport:
    """H^*(X) as the sum of shifted H̃_*(K_I) over all facet subsets."""
    if induced is None:
        induced = subset_homology(p, max_n, threads)
    n, d = p.n, p.d
    summands = []
    for mask in range(1 << n):
        comp = n - _popcount(mask)
        for j, (b, t) in induced[mask].groups.items():
            i = d + comp - j - 1
            summands.append(Summand(members_of(mask), i, j, b, t, comp))
    report = CohomologyReport(n, d, p.labels, summands)
    if report.betti(0) != 1 or report.betti(report.dim_x) != 1:
        raise InvariantViolation("H^0 and the top group must both be Z")
    return report


def homology_of(p: CombPolytope, max_n: int = DEFAULT_MAX_N, threads: Optional[int] = None) -> Dict[int, Group]:
    """H_i(X) = ⊕_I H̃_{i-|I|-1}(K_I), I = ∅ giving H_0 = Z.

    Evaluated on the full induced complexes, without the cone reduction the
    cohomology sweep uses, so the two results are independent.
    """
    _check_cap(p, max_n)
    sh = SubsetHomology(p)
    table = sh.table
    worker = lambda mask: HomologySummary.from_kernel(table.induced(mask, 0))
    induced = _sweep(list(range(1 << p.n)), worker, _threads(threads))
    betti = [0] * (p.n + p.d + 1)
    torsion: List[List[int]] = [[] for _ in betti]
    for mask, summary in induced.items():
        size = _popcount(mask)
        for j, (b, t) in summary.groups.items():
            i = j + size + 1
            if not 0 <= i <= p.n + p.d:
                raise InvariantViolation(f"homology summand in degree {i} outside the manifold's range")
            betti[i] += b
            torsion[i].extend(t)
    return {i: (betti[i], tuple(sorted(torsion[i]))) for i in range(len(betti))}


def universal_coefficients_agree(report: CohomologyReport, homology: Dict[int, Group]) -> List[str]:
    """Failures of rank H^i = rank H_i and tors H^i = tors H_{i-1}."""
    out = []
    for i in range(report.dim_x + 1):
        if report.betti(i) != homology[i][0]:
            out.append(f"rank H^{i} = {report.betti(i)} but rank H_{i} = {homology[i][0]}")
        below = homology[i - 1][1] if i >= 1 else ()
        if report.torsion(i) != tuple(below):
            out.append(f"torsion of H^{i} {list(report.torsion(i))} but of H_{i - 1} {list(below)}")
    return out


# ---------------------------------------------------------------- products


@dataclass(frozen=True)
class CohomologyClass:
    """A class of degree i supported on I, in the link-complex basis of L_I.

    ``coordinates`` are taken in the generators of H̃_K(L_I) for the link
    degree K = 2|Ī| - i - 2, torsion entries reduced mod their order.  The
    unit has support every facet and coordinates (c,).
    """

    support: int
    degree: int
    coordinates: Tuple[int, ...]
    n: int

    @property
    def complement(self) -> int:
        return ((1 << self.n) - 1) ^ self.support

    @property
    def link_degree(self) -> int:
        return 2 * _popcount(self.complement) - self.degree - 2

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def support_labels(self) -> Tuple[int, ...]:
        return members_of(self.support)


def _wedge_sign(first: int, second: int) -> int:
    """Sign sorting the vertices of ``first`` followed by ``second`` (disjoint masks)."""
    swaps = 0
    m = second
    while m:
        low = m & -m
        swaps += _popcount(first & ~((low << 1) - 1))
        m ^= low
    return -1 if swaps % 2 else 1


def _wedge(left: Dict[int, int], right: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for a, x in left.items():
        for b, y in right.items():
            if a & b:
                continue
            c = a | b
            v = out.get(c, 0) + _wedge_sign(a, b) * x * y
            if v:
                out[c] = v
            else:
                out.pop(c, None)
    return out


def _parity_sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


class CupRing:
    """Cup products for one polytope on the link-complex side.

    Cycle bases of the link complexes are built on demand and cached; their
    size grows like 2^|Ī|, so explicit products are capped at ``max_n``.
    """

    def __init__(self, p: CombPolytope, max_n: int = DEFAULT_PRODUCT_MAX_N):
        if p.n > max_n:
            raise RefusedComputation(f"explicit products need link complexes on up to {p.n} vertices; cap is {max_n}")
        self.p = p
        self.n = p.n
        self.d = p.d
        self.full = (1 << p.n) - 1
        self.faces = p.face_masks()
        self._bases: Dict[int, CycleBasis] = {}
        self.vertices = tuple(range(1, p.n + 1))

    @property
    def dim_x(self) -> int:
        return self.n + self.d

    def in_delta(self, support: int) -> bool:
        return (self.full ^ support) not in self.faces

    def link_cells(self, support: int) -> List[int]:
        comp = self.full ^ support
        cells = []
        sub = comp
        while True:
            if (comp ^ sub) not in self.faces:
                cells.append(sub)
            if sub == 0:
                break
            sub = (sub - 1) & comp
        return cells

    def basis(self, support: int) -> CycleBasis:
        hit = self._bases.get(support)
        if hit is None:
            if not self.in_delta(support):
                raise InvalidInput("the complement of the support is a face, so its summand is zero")
            hit = cycle_basis_of_cells(self.vertices, self.link_cells(support))
            self._bases[support] = hit
        return hit

    def unit(self) -> CohomologyClass:
        return CohomologyClass(self.full, 0, (1,), self.n)

    def top(self) -> CohomologyClass:
        k = self.n - self.d - 2
        gens = self.basis(0).generators(k)
        if len(gens) != 1 or gens[0][0] != 0:
            raise InvariantViolation("the complex Δ does not have the homology of a sphere")
        return CohomologyClass(0, self.dim_x, (1,), self.n)

    def generator_orders(self, support: int, degree: int) -> List[int]:
        if support == self.full:
            return [0] if degree == 0 else []
        k = 2 * _popcount(self.full ^ support) - degree - 2
        return [order for order, _ in self.basis(support).generators(k)]

    def generators(self, degree: Optional[int] = None) -> List[CohomologyClass]:
        """Basis classes by degree then support bitmask (the unit first)."""
        out = []
        degrees = range(self.dim_x + 1) if degree is None else [degree]
        for i in degrees:
            if i == 0:
                out.append(self.unit())
            for support in range(self.full):
                if not self.in_delta(support):
                    continue
                orders = self.generator_orders(support, i)
                for t in range(len(orders)):
                    coords = tuple(int(s == t) for s in range(len(orders)))
                    out.append(CohomologyClass(support, i, coords, self.n))
        return out

    def name(self, c: CohomologyClass) -> str:
        labels = ",".join(self.p.labels[v - 1] for v in c.support_labels())
        if c.support == self.full:
            return "1"
        nonzero = [t for t, x in enumerate(c.coordinates) if x]
        if len(nonzero) == 1 and c.coordinates[nonzero[0]] == 1:
            return f"psi({{{labels}}}, {nonzero[0]})"
        return f"psi({{{labels}}}, {list(c.coordinates)})"

    def chain(self, c: CohomologyClass) -> Dict[int, int]:
        gens = self.basis(c.support).generators(c.link_degree)
        if len(gens) != len(c.coordinates):
            raise InvalidInput("class coordinates do not match the summand's rank")
        out: Dict[int, int] = {}
        for x, (_, chain) in zip(c.coordinates, gens):
            if x:
                for cell, y in chain.items():
                    v = out.get(cell, 0) + x * y
                    if v:
                        out[cell] = v
                    else:
                        out.pop(cell, None)
        return out

    def make_class(self, support: int, degree: int, coordinates: Sequence[int]) -> CohomologyClass:
        orders = self.generator_orders(support, degree)
        if len(orders) != len(coordinates):
            raise InvalidInput(f"expected {len(orders)} coordinates for this summand")
        return CohomologyClass(support, degree, tuple(x % o if o else x for x, o in zip(coordinates, orders)), self.n)

    def product(self, a: CohomologyClass, b: CohomologyClass, apexes: Optional[Tuple[int, int]] = None) -> CohomologyClass:
        """a ⌣ b; ``apexes`` (labels in Ī and J̄) default to the smallest of each."""
        degree = a.degree + b.degree
        if degree > self.dim_x:
            raise InvariantViolation("product degree exceeds the dimension")
        if a.support == self.full:
            return self._scale(b, a.coordinates[0])
        if b.support == self.full:
            return self._scale(a, b.coordinates[0])
        ca, cb = a.complement, b.complement
        target = a.support & b.support
        if ca & cb:
            return self._zero(target, degree)
        if apexes is None:
            apex_a, apex_b = ca & -ca, cb & -cb
        else:
            apex_a, apex_b = 1 << (apexes[0] - 1), 1 << (apexes[1] - 1)
            if not apex_a & ca or not apex_b & cb:
                raise InvalidInput("apexes must lie in the complements of the two supports")
        k, k2 = a.link_degree, b.link_degree
        sign = _parity_sign(self.n + k * (k2 + 1) + 1)
        joined = _wedge(_wedge({apex_b: sign, apex_a: -sign}, self.chain(a)), self.chain(b))
        basis = self.basis(target)
        coords = basis.coordinates(k + k2 + 2, joined)
        return self.make_class(target, degree, coords)

    def _scale(self, c: CohomologyClass, factor: int) -> CohomologyClass:
        if c.support == self.full:
            return CohomologyClass(c.support, c.degree, (c.coordinates[0] * factor,), self.n)
        return self.make_class(c.support, c.degree, [x * factor for x in c.coordinates])

    def _zero(self, support: int, degree: int) -> CohomologyClass:
        if support == self.full:
            return CohomologyClass(support, degree, (0,), self.n)
        if not self.in_delta(support):
            return CohomologyClass(support, degree, (), self.n)
        return CohomologyClass(support, degree, tuple(0 for _ in self.generator_orders(support, degree)), self.n)

    def table(self, max_pairs: int = 10_000, include_zero: bool = False) -> List[dict]:
        """Products of basis classes a, b (a listed no later than b), unit excluded."""
        gens = [g for g in self.generators() if g.support != self.full]
        pairs = [(s, t) for s in range(len(gens)) for t in range(s, len(gens)) if gens[s].degree + gens[t].degree <= self.dim_x]
        if len(pairs) > max_pairs:
            raise RefusedComputation(f"the product table has {len(pairs)} pairs; cap is {max_pairs}")
        rows = []
        for s, t in pairs:
            a, b = gens[s], gens[t]
            c = self.product(a, b)
            if c.is_zero() and not include_zero:
                continue
            rows.append({"a": self.name(a), "b": self.name(b), "result": "0" if c.is_zero() else self.name(c), "degree": c.degree})
        return rows

    def structure_constants(self, degree_a: int, degree_b: int) -> Tuple[List[CohomologyClass], List[List[int]], int, int]:
        """Matrix of the free part of H^a ⊗ H^b → H^{a+b}: rows target generators, columns pairs."""
        src_a = [g for g in self.generators(degree_a) if self._is_free(g)]
        src_b = [g for g in self.generators(degree_b) if self._is_free(g)]
        targets = [g for g in self.generators(degree_a + degree_b) if self._is_free(g)]
        index = {}
        for r, g in enumerate(targets):
            t = next(x for x, v in enumerate(g.coordinates) if v)
            index[(g.support, t)] = r
        mat = [[0] * (len(src_a) * len(src_b)) for _ in targets]
        col = 0
        for a in src_a:
            for b in src_b:
                c = self.product(a, b)
                orders = self.generator_orders(c.support, c.degree)
                for t, x in enumerate(c.coordinates):
                    if x and orders[t] == 0:
                        mat[index[(c.support, t)]][col] += x
                col += 1
        return targets, mat, len(src_a), len(src_b)

    def _is_free(self, g: CohomologyClass) -> bool:
        if g.support == self.full:
            return True
        orders = self.generator_orders(g.support, g.degree)
        t = next(x for x, v in enumerate(g.coordinates) if v)
        return orders[t] == 0


def cup_product(a: CohomologyClass, b: CohomologyClass, p: CombPolytope, ring: Optional[CupRing] = None) -> CohomologyClass:
    """a ⌣ b for classes of ``p``; zero classes are returned with zero coordinates."""
    ring = ring or CupRing(p)
    return ring.product(a, b)


def sign_epsilon(complement_i: Iterable[int], complement_j: Iterable[int], k_prime: int, d: int, n: int) -> int:
    """ε_{ĪJ̄} · (-1)^{d+1+n+K'|Ī|} with K' = |J̄| - d + k' - 1; 1 if either set is empty.

    ε_{ĪJ̄} is the sign of the permutation sorting Ī followed by J̄.
    """
    ib, jb = set(complement_i), set(complement_j)
    if ib & jb:
        raise InvalidInput("the two complements must be disjoint")
    if not ib or not jb:
        return 1
    k_big = len(jb) - d + k_prime - 1
    perm = _wedge_sign(mask_of(ib), mask_of(jb))
    return perm * _parity_sign(d + 1 + n + k_big * len(ib))


def commutativity_sign_check(complement_i, complement_j, k: int, k_prime: int, d: int, n: int) -> bool:
    """ε(I,J)·ε(J,I)·(-1)^{(d-1-k)(d-1-k')} equals (-1)^{i i'}.

    Swapping the factors of an intersection product in the (d-1)-sphere
    costs (-1)^{(d-1-k)(d-1-k')}; graded commutativity of the cup product in
    degrees i = d + |Ī| - k - 1 and i' costs (-1)^{i i'}.
    """
    ib, jb = list(complement_i), list(complement_j)
    i = d + len(ib) - k - 1
    i2 = d + len(jb) - k_prime - 1
    lhs = sign_epsilon(ib, jb, k_prime, d, n) * sign_epsilon(jb, ib, k, d, n) * _parity_sign((d - 1 - k) * (d - 1 - k_prime))
    return lhs == _parity_sign(i * i2)


# ---------------------------------------------------------------- vertex cut


@dataclass(frozen=True)
class PredictedPiece:
    origin: str  # "phi1", "phi2", "S3", "S4", "unit" or "top"
    source: str  # the X-degree for phi1/phi2, the subset for S3/S4
    betti: int
    torsion: Tuple[int, ...]


class VertexCutPrediction:
    """Groups of X' after one vertex cut, assembled from those of X.

    H^i(X') = φ1 H^i(X) ⊕ φ2 H^{i-1}(X) ⊕ Z^{C(n-d, i-2d+1)} ⊕ Z^{C(n-d, i-2)}
    for 3 ≤ i ≤ n+d-2, Z in degrees 0 and n+d+1, zero elsewhere.
    """

    def __init__(self, n: int, d: int, pieces: Dict[int, List[PredictedPiece]]):
        self.n = n + 1
        self.d = d
        self.dim_x = n + d + 1
        self.pieces = pieces

    def betti(self, i: int) -> int:
        return sum(x.betti for x in self.pieces.get(i, []))

    def torsion(self, i: int) -> Tuple[int, ...]:
        return tuple(sorted(t for x in self.pieces.get(i, []) for t in x.torsion))

    def betti_vector(self) -> List[int]:
        return [self.betti(i) for i in range(self.dim_x + 1)]

    def groups(self) -> Dict[int, Group]:
        return {i: (self.betti(i), self.torsion(i)) for i in range(self.dim_x + 1)}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "dim_x": self.dim_x,
            "betti": self.betti_vector(),
            "degrees": [
                {
                    "degree": i,
                    "betti": self.betti(i),
                    "torsion": list(self.torsion(i)),
                    "pieces": [{"origin": x.origin, "source": x.source, "betti": x.betti, "torsion": list(x.torsion)} for x in self.pieces[i]],
                }
                for i in range(self.dim_x + 1)
            ],
        }


def _subset_names(size: int, universe: int) -> List[Tuple[int, ...]]:
    return list(combinations(range(1, universe + 1), size)) if 0 <= size <= universe else []


def vertex_cut_update(report: CohomologyReport) -> VertexCutPrediction:
    """Predict H^*(X') for the polytope with one vertex cut off."""
    n, d = report.n, report.d
    if d < 2:
        raise InvalidInput("the vertex-cut update needs d >= 2")
    top = n + d + 1
    pieces: Dict[int, List[PredictedPiece]] = {i: [] for i in range(top + 1)}
    pieces[0].append(PredictedPiece("unit", "0", 1, ()))
    pieces[top].append(PredictedPiece("top", str(n + d), 1, ()))
    for i in range(3, n + d - 1):
        b, t = report.betti(i), report.torsion(i)
        if b or t:
            pieces[i].append(PredictedPiece("phi1", str(i), b, t))
        b, t = report.betti(i - 1), report.torsion(i - 1)
        if b or t:
            pieces[i].append(PredictedPiece("phi2", str(i - 1), b, t))
        for subset in _subset_names(i - 2 * d + 1, n - d):
            pieces[i].append(PredictedPiece("S3", ",".join(map(str, subset)) or "∅", 1, ()))
        for subset in _subset_names(i - 2, n - d):
            pieces[i].append(PredictedPiece("S4", ",".join(map(str, subset)) or "∅", 1, ()))
    return VertexCutPrediction(n, d, pieces)


def _smith_invariants(mat: List[List[int]]) -> Tuple[int, ...]:
    if not mat or not mat[0]:
        return ()
    return tuple(x for x in smith_normal_form(mat).diagonal if x)


def _tensor_invariants(mat: List[List[int]], size_a: int, size_b: int) -> Tuple[Tuple[int, ...], ...]:
    """Smith invariants of the three flattenings of a product tensor.

    ``mat[t][ia * size_b + ib]`` is the coefficient of target t in a·b.  The
    flattenings view the product as H^a ⊗ H^b → H^{a+b}, as H^a → Hom(H^b,
    H^{a+b}) and as H^b → Hom(H^a, H^{a+b}); each Smith form is unchanged by
    a change of basis in any of the three groups.
    """
    size_t = len(mat)
    left = [[mat[t][ia * size_b + ib] for ia in range(size_a)] for t in range(size_t) for ib in range(size_b)]
    right = [[mat[t][ia * size_b + ib] for ib in range(size_b)] for t in range(size_t) for ia in range(size_a)]
    return (_smith_invariants(mat), _smith_invariants(left), _smith_invariants(right))


def multiplication_invariants(ring: CupRing, low: int, high: int) -> Dict[Tuple[int, int], Tuple[Tuple[int, ...], ...]]:
    """Smith invariants of the free multiplication maps H^a ⊗ H^b → H^{a+b}, low ≤ a ≤ b ≤ high."""
    out = {}
    for a in range(low, high + 1):
        for b in range(a, high + 1):
            if a + b > ring.dim_x:
                continue
            _, mat, size_a, size_b = ring.structure_constants(a, b)
            out[(a, b)] = _tensor_invariants(mat, size_a, size_b)
    return out


def predicted_multiplication_invariants(ring: CupRing, low: int, high: int) -> Dict[Tuple[int, int], Tuple[Tuple[int, ...], ...]]:
    """The same invariants for X' built from the ring of X by the cut rules.

    Basis of X': φ1(g) in the degree of g and φ2(g) one degree up for the
    free generators g of X in range, the unit φ1(1), the top class φ2(top),
    plus S3 classes (subsets T of [n-d], degree |T| + 2d - 1) and S4 classes
    (subsets U, degree |U| + 2).  Products: φ1a·φ1b = -φ1(ab) with φ1 of the
    top class zero, φ1a·φ2b = -φ2(ab), T·U = top exactly when U is the
    complement of T, everything else zero.
    """
    n, d = ring.n, ring.d
    top_new = n + d + 1
    free = {i: [g for g in ring.generators(i) if ring._is_free(g) and g.support != ring.full] for i in range(ring.dim_x + 1)}
    basis: Dict[int, List[Tuple]] = {i: [] for i in range(top_new + 1)}
    basis[0].append(("unit",))
    basis[top_new].append(("top",))
    for i in range(3, n + d - 1):
        basis[i] += [("phi1", g) for g in free.get(i, [])]
        basis[i] += [("phi2", g) for g in free.get(i - 1, [])]
        basis[i] += [("S3", frozenset(s)) for s in _subset_names(i - 2 * d + 1, n - d)]
        basis[i] += [("S4", frozenset(s)) for s in _subset_names(i - 2, n - d)]
    universe = frozenset(range(1, n - d + 1))

    def old_coords(c: CohomologyClass) -> Dict[Tuple[int, int], int]:
        orders = ring.generator_orders(c.support, c.degree) if c.support != ring.full else [0]
        return {(c.support, t): x for t, x in enumerate(c.coordinates) if x and orders[t] == 0}

    def key(g: CohomologyClass) -> Tuple[int, int]:
        return (g.support, next(t for t, v in enumerate(g.coordinates) if v))

    def product(x, y, degree_x) -> Dict[Tuple, int]:
        kx, ky = x[0], y[0]
        if kx == "unit":
            return {y: 1}
        if ky == "unit":
            return {x: 1}
        if kx == "phi1" and ky == "phi1":
            c = ring.product(x[1], y[1])
            if c.degree >= n + d - 1:
                return {}
            return {("phi1", k): -v for k, v in old_coords(c).items()}
        if {kx, ky} == {"phi1", "phi2"}:
            a, b = (x, y) if kx == "phi1" else (y, x)
            c = ring.product(a[1], b[1])
            sign = -1
            if kx == "phi2":
                # y·x = (-1)^{deg x deg y} x·y
                sign *= _parity_sign(degree_x * (a[1].degree))
            if c.degree == n + d:
                return {("top",): sign * v for v in old_coords(c).values()}
            return {("phi2", k): sign * v for k, v in old_coords(c).items()}
        if {kx, ky} == {"S3", "S4"}:
            t, u = (x[1], y[1]) if kx == "S3" else (y[1], x[1])
            if t | u == universe and not t & u:
                sign = 1 if kx == "S3" else _parity_sign(degree_x * (top_new - degree_x))
                return {("top",): sign}
            return {}
        return {}

    def index_of(entry):
        if entry[0] in ("phi1", "phi2"):
            return (entry[0], key(entry[1]))
        return entry

    out = {}
    for a in range(low, high + 1):
        for b in range(a, high + 1):
            if a + b > top_new:
                continue
            targets = {index_of(e): r for r, e in enumerate(basis[a + b])}
            mat = [[0] * (len(basis[a]) * len(basis[b])) for _ in basis[a + b]]
            col = 0
            for x in basis[a]:
                for y in basis[b]:
                    for k, v in product(x, y, a).items():
                        mat[targets[k]][col] += v
                    col += 1
            out[(a, b)] = _tensor_invariants(mat, len(basis[a]), len(basis[b]))
    return out


# ---------------------------------------------------------------- classification


def connected_sum_from_betti(betti: Sequence[int]) -> List[Tuple[int, int, int]]:
    """(count, a, b) with a ≤ b and a + b = dim, read off a Poincaré-symmetric Betti vector."""
    top = len(betti) - 1
    terms = []
    for a in range(1, top // 2 + 1):
        b = top - a
        count = betti[a] // 2 if a == b else betti[a]
        if a == b and betti[a] % 2:
            raise InvariantViolation("odd middle Betti number cannot come from S^a × S^a summands")
        if count:
            terms.append((count, a, b))
    return terms


def _format_connected_sum(terms: Sequence[Tuple[int, int, int]]) -> str:
    return " # ".join(f"#({c}) S^{a}×S^{b}" if c > 1 else f"S^{a}×S^{b}" for c, a, b in terms) or "sphere"


def _nontrivial_products(ring: CupRing) -> Optional[Tuple[CohomologyClass, CohomologyClass, CohomologyClass]]:
    gens = [g for g in ring.generators() if g.support != ring.full and 0 < g.degree < ring.dim_x]
    for s, a in enumerate(gens):
        for b in gens[s:]:
            if a.degree + b.degree >= ring.dim_x:
                continue
            c = ring.product(a, b)
            if not c.is_zero():
                return a, b, c
    return None


def classify_ring(p: CombPolytope, report: Optional[CohomologyReport] = None, product_max_n: int = DEFAULT_PRODUCT_MAX_N) -> dict:
    """Whether H^*(X) is the ring of a connected sum of sphere products, with evidence."""
    report = report or cohomology_of(p)
    betti = report.betti_vector()
    out = {"n": p.n, "d": p.d, "dim_x": report.dim_x, "betti": betti}
    if p.d == 3:
        cycles = one_cycles_of_facets(p)
        trunc = is_truncated_simplex(p)
        connected = cycles["all_length_three"]
        out["one_cycles"] = cycles["names"]
        out["truncated_simplex"] = None if trunc is None else trunc[0]
        out["criteria_agree"] = connected == (trunc is not None)
        out["connected_sum_type"] = connected
        if connected:
            out["shape"] = _format_connected_sum(connected_sum_from_betti(betti))
            out["reason"] = "every 1-cycle of facets has length 3"
        else:
            out["reason"] = "a 1-cycle of facets of length at least 4 exists"
            out["witness"] = _cycle_witness(p, cycles["cycles"], product_max_n)
        return out
    if p.d % 2 == 0 and neighbourliness(p) >= p.d // 2 - 1:
        out["connected_sum_type"] = True
        out["reason"] = "dual neighbourly of even dimension"
        out["shape"] = _format_connected_sum(connected_sum_from_betti(betti))
        out["ring_only"] = True
        return out
    if p.n <= product_max_n:
        hit = _nontrivial_products(CupRing(p, product_max_n))
        out["connected_sum_type"] = hit is None
        if hit is None:
            out["reason"] = "all products of positive-degree non-top classes vanish"
            out["shape"] = _format_connected_sum(connected_sum_from_betti(betti))
        else:
            ring = CupRing(p, product_max_n)
            a, b, c = hit
            out["reason"] = "a non-top product is nonzero"
            out["witness"] = {"a": ring.name(a), "b": ring.name(b), "product": ring.name(c), "degree": c.degree}
        return out
    out["connected_sum_type"] = None
    out["reason"] = "undecided: not d = 3, not dual neighbourly, and too many facets for explicit products"
    return out


def _cycle_witness(p: CombPolytope, cycles: List[Tuple[int, ...]], product_max_n: int) -> dict:
    """Two 1-cycle classes of length ≥ 4 whose product is nonzero and not top."""
    long_cycles = [c for c in cycles if len(c) >= 4]
    witness = {"cycle": [p.name_of(v) for v in long_cycles[0]]} if long_cycles else {}
    if p.n > product_max_n:
        return witness
    ring = CupRing(p, product_max_n)
    for s, t in combinations(range(len(long_cycles)), 2):
        ia, ib = mask_of(long_cycles[s]), mask_of(long_cycles[t])
        if ia | ib != ring.full:
            continue
        for a in _cycle_classes(ring, ia):
            for b in _cycle_classes(ring, ib):
                if a.degree + b.degree >= ring.dim_x:
                    continue
                c = ring.product(a, b)
                if not c.is_zero():
                    witness.update(
                        {
                            "cycles": [[p.name_of(v) for v in long_cycles[s]], [p.name_of(v) for v in long_cycles[t]]],
                            "a": ring.name(a),
                            "b": ring.name(b),
                            "product": ring.name(c),
                            "product_support": [p.name_of(v) for v in members_of(c.support)],
                        }
                    )
                    return witness
    return witness


def _cycle_classes(ring: CupRing, support: int) -> List[CohomologyClass]:
    """Classes of H̃_1(K_I) for a 1-cycle I, in cohomological degree n + 1 - |I| (d = 3)."""
    degree = ring.d + (ring.n - _popcount(support)) - 2
    orders = ring.generator_orders(support, degree)
    return [CohomologyClass(support, degree, tuple(int(s == t) for s in range(len(orders))), ring.n) for t in range(len(orders))]


def kunneth_with_torus(groups: Dict[int, Group], circles: int) -> Dict[int, Group]:
    """H^i(X × T^k) = ⊕_j H^j(X)^{C(k, i-j)}."""
    if circles < 0:
        raise InvalidInput("circle count must be nonnegative")
    top = max(groups) + circles
    out = {}
    for i in range(top + 1):
        betti = 0
        torsion: List[int] = []
        for j, (b, t) in groups.items():
            mult = comb(circles, i - j) if 0 <= i - j <= circles else 0
            betti += mult * b
            torsion += list(t) * mult
        out[i] = (betti, tuple(sorted(torsion)))
    return out


def primary_torsion(torsion: Iterable[int]) -> Tuple[int, ...]:
    """Split cyclic orders into prime powers, so Z/6 and Z/2 + Z/3 compare equal."""
    out = []
    for t in torsion:
        t = int(t)
        q = 2
        while q * q <= t:
            if t % q == 0:
                power = 1
                while t % q == 0:
                    t //= q
                    power *= q
                out.append(power)
            q += 1
        if t > 1:
            out.append(t)
    return tuple(sorted(out))


def kunneth_product(first: Dict[int, Group], second: Dict[int, Group]) -> Dict[int, Group]:
    """Integral cohomology of X × Y: tensor terms in degree i + j, Tor terms in i + j - 1."""
    top = max(first) + max(second)
    out = {}
    for n in range(top + 1):
        betti = 0
        torsion: List[int] = []
        for i, (b1, t1) in first.items():
            for j, (b2, t2) in second.items():
                if i + j == n:
                    betti += b1 * b2
                    torsion += list(t1) * b2 + list(t2) * b1
                    torsion += [gcd(x, y) for x in t1 for y in t2]
                if i + j == n + 1:
                    torsion += [gcd(x, y) for x in t1 for y in t2]
        out[n] = (betti, primary_torsion(x for x in torsion if x > 1))
    return out

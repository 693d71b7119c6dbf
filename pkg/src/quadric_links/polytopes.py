"""Simple polytopes stored as their dual simplicial spheres.

A ``CombPolytope`` with n facets and dimension d keeps the vertices of the
polytope as d-subsets of facet labels 1..n (the facets of the dual sphere).
Facets also carry display names ("1'", "h", ...); flips and comparisons
across polytopes with different label ranges match facets by name.

Vertex truncation is stellar subdivision of a dual facet, flips are
bistellar moves, products are joins.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .configurations import Configuration, FaceOracle, _integer_columns, gale_transform, require_admissible
from .errors import InvalidFlip, InvalidInput, InvariantViolation
from .homology import HomologySummary, SimplicialComplex, find_isomorphism, mask_of, members_of
from .kernel import FaceTable, as_rational, format_rational, solve_unique, zero_in_convex_hull

__all__ = [
    "Realization",
    "CombPolytope",
    "FlipSpec",
    "polytope_of",
    "truncate_face",
    "apply_flip",
    "flip_spec_at",
    "diff_as_flip",
    "product",
    "combinatorially_equal",
    "neighbourliness",
    "one_cycles_of_facets",
    "is_truncated_simplex",
    "f_vector",
    "relabel",
    "realize",
    "builtin",
    "BUILTIN_NAMES",
]

Facet = FrozenSet[int]


@dataclass(frozen=True)
class Realization:
    """Dual vertex coordinates: the polytope is {x : ⟨u_i, x⟩ ≤ 1 for all i}.

    ``points[i]`` is u for facet label i+1.  The origin is interior to both
    the polytope and its dual.
    """

    points: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        pts = tuple(tuple(as_rational(x) for x in p) for p in self.points)
        if pts and len({len(p) for p in pts}) != 1:
            raise InvalidInput("realization points of unequal dimension")
        object.__setattr__(self, "points", pts)

    @property
    def dimension(self) -> int:
        return len(self.points[0]) if self.points else 0

    def vertex(self, facet: Iterable[int]) -> Optional[Tuple[Fraction, ...]]:
        """The point where the facets in ``facet`` (d labels) meet, if unique."""
        rows = [self.points[i - 1] for i in facet]
        x = solve_unique(rows, [Fraction(1)] * len(rows))
        return tuple(x) if x is not None else None

    def verify(self, dual_facets: Iterable[Facet]) -> bool:
        """Each dual facet is a simple vertex of the polytope.

        Every listed vertex sits strictly inside all other half-spaces, so the
        listed sphere is contained in the true vertex-facet sphere; both are
        strongly connected pseudomanifolds of the same dimension, hence equal.
        """
        for f in dual_facets:
            x = self.vertex(sorted(f))
            if x is None:
                return False
            for j, u in enumerate(self.points, start=1):
                if j not in f and sum(a * b for a, b in zip(u, x)) >= 1:
                    return False
        return True

    def permuted(self, order: Sequence[int]) -> "Realization":
        """Points reordered so new label t+1 takes old label order[t]."""
        return Realization(tuple(self.points[i - 1] for i in order))

    def to_json(self) -> dict:
        return {"vertices": [[format_rational(x) for x in p] for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "Realization":
        return cls(tuple(tuple(p) for p in data["vertices"]))


def _sphere_faces(facets: Iterable[Facet]) -> FrozenSet[int]:
    faces = {0}
    for f in facets:
        bits = [1 << (v - 1) for v in f]
        for r in range(1, len(bits) + 1):
            for sub in combinations(bits, r):
                faces.add(sum(sub))
    return frozenset(faces)


@dataclass(frozen=True, eq=False)
class CombPolytope:
    """Simple polytope as its dual sphere; validated on construction."""

    n: int
    d: int
    dual_facets: FrozenSet[Facet]
    labels: Tuple[str, ...] = ()
    realization: Optional[Realization] = None
    _faces: FrozenSet[int] = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self):
        facets = frozenset(frozenset(int(v) for v in f) for f in self.dual_facets)
        object.__setattr__(self, "dual_facets", facets)
        labels = tuple(str(x) for x in self.labels) if self.labels else tuple(str(i) for i in range(1, self.n + 1))
        if len(labels) != self.n or len(set(labels)) != self.n:
            raise InvalidInput("labels must be distinct, one per facet")
        object.__setattr__(self, "labels", labels)
        _validate_sphere(self.n, self.d, facets)
        object.__setattr__(self, "_faces", _sphere_faces(facets))
        if self.realization is not None:
            if len(self.realization.points) != self.n or self.realization.dimension != self.d:
                raise InvalidInput("realization needs one point in dimension d per facet")
            if not self.realization.verify(facets):
                raise InvalidInput("realization does not have the combinatorics of the dual facets")

    def __eq__(self, other):
        return isinstance(other, CombPolytope) and (self.n, self.d, self.dual_facets, self.labels) == (
            other.n,
            other.d,
            other.dual_facets,
            other.labels,
        )

    def __hash__(self):
        return hash((self.n, self.d, self.dual_facets, self.labels))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def face_masks(self) -> FrozenSet[int]:
        """Every simplex of the dual sphere as a bitmask, the empty one included."""
        return self._faces

    def is_face(self, labels: Iterable[int]) -> bool:
        return mask_of(labels) in self._faces

    def sorted_facets(self) -> List[Tuple[int, ...]]:
        return sorted(tuple(sorted(f)) for f in self.dual_facets)

    def name_of(self, label: int) -> str:
        return self.labels[label - 1]

    def label_of(self, name) -> int:
        try:
            return self.labels.index(str(name)) + 1
        except ValueError:
            raise InvalidInput(f"no facet named {name!r}") from None

    def named_facets(self) -> FrozenSet[FrozenSet[str]]:
        return frozenset(frozenset(self.labels[v - 1] for v in f) for f in self.dual_facets)

    def to_json(self) -> dict:
        out = {"n": self.n, "d": self.d, "dual_facets": [list(f) for f in self.sorted_facets()]}
        if self.labels != tuple(str(i) for i in range(1, self.n + 1)):
            out["labels"] = list(self.labels)
        if self.realization is not None:
            out["realization"] = self.realization.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CombPolytope":
        try:
            n, d = int(data["n"]), int(data["d"])
            facets = [frozenset(int(v) for v in f) for f in data["dual_facets"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"polytope JSON needs 'n', 'd' and 'dual_facets': {exc}") from exc
        real = Realization.from_json(data["realization"]) if data.get("realization") else None
        return cls(n, d, frozenset(facets), tuple(data.get("labels", ())), real)

    def without_realization(self) -> "CombPolytope":
        return CombPolytope(self.n, self.d, self.dual_facets, self.labels)


def _validate_sphere(n: int, d: int, facets: FrozenSet[Facet]) -> None:
    if d < 1:
        raise InvalidInput("polytope dimension must be at least 1")
    if not facets:
        raise InvalidInput("no dual facets")
    for f in facets:
        if len(f) != d:
            raise InvalidInput(f"dual facet {sorted(f)} does not have d={d} labels")
        if any(not 1 <= v <= n for v in f):
            raise InvalidInput(f"dual facet {sorted(f)} uses labels outside 1..{n}")
    used = set().union(*facets)
    if len(used) != n:
        missing = sorted(set(range(1, n + 1)) - used)
        raise InvalidInput(f"facet labels {missing} occur in no vertex")
    ridges: Dict[Facet, List[Facet]] = {}
    for f in facets:
        for v in f:
            ridges.setdefault(f - {v}, []).append(f)
    bad = [sorted(r) for r, fs in ridges.items() if len(fs) != 2]
    if bad:
        raise InvalidInput(f"not a pseudomanifold: ridge {bad[0]} lies in {len(ridges[frozenset(bad[0])])} facets")
    start = next(iter(facets))
    seen = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        for v in f:
            for g in ridges[f - {v}]:
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
    if len(seen) != len(facets):
        raise InvalidInput("dual sphere is not strongly connected")
    faces = _sphere_faces(facets)
    full = (1 << n) - 1
    table = FaceTable(faces)
    summary = HomologySummary.from_kernel(table.induced(full, 1))
    if summary != HomologySummary({d - 1: (1, ())}):
        raise InvalidInput(f"dual complex does not have the homology of S^{d - 1}: {summary.describe()}")


def relabel(p: CombPolytope, order: Sequence[int]) -> CombPolytope:
    """New label t+1 is old label order[t]; names and realization follow."""
    if sorted(order) != list(range(1, p.n + 1)):
        raise InvalidInput("relabeling must be a permutation of the labels")
    new_of = {old: t + 1 for t, old in enumerate(order)}
    facets = frozenset(frozenset(new_of[v] for v in f) for f in p.dual_facets)
    names = tuple(p.labels[old - 1] for old in order)
    real = p.realization.permuted(order) if p.realization else None
    return CombPolytope(p.n, p.d, facets, names, real)


def rename(p: CombPolytope, names: Sequence[str]) -> CombPolytope:
    return CombPolytope(p.n, p.d, p.dual_facets, tuple(names), p.realization)


# ---------------------------------------------------------------- configurations


def _barycentric_member(cols: Sequence[Sequence[int]], p: int) -> Optional[bool]:
    """0 ∈ conv of p+1 points in Q^p via barycentric coordinates; None if singular."""
    rows = [[c[r] for c in cols] for r in range(p)] + [[1] * len(cols)]
    rhs = [0] * p + [1]
    lam = solve_unique(rows, rhs)
    if lam is None:
        return None
    return all(x >= 0 for x in lam)


def polytope_of(c: Configuration) -> CombPolytope:
    """The associate polytope: vertices are the d-sets I with 0 in the hull of the rest.

    Indispensable columns are never in a face; the other columns become the
    facets, renumbered 1..n-k in order and keeping their configuration labels.
    """
    rep = require_admissible(c)
    keep = [i for i in range(1, c.n + 1) if i not in rep.indispensable]
    d = c.n - c.p - 1
    if d < 1:
        raise InvalidInput("a configuration with n - p - 1 < 1 has no polytope of positive dimension")
    icols = _integer_columns(c)
    oracle = FaceOracle(c)
    new_of = {old: t + 1 for t, old in enumerate(keep)}
    facets = []
    for subset in combinations(keep, d):
        comp = [icols[j - 1] for j in range(1, c.n + 1) if j not in subset]
        if c.p == 0:
            member = True
        else:
            member = _barycentric_member(comp, c.p) if len(comp) == c.p + 1 else None
            if member is None:
                member = oracle.is_face(subset)
        if member:
            facets.append(frozenset(new_of[v] for v in subset))
    names = tuple(c.labels[i - 1] for i in keep)
    return CombPolytope(len(keep), d, frozenset(facets), names)


# ---------------------------------------------------------------- operations


def truncate_face(p: CombPolytope, face: Iterable, name: Optional[str] = None) -> CombPolytope:
    """Cut off the face numbered by ``face`` (facet labels or names).

    Dually: stellar subdivision of the simplex ``face`` with a new vertex
    n+1.  A supplied realization is cut by the hyperplane
    Σ_{i∈face}(1 - ⟨u_i, x⟩) = δ with δ half the smallest value over the
    vertices not on the face.
    """
    sigma = _resolve(p, face)
    if not sigma:
        raise InvalidInput("cannot truncate the empty face")
    if len(sigma) == 1:
        raise InvalidInput("cutting off a whole facet leaves the combinatorics unchanged; give a face of codimension >= 2")
    if mask_of(sigma) not in p.face_masks():
        raise InvalidInput(f"{sorted(p.name_of(v) for v in sigma)} is not a face of the polytope")
    new = p.n + 1
    facets = set()
    for g in p.dual_facets:
        if sigma <= g:
            for v in sigma:
                facets.add((g - {v}) | {new})
        else:
            facets.add(g)
    label = name if name is not None else _fresh_name(p.labels, str(new))
    real = None
    if p.realization is not None:
        real = _cut_realization(p, sigma)
    return CombPolytope(new, p.d, frozenset(facets), p.labels + (label,), real)


def _cut_realization(p: CombPolytope, sigma: Facet) -> Realization:
    pts = p.realization.points
    values = []
    for g in p.dual_facets:
        if sigma <= g:
            continue
        x = p.realization.vertex(sorted(g))
        values.append(sum(1 - sum(a * b for a, b in zip(pts[i - 1], x)) for i in sigma))
    delta = min(min(values) / 2, Fraction(len(sigma), 2))
    normal = [sum(pts[i - 1][r] for i in sigma) for r in range(p.d)]
    scale = len(sigma) - delta
    return Realization(pts + (tuple(x / scale for x in normal),))


def _fresh_name(existing: Sequence[str], want: str) -> str:
    if want not in existing:
        return want
    t = 1
    while f"{want}_{t}" in existing:
        t += 1
    return f"{want}_{t}"


def _resolve(p: CombPolytope, items: Iterable) -> Facet:
    out = set()
    for x in items:
        if isinstance(x, int) and not isinstance(x, bool):
            if not 1 <= x <= p.n:
                raise InvalidInput(f"label {x} outside 1..{p.n}")
            out.add(x)
        else:
            out.add(p.label_of(x))
    return frozenset(out)


@dataclass(frozen=True)
class FlipSpec:
    """A bistellar move on the dual sphere, by facet names.

    ``face_out`` (σ) loses its star σ ∗ ∂τ, replaced by ∂σ ∗ τ where τ is
    ``face_in``.  The type is (a, b) = (|τ|, |σ|), with a + b = d + 1: a
    vertex cut is (1, d), removing a triangular facet is (d, 1).
    """

    face_out: Tuple[str, ...]
    face_in: Tuple[str, ...]

    @property
    def type(self) -> Tuple[int, int]:
        return (len(self.face_in), len(self.face_out))

    def reversed(self) -> "FlipSpec":
        return FlipSpec(self.face_in, self.face_out)

    def to_json(self) -> dict:
        return {"type": list(self.type), "face_out": list(self.face_out), "face_in": list(self.face_in)}


def flip_spec_at(p: CombPolytope, face_out: Iterable, new_name: Optional[str] = None) -> FlipSpec:
    """The flip removing the star of ``face_out``, with τ read off its link.

    For a dual facet the incoming simplex is a new vertex.  Otherwise τ is
    the union of the link; ``apply_flip`` then checks the link really is ∂τ.
    """
    sigma = _resolve(p, face_out)
    if mask_of(sigma) not in p.face_masks() or not sigma:
        raise InvalidFlip("missing_face", f"{sorted(p.name_of(v) for v in sigma)} is not a face of the dual sphere")
    names_out = tuple(p.name_of(v) for v in sorted(sigma))
    if len(sigma) == p.d:
        return FlipSpec(names_out, (new_name or _fresh_name(p.labels, str(p.n + 1)),))
    link_vertices = set()
    for g in p.dual_facets:
        if sigma <= g:
            link_vertices |= g - sigma
    return FlipSpec(names_out, tuple(p.name_of(v) for v in sorted(link_vertices)))


def apply_flip(p: CombPolytope, f: FlipSpec) -> CombPolytope:
    """Perform the bistellar move, or raise ``InvalidFlip`` naming the failed condition.

    Conditions: ``type`` (|σ| + |τ| = d + 1, disjoint), ``missing_face`` (σ is
    a simplex), ``link_mismatch`` (the link of σ is exactly ∂τ) and
    ``incoming_face_exists`` (τ is not already a simplex).
    """
    d = p.d
    if len(f.face_out) + len(f.face_in) != d + 1 or set(f.face_out) & set(f.face_in):
        raise InvalidFlip("type", f"a flip needs disjoint σ, τ with |σ| + |τ| = d + 1 = {d + 1}")
    if not f.face_out:
        raise InvalidFlip("type", "σ must be nonempty")
    sigma = _resolve(p, f.face_out)
    new_names = [x for x in f.face_in if x not in p.labels]
    if new_names and (len(f.face_in) != 1):
        raise InvalidFlip("missing_face", f"unknown facet names {new_names} in τ")
    labels = list(p.labels)
    n = p.n
    if new_names:
        n += 1
        labels.append(new_names[0])
        tau = frozenset([n])
    else:
        tau = _resolve(p, f.face_in)
    if mask_of(sigma) not in p.face_masks():
        raise InvalidFlip("missing_face", f"σ = {list(f.face_out)} is not a simplex of the dual sphere")
    star = {g for g in p.dual_facets if sigma <= g}
    link = {g - sigma for g in star}
    expected = {tau - {t} for t in tau}
    if link != expected:
        raise InvalidFlip("link_mismatch", f"the link of σ = {list(f.face_out)} is not the boundary of τ = {list(f.face_in)}")
    if tau and max(tau) <= p.n and mask_of(tau) in p.face_masks():
        raise InvalidFlip("incoming_face_exists", f"τ = {list(f.face_in)} is already a simplex, so the move is not bistellar")
    facets = (set(p.dual_facets) - star) | {(sigma - {s}) | tau for s in sigma}
    if len(sigma) == 1:
        # the vertex σ disappears; close the gap in the numbering
        (gone,) = sigma
        shift = {v: v - (v > gone) for v in range(1, n + 1) if v != gone}
        facets = {frozenset(shift[v] for v in g) for g in facets}
        del labels[gone - 1]
        n -= 1
    return CombPolytope(n, d, frozenset(facets), tuple(labels))


def diff_as_flip(p: CombPolytope, q: CombPolytope) -> Optional[FlipSpec]:
    """The single bistellar move taking ``p`` to ``q`` (facets matched by name), if any."""
    if p.d != q.d:
        return None
    a, b = p.named_facets(), q.named_facets()
    removed, added = a - b, b - a
    if not removed or not added:
        return None
    sigma = frozenset.intersection(*removed)
    tau = frozenset.intersection(*added)
    if sigma & tau or len(sigma) + len(tau) != p.d + 1 or not sigma or not tau:
        return None
    if removed != {sigma | (tau - {t}) for t in tau}:
        return None
    if added != {(sigma - {s}) | tau for s in sigma}:
        return None
    move = FlipSpec(tuple(sorted(sigma, key=p.labels.index)), tuple(sorted(tau, key=lambda x: (x not in p.labels, p.labels.index(x) if x in p.labels else 0, x))))
    try:
        out = apply_flip(p, move)
    except InvalidFlip:
        return None
    if out.named_facets() != b:
        return None
    return move


def product(p1: CombPolytope, p2: CombPolytope) -> CombPolytope:
    """P1 × P2: the join of the dual spheres, second factor's labels shifted by n1."""
    n1 = p1.n
    facets = frozenset(f | frozenset(v + n1 for v in g) for f in p1.dual_facets for g in p2.dual_facets)
    default1 = p1.labels == tuple(str(i) for i in range(1, p1.n + 1))
    default2 = p2.labels == tuple(str(i) for i in range(1, p2.n + 1))
    if default1 and default2:
        names = ()
    else:
        names = list(p1.labels)
        for x in p2.labels:
            names.append(_fresh_name(names, x))
        names = tuple(names)
    real = None
    if p1.realization is not None and p2.realization is not None:
        z1 = (Fraction(0),) * p1.d
        z2 = (Fraction(0),) * p2.d
        real = Realization(tuple(u + z2 for u in p1.realization.points) + tuple(z1 + u for u in p2.realization.points))
    return CombPolytope(n1 + p2.n, p1.d + p2.d, facets, names, real)


def combinatorially_equal(p1: CombPolytope, p2: CombPolytope, up_to_relabeling: bool = False) -> Optional[Dict[int, int]]:
    """Exact equality (identity map) or, with the flag, a label bijection p1 → p2."""
    if p1.n != p2.n or p1.d != p2.d or len(p1.dual_facets) != len(p2.dual_facets):
        return None
    if not up_to_relabeling:
        return {v: v for v in range(1, p1.n + 1)} if p1.dual_facets == p2.dual_facets else None
    k1 = SimplicialComplex(tuple(range(1, p1.n + 1)), tuple(p1.dual_facets))
    k2 = SimplicialComplex(tuple(range(1, p2.n + 1)), tuple(p2.dual_facets))
    return find_isomorphism(k1, k2)


def f_vector(p: CombPolytope) -> List[int]:
    """Simplices of the dual sphere per dimension 0..d-1 (faces of P per codimension)."""
    counts = [0] * p.d
    for m in p.face_masks():
        if m:
            counts[bin(m).count("1") - 1] += 1
    return counts


def neighbourliness(p: CombPolytope) -> int:
    """Largest k with every (k+1)-set of labels a simplex of the dual sphere."""
    faces = p.face_masks()
    k = 0
    while k + 2 <= p.n:
        size = k + 2
        if all(mask_of(s) in faces for s in combinations(range(1, p.n + 1), size)):
            k += 1
        else:
            break
    return k


def _induced_graph(p: CombPolytope, mask: int):
    faces = p.face_masks()
    verts = members_of(mask)
    edges = [(a, b) for a, b in combinations(verts, 2) if (1 << (a - 1) | 1 << (b - 1)) in faces]
    return verts, edges


def one_cycles_of_facets(p: CombPolytope) -> dict:
    """Facet sets whose induced dual complex is a cycle graph (d = 3 only).

    A cycle graph spans no triangle, so its facets have no common vertex.
    """
    if p.d != 3:
        raise InvalidInput("1-cycles of facets are defined for 3-polytopes")
    faces = p.face_masks()
    cycles = []
    for mask in range(1, 1 << p.n):
        size = bin(mask).count("1")
        if size < 3:
            continue
        verts, edges = _induced_graph(p, mask)
        if len(edges) != size:
            continue
        degree = {v: 0 for v in verts}
        for a, b in edges:
            degree[a] += 1
            degree[b] += 1
        if any(x != 2 for x in degree.values()):
            continue
        if any(mask_of(t) in faces for t in combinations(verts, 3)):
            continue
        # connected
        adj = {v: [] for v in verts}
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == size:
            cycles.append(verts)
    lengths = sorted({len(c) for c in cycles})
    return {
        "cycles": cycles,
        "names": [[p.name_of(v) for v in c] for c in cycles],
        "lengths": lengths,
        "all_length_three": all(len(c) == 3 for c in cycles),
    }


def is_truncated_simplex(p: CombPolytope) -> Optional[Tuple[int, List[str]]]:
    """Undo vertex cuts greedily; return (number of cuts, removed facet names) or None.

    A facet can be un-cut when its dual vertex has exactly d neighbours and
    the reverse (d, 1) flip is valid.
    """
    cur = p
    removed: List[str] = []
    while cur.n > cur.d + 1:
        for v in range(1, cur.n + 1):
            star = [g for g in cur.dual_facets if v in g]
            nbrs = set().union(*star) - {v}
            if len(nbrs) != cur.d:
                continue
            move = FlipSpec((cur.name_of(v),), tuple(cur.name_of(w) for w in sorted(nbrs)))
            try:
                nxt = apply_flip(cur, move)
            except (InvalidFlip, InvalidInput):
                continue
            removed.append(cur.name_of(v))
            cur = nxt
            break
        else:
            return None
    if cur.n == cur.d + 1:
        return len(removed), removed
    return None


# ---------------------------------------------------------------- realization


def realize(p: CombPolytope, circles: int = 0) -> Configuration:
    """A configuration whose associate polytope is ``p`` with facet i = column i.

    Needs ``p.realization``.  The dual vertices are moved to their barycenter
    (the Gale transform does not see translations), checked to span the full
    dimension, transformed, and the result is verified against ``p``.
    """
    if p.realization is None:
        raise InvalidInput("realize needs coordinates for the dual vertices")
    if circles < 0:
        raise InvalidInput("circle count must be nonnegative")
    pts = p.realization.points
    n = len(pts)
    center = tuple(sum(pt[r] for pt in pts) / n for r in range(p.d))
    moved = [tuple(x - c for x, c in zip(pt, center)) for pt in pts]
    if not zero_in_convex_hull(moved).member:
        raise InvariantViolation("barycenter outside the hull of the dual vertices")
    c = gale_transform(moved)
    if c.p != n - p.d - 1:
        raise InvalidInput("the dual vertices do not span the full dimension")
    c = Configuration(c.p, c.columns, p.labels)
    q = polytope_of(c)
    if q.n != p.n or q.dual_facets != p.dual_facets:
        raise InvalidInput("the realization's combinatorics disagree with the polytope")
    from .configurations import add_circles

    return add_circles(c, circles)


# ---------------------------------------------------------------- built-in family


def simplex(d: int) -> CombPolytope:
    """Δ^d, dual vertices e_1..e_d and -(1,…,1)."""
    if d < 1:
        raise InvalidInput("simplex dimension must be at least 1")
    n = d + 1
    facets = frozenset(frozenset(s) for s in combinations(range(1, n + 1), d))
    pts = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    pts.append(tuple(Fraction(-1) for _ in range(d)))
    return CombPolytope(n, d, facets, (), Realization(tuple(pts)))


def cube(d: int = 3) -> CombPolytope:
    """[-1,1]^d with facets 1..d (x_i = 1) then 1'..d' (x_i = -1)."""
    if d < 1:
        raise InvalidInput("cube dimension must be at least 1")
    facets = frozenset(
        frozenset((i + 1) if not (choice >> i) & 1 else (i + 1 + d) for i in range(d)) for choice in range(1 << d)
    )
    names = tuple(str(i) for i in range(1, d + 1)) + tuple(f"{i}'" for i in range(1, d + 1))
    pts = []
    for sign in (1, -1):
        for i in range(d):
            pts.append(tuple(Fraction(sign if j == i else 0) for j in range(d)))
    return CombPolytope(2 * d, d, facets, names, Realization(tuple(pts)))


def _circle_point(s: Fraction) -> Tuple[Fraction, Fraction]:
    return ((1 - s * s) / (1 + s * s), 2 * s / (1 + s * s))


def polygon(m: int) -> CombPolytope:
    """m-gon with dual vertices on the unit circle at rational points.

    The points use the parametrisation s ↦ ((1-s²)/(1+s²), 2s/(1+s²)) at
    s = tan(θ/2) for θ = 2πj/m rounded to a fixed rational grid; any distinct
    circle points are in convex position.
    """
    if m < 3:
        raise InvalidInput("a polygon needs at least 3 sides")
    import math

    pts = []
    for j in range(m):
        theta = 2 * math.pi * j / m
        if abs(theta - math.pi) < 1e-12:
            pts.append((Fraction(-1), Fraction(0)))
            continue
        s = Fraction(round(math.tan(theta / 2) * 1000), 1000)
        pts.append(_circle_point(s))
    if len(set(pts)) != m:
        raise InvariantViolation("rational circle points collided")
    facets = frozenset(frozenset((j + 1, (j + 1) % m + 1)) for j in range(m))
    return CombPolytope(m, 2, facets, (), Realization(tuple(pts)))


def cyclic_dual(d: int, v: int) -> CombPolytope:
    """Dual of the cyclic polytope C(d, v), points on the moment curve at t = 1..v.

    Facets of C(d, v) come from Gale's evenness condition; coordinates are
    centred at their barycenter.
    """
    if d < 2 or v < d + 1:
        raise InvalidInput("cyclic polytope needs d >= 2 and v >= d + 1")
    facets = []
    for s in combinations(range(1, v + 1), d):
        ss = set(s)
        ok = True
        for i, j in combinations([x for x in range(1, v + 1) if x not in ss], 2):
            between = sum(1 for x in s if i < x < j)
            if between % 2:
                ok = False
                break
        if ok:
            facets.append(frozenset(s))
    raw = [tuple(Fraction(t ** e) for e in range(1, d + 1)) for t in range(1, v + 1)]
    center = tuple(sum(p[r] for p in raw) / v for r in range(d))
    pts = tuple(tuple(x - c for x, c in zip(p, center)) for p in raw)
    return CombPolytope(v, d, frozenset(facets), (), _normalize_dual(pts, facets))


def _normalize_dual(pts, facets) -> Optional[Realization]:
    real = Realization(pts)
    return real if real.verify(frozenset(facets)) else None


def book(l: int) -> CombPolytope:
    """The book with two l-gonal facets h and 1 sharing an edge.

    Dual: the cone from h over the cycle 1..l together with the fan
    triangulation of that l-gon from 1.  Built from the tetrahedron by
    l - 3 vertex cuts, which also supplies the realization.
    """
    if l < 3:
        raise InvalidInput("a book needs l >= 3")
    cur = rename(simplex(3), ("h", "1", "2", "3"))
    for k in range(4, l + 1):
        cur = truncate_face(cur, ["h", "1", str(k - 1)], name=str(k))
    order = [cur.label_of(str(i)) for i in range(1, l + 1)] + [cur.label_of("h")]
    out = relabel(cur, order)
    expect = {frozenset((l + 1, i, i % l + 1)) for i in range(1, l + 1)}
    expect |= {frozenset((1, i, i + 1)) for i in range(2, l)}
    if out.dual_facets != frozenset(expect):
        raise InvariantViolation("book construction does not match the cone-plus-fan description")
    return out


def truncated(p: CombPolytope, faces: Sequence[Sequence], names: Optional[Sequence[str]] = None) -> CombPolytope:
    """Cut the listed faces in order of decreasing face dimension (larger label sets first is lower dimension)."""
    order = sorted(range(len(faces)), key=lambda t: (len(faces[t]), t))
    cur = p
    for t in order:
        cur = truncate_face(cur, faces[t], name=names[t] if names else None)
    return cur


RP2_TRIANGLES = ((3, 5, 6), (4, 5, 6), (2, 4, 6), (2, 3, 5), (1, 4, 5), (1, 2, 5), (1, 3, 4), (2, 3, 4), (1, 2, 6), (1, 3, 6))


def simplex_cut_along(l: int, cut_faces: Sequence[Sequence[int]], dimension: Optional[int] = None) -> CombPolytope:
    """Δ^{dimension} (default l-1) with the listed faces cut off.

    New facets are numbered after the simplex's own, in list order.  Faces
    are cut by decreasing dimension (fewest labels first) so each is still
    present on its turn.
    """
    base = simplex(l - 1 if dimension is None else dimension)
    order = sorted(range(len(cut_faces)), key=lambda t: (len(cut_faces[t]), t))
    cur = base
    for t in order:
        cur = truncate_face(cur, list(cut_faces[t]), name=f"cut{t}")
    perm = list(range(1, base.n + 1)) + [cur.label_of(f"cut{t}") for t in range(len(cut_faces))]
    out = relabel(cur, perm)
    return rename(out, tuple(str(i) for i in range(1, out.n + 1)))


def rp2_truncation() -> CombPolytope:
    """The 5-simplex with the ten faces complementary to the RP² triangles cut off."""
    faces = sorted(tuple(sorted(set(range(1, 7)) - set(t))) for t in RP2_TRIANGLES)
    return simplex_cut_along(6, faces)


def truncated_cube() -> CombPolytope:
    """The 3-cube with the vertex on facets 1, 2, 3 cut off (new facet "0")."""
    return truncate_face(cube(3), ["1", "2", "3"], name="0")


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InvalidInput(f"{what} must be an integer, got {text!r}") from None


BUILTIN_NAMES = (
    "simplex:<d>",
    "cube[:<d>]",
    "polygon:<m>",
    "pentagon",
    "hexagon",
    "square",
    "triangle",
    "prism",
    "cyclic_dual:<d>:<v>",
    "book:<l>",
    "hexagonal_book",
    "truncated_cube",
    "rp2_truncation",
    "product:<name>*<name>[*…]",
)


def builtin(name: str) -> CombPolytope:
    """Fixture polytopes by name (see ``BUILTIN_NAMES``); underscores may replace colons."""
    key = name.strip()
    if key.startswith("product:"):
        parts = key[len("product:") :].split("*")
        if len(parts) < 2:
            raise InvalidInput("product needs at least two factors separated by '*'")
        out = builtin(parts[0])
        for part in parts[1:]:
            out = product(out, builtin(part))
        return out
    simple = {
        "pentagon": lambda: polygon(5),
        "hexagon": lambda: polygon(6),
        "square": lambda: polygon(4),
        "triangle": lambda: simplex(2),
        "segment": lambda: simplex(1),
        "prism": lambda: product(simplex(2), simplex(1)),
        "cube": lambda: cube(3),
        "hexagonal_book": lambda: book(6),
        "truncated_cube": truncated_cube,
        "rp2_truncation": rp2_truncation,
    }
    if key in simple:
        return simple[key]()
    for stem in ("cyclic_dual", "simplex", "cube", "polygon", "book"):
        if key.startswith(stem + ":") or key.startswith(stem + "_"):
            args = [a for a in key[len(stem) + 1 :].replace("_", ":").replace(",", ":").split(":") if a]
            nums = [_parse_int(a, f"{stem} parameter") for a in args]
            if stem == "cyclic_dual" and len(nums) == 2:
                return cyclic_dual(*nums)
            if stem != "cyclic_dual" and len(nums) == 1:
                return {"simplex": simplex, "cube": cube, "polygon": polygon, "book": book}[stem](nums[0])
            raise InvalidInput(f"wrong number of parameters for {stem}")
    raise InvalidInput(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")

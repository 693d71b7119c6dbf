"""Walls, wall-crossing, diffeomorphism types and the torsion builder.

A wall of a configuration in Q^p is a hyperplane through exactly p of its
columns that does not support a facet of their hull.  Translating the
configuration moves 0 relative to the columns; every time 0 passes through
a wall the associate polytope changes by one bistellar flip.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .configurations import Configuration, check_admissible, require_admissible, split_circles
from .errors import InadmissibleEndpoint, InvalidInput, InvariantViolation, NonGenericPath
from .homology import SimplicialComplex, SubsetHomology, find_isomorphism, induced_subcomplex, link_complex, mask_of, reduced_homology
from .kernel import as_rational, format_rational, nullspace_basis, solve_unique
from .polytopes import (
    CombPolytope,
    FlipSpec,
    diff_as_flip,
    is_truncated_simplex,
    neighbourliness,
    polytope_of,
    realize,
    simplex_cut_along,
    truncate_face,
)

__all__ = [
    "Wall",
    "CrossingEvent",
    "CrossingResult",
    "enumerate_walls",
    "cross",
    "DiffeoType",
    "sphere",
    "torus",
    "product_of",
    "connected_sum",
    "unknown",
    "mcgavran_type",
    "ldm_p2_type",
    "p1_type",
    "join_factors",
    "diffeo_type",
    "TorsionBuild",
    "torsion_build",
]


# ---------------------------------------------------------------- walls


@dataclass(frozen=True)
class Wall:
    """Hyperplane {x : ⟨normal, x⟩ = offset} through the columns ``indices``.

    ``positive`` are the columns on the side of 0, ``negative`` the others;
    the type is (|positive|, |negative|).
    """

    indices: Tuple[int, ...]
    normal: Tuple[Fraction, ...]
    offset: Fraction
    positive: Tuple[int, ...]
    negative: Tuple[int, ...]

    @property
    def type(self) -> Tuple[int, int]:
        return (len(self.positive), len(self.negative))

    def to_json(self, labels: Sequence[str]) -> dict:
        return {
            "indices": [labels[i - 1] for i in self.indices],
            "normal": [format_rational(x) for x in self.normal],
            "offset": format_rational(self.offset),
            "positive_side": [labels[i - 1] for i in self.positive],
            "negative_side": [labels[i - 1] for i in self.negative],
            "type": list(self.type),
        }


def _hyperplane(points: Sequence[Sequence[Fraction]], p: int) -> Optional[Tuple[Tuple[Fraction, ...], Fraction]]:
    """(normal, offset) of the unique hyperplane through p affinely independent points."""
    # unknowns (normal, -offset): ⟨normal, x⟩ - offset = 0 on every point
    system = [list(pt) + [Fraction(-1)] for pt in points]
    basis = nullspace_basis(system, p + 1)
    if len(basis) != 1:
        return None
    vec = basis[0]
    normal = tuple(vec[:p])
    if not any(normal):
        return None
    return normal, vec[p]


def enumerate_walls(c: Configuration) -> List[Wall]:
    """Every wall of an admissible configuration, in lexicographic order of indices."""
    if c.p == 0:
        raise InvalidInput("walls need p >= 1: with p = 0 there are no hyperplanes to cross")
    require_admissible(c)
    walls = []
    for subset in combinations(range(1, c.n + 1), c.p):
        plane = _hyperplane([c.columns[i - 1] for i in subset], c.p)
        if plane is None:
            continue
        normal, offset = plane
        values = {j: sum(a * b for a, b in zip(normal, c.columns[j - 1])) - offset for j in range(1, c.n + 1) if j not in subset}
        if any(v == 0 for v in values.values()):
            continue  # more than p columns on the hyperplane
        above = tuple(j for j, v in values.items() if v > 0)
        below = tuple(j for j, v in values.items() if v < 0)
        if not above or not below:
            continue  # supports a facet of the hull
        zero_side = -offset
        if zero_side == 0:
            raise NonGenericPath(f"0 lies on the hyperplane through columns {list(subset)}")
        positive, negative = (above, below) if zero_side > 0 else (below, above)
        walls.append(Wall(subset, normal, offset, positive, negative))
    return walls


def _crowded_hyperplanes(c: Configuration) -> List[Tuple[int, ...]]:
    """p-subsets spanning a hyperplane that also holds some other column."""
    out = []
    for subset in combinations(range(1, c.n + 1), c.p):
        plane = _hyperplane([c.columns[i - 1] for i in subset], c.p)
        if plane is None:
            continue
        normal, offset = plane
        if any(sum(a * b for a, b in zip(normal, c.columns[j - 1])) == offset for j in range(1, c.n + 1) if j not in subset):
            out.append(subset)
    return out


@dataclass(frozen=True)
class CrossingEvent:
    """0 meets the translated wall at time t with convex weights ``weights``."""

    time: Fraction
    wall: Wall
    weights: Tuple[Fraction, ...]
    flip: Optional[FlipSpec] = None
    before: Optional[CombPolytope] = field(default=None, compare=False)
    after: Optional[CombPolytope] = field(default=None, compare=False)

    def to_json(self, labels: Sequence[str]) -> dict:
        out = {
            "time": format_rational(self.time),
            "wall": self.wall.to_json(labels),
            "weights": [format_rational(x) for x in self.weights],
            "flip": self.flip.to_json() if self.flip else None,
        }
        if self.before is not None and self.after is not None:
            out["facets_before"] = self.before.n
            out["facets_after"] = self.after.n
        return out


@dataclass(frozen=True)
class CrossingResult:
    start: Configuration
    translation: Tuple[Fraction, ...]
    events: Tuple[CrossingEvent, ...]
    final: Configuration
    polytopes: Tuple[CombPolytope, ...]  # before the first event, then after each
    circles: Tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "translation": [format_rational(x) for x in self.translation],
            "events": [e.to_json(self.start.labels) for e in self.events],
            "final": self.final.to_json(),
            "facet_counts": [q.n for q in self.polytopes],
            "circles": list(self.circles),
        }


def _event_time(c: Configuration, wall: Wall, v: Sequence[Fraction]) -> Optional[Tuple[Fraction, Tuple[Fraction, ...]]]:
    """Solve Σ μ_j (A_j + t v) = 0, Σ μ_j = 1 over the wall's columns; None if never met."""
    p = c.p
    cols = [c.columns[i - 1] for i in wall.indices]
    # unknowns μ_1..μ_p, s = t (the equations are linear in (μ, t) because Σμ = 1)
    rows = [[cols[j][r] for j in range(p)] + [v[r]] for r in range(p)]
    rows.append([Fraction(1)] * p + [Fraction(0)])
    rhs = [Fraction(0)] * p + [Fraction(1)]
    sol = solve_unique(rows, rhs)
    if sol is None:
        return None
    weights, t = tuple(sol[:p]), sol[p]
    return t, weights


def cross(c: Configuration, translation: Sequence) -> CrossingResult:
    """Follow A + t v for t from 0 to 1, recording every wall event and its flip."""
    v = tuple(as_rational(x) for x in translation)
    if len(v) != c.p:
        raise InvalidInput(f"translation needs {c.p} entries")
    if not check_admissible(c).admissible:
        raise InadmissibleEndpoint("the starting configuration is not admissible")
    final = c.translate(v)
    if not check_admissible(final).admissible:
        raise InadmissibleEndpoint("the translated configuration is not admissible")
    raw = []
    for wall in enumerate_walls(c) if c.p else []:
        hit = _event_time(c, wall, v)
        if hit is None:
            continue
        t, weights = hit
        if not 0 < t < 1:
            continue
        if any(wt < 0 for wt in weights):
            continue
        if any(wt == 0 for wt in weights):
            raise NonGenericPath(f"0 meets the boundary of the wall through {list(wall.indices)} at t = {t}")
        raw.append((t, wall, weights))
    for subset in _crowded_hyperplanes(c):
        probe = Wall(subset, (), Fraction(0), (), ())
        hit = _event_time(c, probe, v)
        if hit is not None and 0 < hit[0] < 1 and all(wt >= 0 for wt in hit[1]):
            raise NonGenericPath(f"0 crosses a hyperplane holding more than {c.p} columns, through {list(subset)}, at t = {hit[0]}")
    raw.sort(key=lambda e: e[0])
    for (t1, w1, _), (t2, w2, _) in zip(raw, raw[1:]):
        if t1 == t2:
            raise NonGenericPath(f"walls {list(w1.indices)} and {list(w2.indices)} are crossed at the same time {t1}")
    times = [Fraction(0)] + [t for t, _, _ in raw] + [Fraction(1)]
    samples = [(a + b) / 2 for a, b in zip(times, times[1:])]
    polys = []
    circles = []
    for s in samples:
        cs = c.translate(tuple(s * x for x in v))
        rep = check_admissible(cs)
        if not rep.admissible:
            raise NonGenericPath(f"the path leaves the admissible configurations near t = {s}")
        polys.append(polytope_of(cs))
        circles.append(rep.k)
    events = []
    for t_index, (t, wall, weights) in enumerate(raw):
        before, after = polys[t_index], polys[t_index + 1]
        flip = diff_as_flip(before, after)
        if flip is None:
            raise InvariantViolation(f"the polytopes on the two sides of the wall at t = {t} do not differ by one flip")
        events.append(CrossingEvent(t, wall, weights, flip, before, after))
    return CrossingResult(c, v, tuple(events), final, tuple(polys), tuple(circles))


# ---------------------------------------------------------------- diffeomorphism types


@dataclass(frozen=True)
class DiffeoType:
    """Expression tree: sphere, torus, product, connected sum of sphere products, unknown."""

    kind: str
    dimension: int
    provenance: str
    sphere_dim: int = 0
    circles: int = 0
    factors: Tuple["DiffeoType", ...] = ()
    terms: Tuple[Tuple[int, int, int], ...] = ()  # (count, a, b) for #(count) S^a × S^b
    conjectural: bool = False
    cohomology: Optional[dict] = None

    def describe(self) -> str:
        if self.kind == "sphere":
            return f"S^{self.sphere_dim}"
        if self.kind == "torus":
            return "S^1" if self.circles == 1 else f"T^{self.circles}"
        if self.kind == "product":
            return "×".join(f.describe() if f.kind != "connected_sum" or len(f.terms) == 1 and f.terms[0][0] == 1 else f"({f.describe()})" for f in self.factors)
        if self.kind == "connected_sum":
            text = " # ".join(f"#({c}) S^{a}×S^{b}" if c > 1 else f"S^{a}×S^{b}" for c, a, b in self.terms)
            return text + (" (cohomology ring only)" if self.conjectural else "")
        return "unknown"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "dimension": self.dimension, "provenance": self.provenance, "text": self.describe()}
        if self.kind == "sphere":
            out["sphere_dim"] = self.sphere_dim
        if self.kind == "torus":
            out["circles"] = self.circles
        if self.factors:
            out["factors"] = [f.to_json() for f in self.factors]
        if self.terms:
            out["terms"] = [{"count": c, "a": a, "b": b} for c, a, b in self.terms]
        if self.conjectural:
            out["conjectural"] = True
        if self.cohomology is not None:
            out["cohomology"] = self.cohomology
        return out


def sphere(m: int, provenance: str) -> DiffeoType:
    return DiffeoType("sphere", m, provenance, sphere_dim=m)


def torus(k: int) -> DiffeoType:
    return DiffeoType("torus", k, "one circle per indispensable column", circles=k)


def product_of(factors: Sequence[DiffeoType], provenance: str) -> DiffeoType:
    flat = []
    for f in factors:
        flat.extend(f.factors if f.kind == "product" else [f])
    if len(flat) == 1:
        return flat[0]
    return DiffeoType("product", sum(f.dimension for f in flat), provenance, factors=tuple(flat))


def connected_sum(terms: Sequence[Tuple[int, int, int]], provenance: str, conjectural: bool = False) -> DiffeoType:
    merged: Dict[Tuple[int, int], int] = {}
    for count, a, b in terms:
        key = (min(a, b), max(a, b))
        merged[key] = merged.get(key, 0) + count
    clean = tuple(sorted(((c, a, b) for (a, b), c in merged.items() if c), key=lambda t: (t[1], t[2])))
    if not clean:
        raise InvariantViolation("empty connected sum")
    dims = {a + b for _, a, b in clean}
    if len(dims) != 1:
        raise InvariantViolation("connected-sum terms of different dimensions")
    if len(clean) == 1 and clean[0][0] == 1:
        _, a, b = clean[0]
        return product_of([sphere(a, provenance), sphere(b, provenance)], provenance)
    return DiffeoType("connected_sum", dims.pop(), provenance, terms=clean, conjectural=conjectural)


def unknown(dim: int, cohomology: Optional[dict], provenance: str) -> DiffeoType:
    return DiffeoType("unknown", dim, provenance, cohomology=cohomology)


MCGAVRAN = "closed form for vertex-truncated simplices (McGavran)"
LDM = "odd cyclic weights of a p = 2 configuration (López de Medrano)"
SIMPLEX = "the polytope is a simplex, so the link is a sphere"
JOIN = "the dual sphere is a join, so the polytope is a product and the link a product of links"
TWO_SIGNS = "p = 1 with a positive and b negative columns gives S^{2a-1}×S^{2b-1}"
NEIGHBOURLY = "dual neighbourly of even dimension: ring of a connected sum of sphere products"


def mcgavran_type(q: int, l: int) -> DiffeoType:
    """#_{j=1}^{l} j·C(l+1, j+1) S^{2+j} × S^{2q+l-j-1}, the link of Δ^q with l vertex cuts."""
    if l <= 0:
        raise InvalidInput("the closed form needs at least one cut")
    if q < 1:
        raise InvalidInput("the simplex dimension must be positive")
    terms = [(j * comb(l + 1, j + 1), 2 + j, 2 * q + l - j - 1) for j in range(1, l + 1)]
    out = connected_sum(terms, MCGAVRAN)
    if out.dimension != 2 * q + l + 1:
        raise InvariantViolation("dimension of the closed form is off")
    return out


def _cross(u: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
    return u[0] * w[1] - u[1] * w[0]


def _dot(u, w) -> Fraction:
    return sum(a * b for a, b in zip(u, w))


def _half(u) -> int:
    """0 for angles in [0, π), 1 for [π, 2π)."""
    return 0 if u[1] > 0 or (u[1] == 0 and u[0] > 0) else 1


def _sorted_by_angle(vectors: List[Tuple[int, Tuple[Fraction, Fraction]]]):
    from functools import cmp_to_key

    def compare(a, b):
        ha, hb = _half(a[1]), _half(b[1])
        if ha != hb:
            return ha - hb
        x = _cross(a[1], b[1])
        return -1 if x > 0 else (1 if x < 0 else 0)

    return sorted(vectors, key=cmp_to_key(compare))


def _same_direction(u, w) -> bool:
    return _cross(u, w) == 0 and _dot(u, w) > 0


def _open_arc_contains(start, end, x) -> bool:
    """x strictly inside the counterclockwise arc from ``start`` to ``end`` (shorter than π)."""
    return _cross(start, x) > 0 and _cross(x, end) > 0


def cyclic_weights(c: Configuration) -> Tuple[List[int], List[List[int]]]:
    """Merge the directions of a p = 2 configuration into an odd cyclic weight vector.

    Columns with the same direction are grouped; then adjacent groups are
    merged while the open arc between them holds no antipode of any column.
    Returns the weights and the column indices in each group, counterclockwise.
    """
    if c.p != 2:
        raise InvalidInput("cyclic weights need p = 2")
    cols = list(enumerate(c.columns, start=1))
    if any(not any(x) for _, x in cols):
        raise InvalidInput("a zero column has no direction")
    ordered = _sorted_by_angle(cols)
    groups: List[List[int]] = []
    dirs: List[Tuple[Fraction, Fraction]] = []
    for index, u in ordered:
        if dirs and _same_direction(dirs[-1], u):
            groups[-1].append(index)
        else:
            groups.append([index])
            dirs.append(u)
    if len(groups) > 1 and _same_direction(dirs[0], dirs[-1]):
        groups[0] = groups.pop() + groups[0]
        dirs.pop()
    antipodes = [tuple(-x for x in u) for _, u in cols]
    changed = True
    while changed and len(groups) > 1:
        changed = False
        for t in range(len(groups)):
            s = (t + 1) % len(groups)
            if _cross(dirs[t], dirs[s]) <= 0:
                continue  # arc of at least π
            if any(_open_arc_contains(dirs[t], dirs[s], a) for a in antipodes):
                continue
            groups[t] = groups[t] + groups[s]
            del groups[s]
            del dirs[s]
            changed = True
            break
    return [len(g) for g in groups], groups


def _weights_polytope_matches(c: Configuration, groups: List[List[int]]) -> bool:
    """The odd-polygon configuration with these group weights has the same associate polytope.

    On the vertices of a regular (2l+1)-gon, 0 lies in the hull of a set of
    directions exactly when they are not all within l+1 consecutive ones.
    """
    k = len(groups)
    l = (k - 1) // 2
    group_of = {i: g for g, members in enumerate(groups) for i in members}
    columns = range(1, c.n + 1)
    implied = set()
    for subset in combinations(columns, c.n - c.p - 1):
        rest = {group_of[i] for i in columns if i not in subset}
        if not any(all((g - s) % k <= l for g in rest) for s in range(k)):
            implied.add(frozenset(subset))
    return implied == set(polytope_of(c).dual_facets)


def ldm_p2_type(c: Configuration) -> DiffeoType:
    """Diffeomorphism type of a p = 2 link with no indispensable columns."""
    if c.p != 2:
        raise InvalidInput("this classification applies to p = 2")
    rep = require_admissible(c)
    if rep.k:
        raise InvalidInput("split off the indispensable columns first")
    weights, groups = cyclic_weights(c)
    k = len(weights)
    if k % 2 == 0 or k < 3:
        raise InvariantViolation(f"merging directions left {k} groups, expected an odd number")
    if not _weights_polytope_matches(c, groups):
        raise InvariantViolation("the merged weights do not reproduce the associate polytope")
    n = c.n
    if k == 3:
        return product_of([sphere(2 * w - 1, LDM) for w in weights], LDM)
    l = (k - 1) // 2
    terms = []
    for i in range(k):
        di = sum(weights[(i + t) % k] for t in range(l))
        terms.append((1, 2 * di - 1, 2 * n - 2 * di - 2))
    return connected_sum(terms, LDM)


def p1_type(c: Configuration) -> DiffeoType:
    """p = 1, no indispensable columns: a positive and b negative entries."""
    if c.p != 1:
        raise InvalidInput("this rule applies to p = 1")
    a = sum(1 for col in c.columns if col[0] > 0)
    b = sum(1 for col in c.columns if col[0] < 0)
    return product_of([sphere(2 * a - 1, TWO_SIGNS), sphere(2 * b - 1, TWO_SIGNS)], TWO_SIGNS)


def _minimal_non_faces(p: CombPolytope) -> List[int]:
    faces = p.face_masks()
    out = set()
    for f in faces:
        for v in range(p.n):
            bit = 1 << v
            if f & bit:
                continue
            s = f | bit
            if s in faces or s in out:
                continue
            if all((s ^ (1 << w)) in faces for w in range(p.n) if s >> w & 1):
                out.add(s)
    return sorted(out)


def join_factors(p: CombPolytope) -> List[CombPolytope]:
    """The finest splitting of the dual sphere as a join (a polytope as a product).

    Minimal non-faces of a join are those of its factors, so the factors are
    the connected components of the graph joining vertices that share a
    minimal non-face.
    """
    parent = list(range(p.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in _minimal_non_faces(p):
        members = [v for v in range(p.n) if s >> v & 1]
        for v in members[1:]:
            parent[find(v)] = find(members[0])
    comps: Dict[int, List[int]] = {}
    for v in range(p.n):
        comps.setdefault(find(v), []).append(v + 1)
    if len(comps) == 1:
        return [p]
    factors = []
    for members in sorted(comps.values()):
        index = {v: t + 1 for t, v in enumerate(members)}
        facets = frozenset(frozenset(index[v] for v in f if v in index) for f in p.dual_facets)
        dim = len(next(iter(facets)))
        factors.append(CombPolytope(len(members), dim, facets, tuple(p.name_of(v) for v in members)))
    # the join of the factors must give back the sphere
    total = 1
    for f in factors:
        total *= len(f.dual_facets)
    if total != len(p.dual_facets):
        raise InvariantViolation("join factors do not multiply back to the sphere")
    return factors


def diffeo_type(
    p: CombPolytope,
    c: Optional[Configuration] = None,
    circles: int = 0,
    cohomology=None,
) -> DiffeoType:
    """Diffeomorphism type where a classification result applies, else Unknown.

    With a configuration, its indispensable columns become torus factors
    and ``p`` is taken from the configuration.
    """
    if c is not None:
        core_config, k = split_circles(c)
        p = polytope_of(c)
        circles = k
    else:
        core_config = None
    core = _core_type(p, core_config, cohomology)
    if circles:
        return product_of([core, torus(circles)], "indispensable columns split off as circles")
    return core


def _core_type(p: CombPolytope, c: Optional[Configuration], cohomology) -> DiffeoType:
    dim = p.n + p.d
    if p.n == p.d + 1:
        return sphere(dim, SIMPLEX)
    if c is not None and c.p == 1:
        return p1_type(c)
    factors = join_factors(p)
    if len(factors) > 1:
        return product_of([_core_type(f, None, None) for f in factors], JOIN)
    trunc = is_truncated_simplex(p)
    if trunc is not None and trunc[0] > 0:
        return mcgavran_type(p.d, trunc[0])
    if p.n - p.d - 1 == 2:
        config = c
        if config is None and p.realization is not None:
            config = realize(p)
        if config is not None:
            return ldm_p2_type(config)
    if p.d % 2 == 0 and neighbourliness(p) >= p.d // 2 - 1:
        from .cohomology import cohomology_of, connected_sum_from_betti

        report = cohomology if cohomology is not None else cohomology_of(p)
        return connected_sum(connected_sum_from_betti(report.betti_vector()), NEIGHBOURLY, conjectural=True)
    if cohomology is None:
        from .cohomology import cohomology_of

        cohomology = cohomology_of(p)
    return unknown(dim, cohomology.to_json(), "no classification result applies")


# ---------------------------------------------------------------- torsion builder


@dataclass
class TorsionBuild:
    complex: SimplicialComplex
    polytope: CombPolytope
    configuration: Optional[Configuration]
    method: str
    support: Tuple[int, ...]  # labels of the summand carrying H̃_*(K)
    isomorphism: Dict
    certificates: List[dict]

    @property
    def dim_x(self) -> int:
        return self.polytope.n + self.polytope.d

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "n": self.polytope.n,
            "d": self.polytope.d,
            "dim_x": self.dim_x,
            "support": list(self.support),
            "isomorphism": {str(k): v for k, v in self.isomorphism.items()},
            "certificates": self.certificates,
            "polytope": self.polytope.to_json(),
            "configuration": self.configuration.to_json() if self.configuration else None,
        }


def _complex_non_faces(k: SimplicialComplex) -> List[Tuple[int, ...]]:
    """Minimal non-faces of ``k`` as tuples of 1-based positions."""
    faces = set()
    for m in k.face_masks():
        faces.add(m)
    l = len(k.vertices)
    out = []
    for size in range(2, l + 1):
        for s in combinations(range(l), size):
            mask = sum(1 << v for v in s)
            if mask in faces:
                continue
            if all((mask ^ (1 << v)) in faces for v in s):
                out.append(tuple(v + 1 for v in s))
    return out


def torsion_build(k: SimplicialComplex, even: bool = False, realize_configuration: bool = True) -> TorsionBuild:
    """A polytope whose link carries H̃_*(K) as a summand placed by a chosen support.

    With l vertices and every maximal face of size at most l - 2, cut from
    Δ^{l-1} the faces numbered by the complements of the maximal faces; the
    link complex over the new facets is then K.  Otherwise subdivide the
    minimal non-faces of K inside ∂Δ^l (one extra vertex), so that K is the
    induced subcomplex on the first l facets.
    """
    if k.void:
        raise InvalidInput("the void complex has no vertices")
    l = len(k.vertices)
    if l < 2:
        raise InvalidInput("the builder needs at least two vertices")
    used = set().union(*k.maximal_faces) if k.maximal_faces else set()
    missing = [v for v in k.vertices if v not in used]
    if missing:
        raise InvalidInput(f"vertices {missing} lie in no face")
    index = {v: t + 1 for t, v in enumerate(k.vertices)}
    maximal = sorted(tuple(sorted(index[v] for v in f)) for f in k.maximal_faces)
    standard = SimplicialComplex(tuple(range(1, l + 1)), tuple(frozenset(f) for f in maximal))
    if all(len(f) <= l - 2 for f in maximal):
        cuts = [tuple(v for v in range(1, l + 1) if v not in f) for f in maximal]
        poly = simplex_cut_along(l, cuts)
        method = "cut the faces complementary to the maximal faces"
        support = tuple(range(l + 1, poly.n + 1))
    else:
        cuts = _complex_non_faces(standard)
        poly = simplex_cut_along(l, cuts, dimension=l)
        method = "subdivide the minimal non-faces inside a simplex with one extra vertex"
        support = tuple(range(1, l + 1))
    if even and (poly.n + poly.d) % 2:
        target = next(f for f in sorted(tuple(sorted(g)) for g in poly.dual_facets) if not set(f) <= set(range(1, l + 1)))
        poly = truncate_face(poly, list(target), name=str(poly.n + 1))
        if method.startswith("cut"):
            support = support + (poly.n,)
    iso, certificates = _certify(poly, standard, support, method)
    config = realize(poly) if realize_configuration and poly.realization is not None else None
    return TorsionBuild(k, poly, config, method, support, iso, certificates)


def _certify(poly: CombPolytope, standard: SimplicialComplex, support: Tuple[int, ...], method: str):
    l = len(standard.vertices)
    if method.startswith("cut"):
        found = link_complex(poly, support)
        where = "link"
    else:
        found = induced_subcomplex(poly, support)
        where = "induced"
    relabelled = SimplicialComplex(tuple(range(1, l + 1)), found.maximal_faces, found.void)
    iso = find_isomorphism(standard, relabelled)
    if iso is None:
        raise InvariantViolation(f"the {where} complex on the chosen facets is not isomorphic to the input")
    summary = reduced_homology(standard)
    sh = SubsetHomology(poly)
    mask = mask_of(support)
    comp = poly.n - len(support)
    if where == "link":
        checked = sh.link(mask)
    else:
        checked = sh.induced(mask)
    if checked != summary:
        raise InvariantViolation("the summand's homology differs from the input complex's")
    certs = []
    for j, (b, t) in summary.groups.items():
        if where == "link":
            degree = 2 * comp - j - 2
        else:
            degree = poly.d + comp - j - 1
        certs.append({"complex_degree": j, "betti": b, "torsion": list(t), "cohomology_degree": degree, "support": list(support)})
    return iso, certs

"""Reduced integer homology of simplicial complexes, with cycle bases.

Complexes are stored as maximal faces over an ordered vertex tuple.  The
complex with no vertices but the empty face has H̃_{-1} = Z (the homology of
the empty space); the void complex, with no faces at all, has no homology.

Subset-indexed homology of a simplicial sphere (induced subcomplexes and
link complexes for every vertex subset) goes through ``SubsetHomology``,
which uses the compiled kernel when it is available.
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidInput, InvariantViolation
from .kernel import FaceTable, cells_homology, rank, smith_normal_form

__all__ = [
    "SimplicialComplex",
    "HomologySummary",
    "CycleBasis",
    "reduced_homology",
    "rational_betti",
    "cycle_basis_of_cells",
    "induced_subcomplex",
    "link_complex",
    "SubsetHomology",
    "find_isomorphism",
    "mask_of",
    "members_of",
]


def mask_of(labels: Iterable[int]) -> int:
    """Bitmask of 1-based integer labels."""
    m = 0
    for x in labels:
        m |= 1 << (x - 1)
    return m


def members_of(mask: int) -> Tuple[int, ...]:
    """1-based labels of a bitmask, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class SimplicialComplex:
    """Maximal faces over ``vertices`` (a tuple fixing the vertex order).

    ``void`` marks the complex with no faces at all.  Otherwise the empty face
    is always present, so ``maximal_faces == ()`` is the empty complex.
    """

    vertices: Tuple = ()
    maximal_faces: Tuple[frozenset, ...] = ()
    void: bool = False

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise InvalidInput("repeated vertex labels")
        vset = set(verts)
        faces = {frozenset(f) for f in self.maximal_faces}
        faces.discard(frozenset())
        for f in faces:
            if not f <= vset:
                raise InvalidInput(f"face {sorted(f, key=str)} uses labels outside the vertex set")
        if self.void and faces:
            raise InvalidInput("a void complex has no faces")
        maximal = [f for f in faces if not any(f < g for g in faces)]
        order = {v: i for i, v in enumerate(verts)}
        maximal.sort(key=lambda f: (len(f), sorted(order[v] for v in f)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "maximal_faces", tuple(maximal))

    @classmethod
    def from_faces(cls, faces: Iterable[Iterable], vertices: Optional[Sequence] = None) -> "SimplicialComplex":
        faces = [frozenset(f) for f in faces]
        if vertices is None:
            vertices = sorted({v for f in faces for v in f}, key=_label_key)
        return cls(tuple(vertices), tuple(faces))

    @property
    def dimension(self) -> int:
        if self.void:
            return -2
        return max((len(f) for f in self.maximal_faces), default=0) - 1

    def _index(self) -> Dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def face_masks(self) -> List[int]:
        """Every face (the empty face included unless void) as a bitmask."""
        if self.void:
            return []
        idx = self._index()
        seen = {0}
        for f in self.maximal_faces:
            bits = [1 << idx[v] for v in f]
            for r in range(1, len(bits) + 1):
                for sub in combinations(bits, r):
                    seen.add(sum(sub))
        return sorted(seen)

    def faces(self) -> List[Tuple]:
        return [tuple(self.vertices[i] for i in range(len(self.vertices)) if m >> i & 1) for m in self.face_masks()]

    def f_vector(self) -> List[int]:
        """Face counts by dimension starting at -1."""
        counts = [0] * (self.dimension + 2)
        for m in self.face_masks():
            counts[bin(m).count("1")] += 1
        return counts

    def euler_characteristic(self) -> int:
        """Reduced Euler characteristic, alternating over dimensions -1 upward."""
        return sum((-1) ** (q - 1) * c for q, c in enumerate(self.f_vector()))

    def to_json(self) -> dict:
        out = {"vertices": list(self.vertices), "maximal_faces": [sorted(f, key=self._index().get) for f in self.maximal_faces]}
        if self.void:
            out["void"] = True
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        try:
            faces = [tuple(f) for f in data["maximal_faces"]]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"complex JSON needs 'maximal_faces': {exc}") from exc
        verts = data.get("vertices")
        if verts is None:
            verts = sorted({v for f in faces for v in f}, key=_label_key)
        return cls(tuple(verts), tuple(frozenset(f) for f in faces), bool(data.get("void", False)))


def _label_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


@dataclass(frozen=True)
class HomologySummary:
    """Reduced homology by degree: ``groups[j] = (betti, torsion)``.

    Degrees run from -1 upward; degrees not listed are zero.
    """

    groups: Dict[int, Tuple[int, Tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for j, (b, t) in self.groups.items():
            t = tuple(sorted(int(x) for x in t if x > 1))
            if b < 0:
                raise InvariantViolation(f"negative Betti number in degree {j}")
            if b or t:
                clean[int(j)] = (int(b), t)
        object.__setattr__(self, "groups", dict(sorted(clean.items())))

    @classmethod
    def from_kernel(cls, result) -> "HomologySummary":
        betti, torsion = result
        return cls({q - 1: (betti[q], tuple(torsion[q])) for q in range(len(betti))})

    def betti(self, j: int) -> int:
        return self.groups.get(j, (0, ()))[0]

    def torsion(self, j: int) -> Tuple[int, ...]:
        return self.groups.get(j, (0, ()))[1]

    def is_zero(self) -> bool:
        return not self.groups

    def to_json(self) -> list:
        return [{"degree": j, "betti": b, "torsion": list(t)} for j, (b, t) in self.groups.items()]

    def describe(self) -> str:
        if not self.groups:
            return "0"
        parts = []
        for j, (b, t) in self.groups.items():
            terms = ([f"Z^{b}" if b > 1 else "Z"] if b else []) + [f"Z/{x}" for x in t]
            parts.append(f"H~{j} = " + " + ".join(terms))
        return ", ".join(parts)


def _boundary_matrix(upper: Sequence[int], lower: Sequence[int]) -> List[List[int]]:
    index = {c: i for i, c in enumerate(lower)}
    mat = [[0] * len(upper) for _ in lower]
    for j, c in enumerate(upper):
        sign = 1
        m = c
        while m:
            low = m & -m
            r = index.get(c ^ low)
            if r is not None:
                mat[r][j] = sign
            sign = -sign
            m ^= low
    return mat


@dataclass(frozen=True)
class _DegreeBasis:
    cells: Tuple[int, ...]
    generators: Tuple[Tuple[int, Tuple[int, ...]], ...]  # (order, chain); order 0 is free
    kernel_rank_offset: int  # rank of the outgoing boundary
    right_inverse: Tuple[Tuple[int, ...], ...]
    coordinate_map: Tuple[Tuple[int, ...], ...]  # U from the Smith form of the boundary coordinates


class CycleBasis:
    """Generators of H̃_q for each degree, with a coordinate map for cycles.

    For degree q the cycles are ker ∂_q with basis the trailing columns of the
    right Smith transform of ∂_q.  Boundaries have integer coordinates M in
    that basis; the Smith form U·M·V of M picks the generators (columns of
    the cycle basis times U⁻¹) and sends any cycle's coordinates through U.
    """

    def __init__(self, vertices: Tuple, degrees: Dict[int, _DegreeBasis]):
        self.vertices = vertices
        self._degrees = degrees

    def degrees(self) -> List[int]:
        return sorted(q for q, b in self._degrees.items() if b.generators)

    def cells(self, q: int) -> Tuple[int, ...]:
        b = self._degrees.get(q)
        return b.cells if b else ()

    def generators(self, q: int) -> List[Tuple[int, Dict[int, int]]]:
        """(order, chain) pairs; chains map cell bitmasks to coefficients."""
        b = self._degrees.get(q)
        if b is None:
            return []
        return [(order, {b.cells[i]: x for i, x in enumerate(vec) if x}) for order, vec in b.generators]

    def free_generators(self, q: int) -> List[Dict[int, int]]:
        return [chain for order, chain in self.generators(q) if order == 0]

    def coordinates(self, q: int, chain: Dict[int, int]) -> List[int]:
        """Coordinates of a cycle in ``generators(q)``; torsion entries reduced mod their order."""
        b = self._degrees.get(q)
        if b is None:
            if any(chain.values()):
                raise InvariantViolation(f"nonzero chain in degree {q}, where there are no cells")
            return []
        index = {c: i for i, c in enumerate(b.cells)}
        vec = [0] * len(b.cells)
        for c, x in chain.items():
            if x:
                if c not in index:
                    raise InvariantViolation(f"chain uses cell {c:b} outside the complex")
                vec[index[c]] += x
        r = b.kernel_rank_offset
        n = len(b.cells)
        kernel_coords = [sum(b.right_inverse[i][k] * vec[k] for k in range(n)) for i in range(n)]
        if any(kernel_coords[:r]):
            raise InvariantViolation("chain is not a cycle")
        if not b.generators:
            return []
        y = kernel_coords[r:]
        u = b.coordinate_map
        # generators with order 1 are trivial and were dropped; U's rows for them are skipped
        full = [sum(u[i][k] * y[k] for k in range(len(y))) for i in range(len(y))]
        trivial = len(y) - len(b.generators)
        out = []
        for (order, _), x in zip(b.generators, full[trivial:]):
            out.append(x % order if order else x)
        return out


def _cells_by_dim(face_masks: Sequence[int]) -> List[List[int]]:
    top = max((bin(m).count("1") for m in face_masks), default=0)
    by = [[] for _ in range(top + 1)]
    for m in face_masks:
        by[bin(m).count("1")].append(m)
    return by


def _cycle_basis(vertices: Tuple, by: List[List[int]]) -> CycleBasis:
    degrees: Dict[int, _DegreeBasis] = {}
    top = len(by)
    for q in range(top):
        cells = by[q]
        if not cells:
            continue
        n = len(cells)
        lower = by[q - 1] if q > 0 else []
        down = _boundary_matrix(cells, lower) if lower else []
        snf_down = smith_normal_form(down, transforms=True, ncols=n)
        r = snf_down.rank
        rinv = snf_down.right_inverse
        kernel = [[snf_down.right[i][j] for j in range(r, n)] for i in range(n)]  # n × z
        z = n - r
        upper = by[q + 1] if q + 1 < top else []
        if upper and z:
            up = _boundary_matrix(upper, cells)
            coords = [[sum(rinv[i][k] * up[k][j] for k in range(n)) for j in range(len(upper))] for i in range(n)]
            if any(any(row) for row in coords[:r]):
                raise InvariantViolation("boundary of a boundary is not zero")
            m = coords[r:]
        else:
            m = []
        snf_up = smith_normal_form(m, transforms=True, ncols=len(upper)) if m else None
        if snf_up is not None:
            u = snf_up.left
            uinv = snf_up.left_inverse
            diag = list(snf_up.diagonal) + [0] * (z - len(snf_up.diagonal))
        else:
            u = tuple(tuple(int(i == j) for j in range(z)) for i in range(z))
            uinv = u
            diag = [0] * z
        gens = []
        trivial = 0
        for j in range(z):
            order = diag[j]
            if order == 1:
                trivial += 1
                continue
            vec = tuple(sum(kernel[i][k] * uinv[k][j] for k in range(z)) for i in range(n))
            gens.append((order, vec))
        if trivial != sum(1 for x in diag if x == 1) or any(diag[t] != 1 for t in range(trivial)):
            raise InvariantViolation("unexpected ordering of Smith invariants")
        degrees[q - 1] = _DegreeBasis(tuple(cells), tuple(gens), r, rinv, u)
    return CycleBasis(vertices, degrees)


def reduced_homology(k: SimplicialComplex, with_basis: bool = False):
    """H̃_*(k) from the augmented chain complex; optionally a ``CycleBasis``."""
    if k.void:
        summary = HomologySummary({})
        return (summary, CycleBasis(k.vertices, {})) if with_basis else summary
    by = _cells_by_dim(k.face_masks())
    summary = HomologySummary.from_kernel(cells_homology(by))
    if not with_basis:
        return summary
    basis = _cycle_basis(k.vertices, by)
    for q in range(-1, len(by) - 1):
        gens = basis.generators(q)
        if sum(1 for o, _ in gens if o == 0) != summary.betti(q) or tuple(sorted(o for o, _ in gens if o)) != summary.torsion(q):
            raise InvariantViolation(f"cycle basis disagrees with the homology summary in degree {q}")
    return summary, basis


def cycle_basis_of_cells(vertices: Tuple, cells: Iterable[int]) -> CycleBasis:
    """Cycle basis of a complex given by all its faces as bitmasks over ``vertices``.

    The cell set must be closed under taking subsets; the empty cell (0)
    should be included unless the complex is void.
    """
    cells = sorted(set(cells))
    if not cells:
        return CycleBasis(tuple(vertices), {})
    return _cycle_basis(tuple(vertices), _cells_by_dim(cells))


def rational_betti(k: SimplicialComplex) -> List[int]:
    """Reduced Betti numbers over Q from ranks alone, degree -1 first."""
    by = _cells_by_dim(k.face_masks())
    ranks = [0] * (len(by) + 1)
    for q in range(1, len(by)):
        if by[q] and by[q - 1]:
            ranks[q] = rank(_boundary_matrix(by[q], by[q - 1]))
    return [len(by[q]) - ranks[q] - ranks[q + 1] for q in range(len(by))]


def _sphere_faces(polytope) -> List[int]:
    faces = {0}
    for f in polytope.dual_facets:
        bits = [1 << (v - 1) for v in f]
        for r in range(1, len(bits) + 1):
            for sub in combinations(bits, r):
                faces.add(sum(sub))
    return sorted(faces)


def induced_subcomplex(polytope, i_set: Iterable[int]) -> SimplicialComplex:
    """Faces of the dual sphere with all vertices in ``i_set`` (labels 1..n)."""
    chosen = tuple(sorted(set(i_set)))
    if any(not 1 <= v <= polytope.n for v in chosen):
        raise InvalidInput(f"labels must lie in 1..{polytope.n}")
    vset = set(chosen)
    faces = [frozenset(f) & vset for f in polytope.dual_facets]
    return SimplicialComplex(chosen, tuple(faces))


def link_complex(polytope, i_set: Iterable[int]) -> SimplicialComplex:
    """Subsets J of the complement whose own complement there is not a face.

    Only meaningful when the complement of ``i_set`` is itself not a face;
    otherwise no J qualifies and the void complex is returned.
    """
    chosen = set(i_set)
    if any(not 1 <= v <= polytope.n for v in chosen):
        raise InvalidInput(f"labels must lie in 1..{polytope.n}")
    comp = tuple(v for v in range(1, polytope.n + 1) if v not in chosen)
    face_set = set(_sphere_faces(polytope))
    cmask = mask_of(comp)
    cells = []
    sub = cmask
    while True:
        if (cmask ^ sub) not in face_set:
            cells.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & cmask
    if not cells:
        return SimplicialComplex(comp, (), void=True)
    faces = [frozenset(members_of(c)) for c in cells]
    return SimplicialComplex(comp, tuple(faces))


class SubsetHomology:
    """Cached H̃ of induced subcomplexes and link complexes of one sphere.

    Masks are over labels 1..n (bit i-1 for label i).  Link homology is only
    defined for masks whose complement is a non-face.
    """

    def __init__(self, polytope):
        self.n = polytope.n
        self.face_masks = _sphere_faces(polytope)
        self.face_set = frozenset(self.face_masks)
        self.full = (1 << self.n) - 1
        self.table = FaceTable(self.face_masks)
        self._induced: Dict[int, HomologySummary] = {}
        self._link: Dict[int, HomologySummary] = {}

    def is_face(self, mask: int) -> bool:
        return mask in self.face_set

    def in_delta(self, mask: int) -> bool:
        """The complement of ``mask`` is not a face of the sphere."""
        return (self.full ^ mask) not in self.face_set

    def induced(self, mask: int) -> HomologySummary:
        hit = self._induced.get(mask)
        if hit is None:
            cone = mask & -mask if mask and mask not in self.face_set else 0
            hit = HomologySummary.from_kernel(self.table.induced(mask, cone))
            self._induced[mask] = hit
        return hit

    def link(self, mask: int) -> HomologySummary:
        hit = self._link.get(mask)
        if hit is None:
            comp = self.full ^ mask
            if comp in self.face_set:
                raise InvalidInput("the complement is a face, so the subset is not in the complex Δ")
            hit = HomologySummary.from_kernel(self.table.link(comp, comp & -comp))
            self._link[mask] = hit
        return hit

    def prime(self, induced: Dict[int, HomologySummary]) -> None:
        self._induced.update(induced)


def find_isomorphism(a: SimplicialComplex, b: SimplicialComplex) -> Optional[Dict]:
    """A vertex bijection carrying the faces of ``a`` onto those of ``b``, or None."""
    if a.void != b.void or len(a.vertices) != len(b.vertices):
        return None
    fa = [frozenset(f) for f in a.maximal_faces]
    fb = {frozenset(f) for f in b.maximal_faces}
    if sorted(map(len, fa)) != sorted(map(len, fb)):
        return None

    def signature(cx, faces):
        return {v: tuple(sorted(len(f) for f in faces if v in f)) for v in cx.vertices}

    sa, sb = signature(a, fa), signature(b, list(fb))
    if sorted(sa.values()) != sorted(sb.values()):
        return None
    # visit vertices so each one shares a face with an earlier one where possible
    nbrs = {v: set() for v in a.vertices}
    for f in fa:
        for v in f:
            nbrs[v] |= f - {v}
    order: List = []
    remaining = sorted(a.vertices, key=lambda v: (-len(sa[v]), _label_key(v)))
    while remaining:
        seen = set(order)
        nxt = next((v for v in remaining if nbrs[v] & seen), remaining[0])
        order.append(nxt)
        remaining.remove(nxt)
    faces_at = {v: [f for f in fa if v in f] for v in a.vertices}
    mapping: Dict = {}
    used = set()

    def consistent(v) -> bool:
        for f in faces_at[v]:
            if all(x in mapping for x in f) and frozenset(mapping[x] for x in f) not in fb:
                return False
        return True

    def search(t: int) -> bool:
        if t == len(order):
            return {frozenset(mapping[v] for v in f) for f in fa} == fb
        v = order[t]
        for w in b.vertices:
            if w in used or sb[w] != sa[v]:
                continue
            mapping[v] = w
            used.add(w)
            if consistent(v) and search(t + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if search(0) else None

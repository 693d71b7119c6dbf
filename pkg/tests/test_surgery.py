from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from quadric_links import cohomology as coh
from quadric_links import polytopes as poly
from quadric_links import surgery
from quadric_links.cli import fixture
from quadric_links.configurations import Configuration, check_admissible
from quadric_links.errors import InadmissibleEndpoint, InvalidInput, NonGenericPath
from quadric_links.homology import SimplicialComplex

PENTAGON = Configuration.from_rows([[2, 1, -2, -2, 1], [0, 2, 1, -1, -2]])


def betti_of_type(t):
    """Betti vector of a product or connected sum of sphere products, by Künneth."""
    if t.kind == "sphere":
        out = [0] * (t.dimension + 1)
        out[0] += 1
        out[t.dimension] += 1
        return out
    if t.kind == "torus":
        from math import comb

        return [comb(t.circles, i) for i in range(t.circles + 1)]
    if t.kind == "product":
        out = [1]
        for f in t.factors:
            b = betti_of_type(f)
            new = [0] * (len(out) + len(b) - 1)
            for i, x in enumerate(out):
                for j, y in enumerate(b):
                    new[i + j] += x * y
            out = new
        return out
    if t.kind == "connected_sum":
        out = [0] * (t.dimension + 1)
        out[0] = out[t.dimension] = 1
        for count, a, b in t.terms:
            out[a] += count
            out[b] += count
        return out
    raise AssertionError(t.kind)


def grid_polytopes(c, v, steps):
    out = []
    for s in range(1, steps):
        t = Fraction(s, steps)
        cs = c.translate(tuple(t * x for x in v))
        out.append((t, poly.polytope_of(cs).named_facets() if check_admissible(cs).admissible else None))
    return out


# ---------------------------------------------------------------- walls


def test_p1_walls_are_the_interior_points():
    walls = surgery.enumerate_walls(Configuration.from_rows([[-2, -1, 1, 2]]))
    assert [w.indices for w in walls] == [(2,), (3,)]
    assert [w.type for w in walls] == [(2, 1), (2, 1)]
    assert walls[1].positive == (1, 2) and walls[1].negative == (4,)


def test_pentagon_walls_by_side_tests():
    pts = [tuple(col) for col in PENTAGON.columns]
    expect = []
    for i, j in combinations(range(5), 2):
        a, b = pts[i], pts[j]
        sides = [(b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]) for k, q in enumerate(pts) if k not in (i, j)]
        if any(s > 0 for s in sides) and any(s < 0 for s in sides):
            expect.append((i + 1, j + 1))
    walls = surgery.enumerate_walls(PENTAGON)
    assert [w.indices for w in walls] == expect and len(expect) == 5
    for w in walls:
        assert sum(w.type) == PENTAGON.n - PENTAGON.p


def test_equal_columns_span_no_wall():
    c = Configuration.from_rows([[2, 2, -2, -2, 1], [0, 0, 1, -1, -2]])
    assert all(w.indices != (1, 2) for w in surgery.enumerate_walls(c))


def test_walls_need_p_positive():
    with pytest.raises(InvalidInput):
        surgery.enumerate_walls(Configuration(0, ((), ())))


# ---------------------------------------------------------------- crossing


def test_p1_path_crossing():
    c = Configuration.from_rows([[-2, -1, 1, 2]])
    r = surgery.cross(c, ["-3/2"])
    assert len(r.events) == 1
    e = r.events[0]
    assert e.time == Fraction(2, 3) and e.wall.indices == (3,) and e.wall.type == (2, 1)
    assert e.flip.type == (2, 1)
    assert [q.n for q in r.polytopes] == [4, 3]
    assert r.circles == (0, 1)
    before = surgery.diffeo_type(r.polytopes[0], c)
    after = surgery.diffeo_type(r.polytopes[1], r.final)
    assert before.describe() == "S^3×S^3"
    assert after.describe() in ("S^5×S^1", "S^1×S^5")


def test_zero_translation_has_no_events():
    r = surgery.cross(PENTAGON, ["0", "0"])
    assert r.events == () and len(r.polytopes) == 1


def test_two_wall_path_events_and_types():
    fx = fixture("two_wall_path")
    r = surgery.cross(fx.value, fx.translation)
    assert [e.time for e in r.events] == [Fraction(2, 7), Fraction(3, 5)]
    for e in r.events:
        assert e.flip.type == e.wall.type
    assert [q.n for q in r.polytopes] == [3, 4, 5]
    texts = []
    for q, cfg_time in zip(r.polytopes, [Fraction(1, 7), Fraction(31, 70), Fraction(4, 5)]):
        cs = fx.value.translate(tuple(cfg_time * x for x in r.translation))
        texts.append(surgery.diffeo_type(q, cs).describe())
    assert texts[0] == "S^5×T^2"
    assert texts[1].count("S^3") == 2 and "S^1" in texts[1]
    assert texts[2] == "#(5) S^3×S^4"
    # the polytope is constant between events and changes across them
    grid = grid_polytopes(fx.value, r.translation, 70)
    for t, facets in grid:
        index = sum(1 for e in r.events if e.time < t)
        if any(e.time == t for e in r.events):
            continue
        assert facets == r.polytopes[index].named_facets()


def test_inadmissible_endpoints():
    c = Configuration.from_rows([[-2, -1, 1, 2]])
    with pytest.raises(InadmissibleEndpoint):
        surgery.cross(c, ["-3"])
    with pytest.raises(InadmissibleEndpoint):
        surgery.cross(Configuration.from_rows([[0, -1, 1]]), ["1"])


def test_non_generic_paths():
    with pytest.raises(NonGenericPath):
        surgery.cross(Configuration.from_rows([[-2, 1, 1, 2]]), ["-3/2"])
    with pytest.raises(NonGenericPath):
        # the path is symmetric under y -> -y, so mirror-image walls are met together
        surgery.cross(PENTAGON, ["3/2", "0"])


def test_crossing_json():
    data = surgery.cross(Configuration.from_rows([[-2, -1, 1, 2]]), ["-3/2"]).to_json()
    assert data["events"][0]["time"] == "2/3" and data["facet_counts"] == [4, 3]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-6, 6).filter(bool), min_size=3, max_size=6, unique=True), st.fractions(-8, 8, max_denominator=5))
def test_p1_paths_against_sign_counting(entries, shift):
    c = Configuration.from_rows([entries])
    try:
        r = surgery.cross(c, [shift])
    except InadmissibleEndpoint:
        assume(False)
    except NonGenericPath:
        return
    lo, hi = min(entries), max(entries)
    expect = sorted(Fraction(-x) / shift for x in entries if x not in (lo, hi) and shift and 0 < Fraction(-x) / shift < 1)
    assert [e.time for e in r.events] == expect
    for e in r.events:
        assert e.flip.type == e.wall.type
        a, b = e.flip.type
        assert e.after.n - e.before.n == (a == 1) - (b == 1)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=5, max_size=6, unique=True),
    st.tuples(st.fractions(-3, 3, max_denominator=3), st.fractions(-3, 3, max_denominator=3)),
)
def test_p2_paths_match_flips(points, v):
    c = Configuration.from_rows([[x for x, _ in points], [y for _, y in points]])
    assume(check_admissible(c).admissible)
    try:
        r = surgery.cross(c, list(v))
    except (InadmissibleEndpoint, NonGenericPath):
        return
    for e in r.events:
        assert e.flip.type == e.wall.type
    for t, facets in grid_polytopes(c, r.translation, 24):
        if any(e.time == t for e in r.events) or facets is None:
            continue
        assert facets == r.polytopes[sum(1 for e in r.events if e.time < t)].named_facets()


# ---------------------------------------------------------------- diffeomorphism types


def test_mcgavran_examples():
    assert surgery.mcgavran_type(3, 4).describe() == "#(10) S^3×S^8 # #(20) S^4×S^7 # #(19) S^5×S^6"
    assert surgery.mcgavran_type(2, 2).describe() == "#(5) S^3×S^4"
    assert surgery.mcgavran_type(2, 1).describe() == "S^3×S^3"
    with pytest.raises(InvalidInput):
        surgery.mcgavran_type(2, 0)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_mcgavran_against_cohomology(q, l):
    p = fixture(f"truncated_simplex_{q}_{l}").value
    assert poly.is_truncated_simplex(p)[0] == l
    t = surgery.mcgavran_type(q, l)
    assert t.dimension == p.n + p.d
    assert betti_of_type(t) == coh.cohomology_of(p).betti_vector()
    found = surgery.diffeo_type(p)
    assert betti_of_type(found) == betti_of_type(t)
    assert found.kind == t.kind or (l == 1 and found.kind == "product")


def test_ldm_pentagon_and_equal_weights():
    assert surgery.ldm_p2_type(PENTAGON).describe() == "#(5) S^3×S^4"
    weights, groups = surgery.cyclic_weights(PENTAGON)
    assert weights == [1, 1, 1, 1, 1]
    doubled = fixture("p2_equal_weights").value
    assert surgery.cyclic_weights(doubled)[0] == [2, 2, 2, 2, 2]
    t = surgery.ldm_p2_type(doubled)
    assert t.describe() == "#(5) S^7×S^10"
    assert betti_of_type(t) == coh.cohomology_of(poly.polytope_of(doubled)).betti_vector()


@pytest.mark.parametrize("weights", [(2, 2, 2), (2, 3, 2), (3, 2, 4)])
def test_ldm_three_directions(weights):
    dirs = [(1, 0), (-1, 2), (-1, -2)]
    cols = [(k * x, k * y) for (x, y), w in zip(dirs, weights) for k in range(1, w + 1)]
    c = Configuration.from_rows([[x for x, _ in cols], [y for _, y in cols]])
    t = surgery.ldm_p2_type(c)
    assert t.kind == "product" and sorted(f.sphere_dim for f in t.factors) == sorted(2 * w - 1 for w in weights)
    assert betti_of_type(t) == coh.cohomology_of(poly.polytope_of(c)).betti_vector()


def test_ldm_rejects_wrong_inputs():
    with pytest.raises(InvalidInput):
        surgery.ldm_p2_type(Configuration.from_rows([[1, 1, -1]]))


def test_diffeo_types_of_builtins():
    assert surgery.diffeo_type(poly.cube(3)).describe() == "S^3×S^3×S^3"
    assert surgery.diffeo_type(poly.simplex(3)).describe() == "S^7"
    assert surgery.diffeo_type(poly.polygon(5)).describe() == "#(5) S^3×S^4"
    assert surgery.diffeo_type(poly.cyclic_dual(4, 6)).describe() == "S^5×S^5"
    assert surgery.diffeo_type(poly.cyclic_dual(4, 7)).describe() == "#(7) S^5×S^6"
    c48 = surgery.diffeo_type(poly.cyclic_dual(4, 8))
    assert c48.conjectural and c48.describe() == "#(16) S^5×S^7 # #(15) S^6×S^6 (cohomology ring only)"
    trunc = surgery.diffeo_type(poly.truncated_cube())
    assert trunc.kind == "unknown" and trunc.cohomology["betti"] == [1, 0, 0, 6, 6, 2, 6, 6, 0, 0, 1]


@pytest.mark.parametrize("name", ["cube", "prism", "pentagon", "hexagon", "book:5", "cyclic_dual:4,7", "simplex:4", "product:pentagon*segment"])
def test_diffeo_type_dimension_and_betti(name):
    p = poly.builtin(name)
    t = surgery.diffeo_type(p)
    assert t.dimension == p.n + p.d
    if t.kind != "unknown":
        assert betti_of_type(t) == coh.cohomology_of(p).betti_vector()


def test_diffeo_type_with_circles():
    c = poly.realize(poly.polygon(5), circles=2)
    t = surgery.diffeo_type(poly.polytope_of(c), c)
    assert t.dimension == 5 + 2 + 2
    assert "T^2" in t.describe()
    assert surgery.diffeo_type(poly.cube(3), circles=1).describe().count("S^") == 4


def test_join_factors():
    assert [f.n for f in surgery.join_factors(poly.cube(3))] == [2, 2, 2]
    assert sorted(f.n for f in surgery.join_factors(poly.builtin("prism"))) == [2, 3]
    assert len(surgery.join_factors(poly.polygon(5))) == 1


def test_p1_type():
    assert surgery.p1_type(Configuration.from_rows([[1, 2, 3, -1, -1]])).describe() == "S^5×S^3"


def test_type_json_has_provenance():
    data = surgery.mcgavran_type(2, 2).to_json()
    assert data["kind"] == "connected_sum" and "McGavran" in data["provenance"]
    assert data["terms"] == [{"count": 5, "a": 3, "b": 4}]


# ---------------------------------------------------------------- torsion builder


def test_torsion_build_circle():
    circle = SimplicialComplex.from_faces([[1, 2], [2, 3], [1, 3]])
    b = surgery.torsion_build(circle, realize_configuration=False)
    assert b.method.startswith("subdivide")
    assert [(c["complex_degree"], c["betti"], c["torsion"]) for c in b.certificates] == [(1, 1, [])]
    degree = b.certificates[0]["cohomology_degree"]
    r = coh.cohomology_of(b.polytope)
    assert any(s.support == b.support and s.betti == 1 for s in r.summands(degree))


def test_torsion_build_edge_is_acyclic():
    b = surgery.torsion_build(SimplicialComplex.from_faces([[1, 2]]), realize_configuration=False)
    assert b.certificates == []
    assert surgery.diffeo_type(b.polytope).kind == "sphere"


def test_torsion_build_two_points():
    b = surgery.torsion_build(SimplicialComplex.from_faces([[1], [2]]))
    assert b.certificates[0]["complex_degree"] == 0
    assert b.configuration is not None
    assert poly.polytope_of(b.configuration).dual_facets == b.polytope.dual_facets


def test_torsion_build_rp2_places_the_torsion():
    rp2 = SimplicialComplex.from_faces(poly.RP2_TRIANGLES)
    b = surgery.torsion_build(rp2, realize_configuration=False)
    assert (b.polytope.n, b.polytope.d, b.dim_x) == (16, 5, 21)
    assert b.support == tuple(range(7, 17))
    assert [(c["torsion"], c["cohomology_degree"]) for c in b.certificates] == [([2], 9)]
    assert b.isomorphism is not None


def test_torsion_build_even_dimension():
    b = surgery.torsion_build(SimplicialComplex.from_faces([[1, 2], [2, 3], [1, 3]]), even=True, realize_configuration=False)
    assert b.dim_x % 2 == 0


def test_torsion_build_rejects_bad_complexes():
    with pytest.raises(InvalidInput):
        surgery.torsion_build(SimplicialComplex((1,), (frozenset({1}),)))
    with pytest.raises(InvalidInput):
        surgery.torsion_build(SimplicialComplex((1, 2, 3), (frozenset({1, 2}),)))

from itertools import combinations, product as cartesian

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadric_links import cohomology as coh
from quadric_links import polytopes as poly
from quadric_links.errors import InvalidInput, RefusedComputation
from quadric_links.homology import mask_of, members_of
from quadric_links.kernel import smith_normal_form

from conftest import cofactor_determinant

SMALL = ["cube", "pentagon", "truncated_cube", "prism", "book:5", "cyclic_dual:4,6", "simplex:3"]


def supports_named(p, mask):
    return frozenset(p.labels[v - 1] for v in members_of(mask))


def exterior_structure(generators, a, b):
    """Structure matrix of the exterior algebra on ``generators`` odd classes, degree a · degree b (in words)."""
    basis = {k: list(combinations(range(generators), k)) for k in range(generators + 1)}
    target = {w: r for r, w in enumerate(basis[a + b])}
    mat = [[0] * (len(basis[a]) * len(basis[b])) for _ in basis[a + b]]
    col = 0
    for x in basis[a]:
        for y in basis[b]:
            if not set(x) & set(y):
                word = x + y
                inversions = sum(1 for s, t in combinations(range(len(word)), 2) if word[s] > word[t])
                mat[target[tuple(sorted(word))]][col] = (-1) ** inversions
            col += 1
    return mat


def invariants(mat):
    if not mat or not mat[0]:
        return ()
    return tuple(x for x in smith_normal_form(mat).diagonal if x)


# ---------------------------------------------------------------- groups


def test_cube_betti_table(cube):
    r = coh.cohomology_of(cube)
    assert r.betti_vector() == [1, 0, 0, 3, 0, 0, 3, 0, 0, 1]
    assert {supports_named(cube, mask_of(s.support)) for s in r.summands(3)} == {
        frozenset({"1", "2", "1'", "2'"}),
        frozenset({"1", "3", "1'", "3'"}),
        frozenset({"2", "3", "2'", "3'"}),
    }
    assert {supports_named(cube, mask_of(s.support)) for s in r.summands(6)} == {
        frozenset({"1", "1'"}),
        frozenset({"2", "2'"}),
        frozenset({"3", "3'"}),
    }
    assert [s.support for s in r.summands(0)] == [tuple(range(1, 7))]
    assert [s.support for s in r.summands(9)] == [()]


def test_truncated_cube_table_and_vertex_cut(cube, truncated_cube):
    direct = coh.cohomology_of(truncated_cube)
    assert direct.dim_x == 10
    assert direct.betti_vector() == [1, 0, 0, 6, 6, 2, 6, 6, 0, 0, 1]
    predicted = coh.vertex_cut_update(coh.cohomology_of(cube))
    assert predicted.groups() == direct.groups()


@pytest.mark.parametrize("name", ["pentagon", "prism", "book:5", "cyclic_dual:4,6", "simplex:3", "truncated_cube"])
def test_vertex_cut_prediction_matches_recomputation(name):
    p = poly.builtin(name)
    facet = sorted(p.dual_facets, key=sorted)[0]
    cut = poly.truncate_face(p, sorted(facet))
    assert coh.vertex_cut_update(coh.cohomology_of(p)).groups() == coh.cohomology_of(cut).groups()


def test_vertex_cut_needs_dimension_two():
    with pytest.raises(InvalidInput):
        coh.vertex_cut_update(coh.cohomology_of(poly.simplex(1)))


def test_homology_side_examples():
    h = coh.homology_of(poly.cyclic_dual(4, 7))
    assert len(h) == 12
    assert {i: g for i, g in h.items() if g != (0, ())} == {0: (1, ()), 5: (7, ()), 6: (7, ()), 11: (1, ())}
    s = coh.homology_of(poly.simplex(3))
    assert {i: g for i, g in s.items() if g != (0, ())} == {0: (1, ()), 7: (1, ())}


@pytest.mark.parametrize("name", SMALL + ["hexagon", "cyclic_dual:4,7", "book:6"])
def test_universal_coefficients_between_the_two_sides(name):
    p = poly.builtin(name)
    assert coh.universal_coefficients_agree(coh.cohomology_of(p), coh.homology_of(p)) == []


@pytest.mark.parametrize("name", SMALL + ["hexagon", "cyclic_dual:4,7", "cyclic_dual:4,8"])
def test_euler_poincare_and_connectivity(name):
    p = poly.builtin(name)
    r = coh.cohomology_of(p)
    assert r.euler_characteristic() == 0
    assert r.poincare_failures() == []
    k = poly.neighbourliness(p) + 1
    h = coh.homology_of(p)
    assert all(h[j] == (0, ()) for j in range(1, min(2 * k, r.dim_x - 1) + 1))
    assert h[2 * k + 1] != (0, ())


def test_cap_on_subset_sweep():
    with pytest.raises(RefusedComputation):
        coh.cohomology_of(poly.cube(3), max_n=5)


def test_report_json_lists_supports(cube):
    data = coh.cohomology_of(cube).to_json()
    assert data["betti"] == [1, 0, 0, 3, 0, 0, 3, 0, 0, 1]
    assert data["degrees"][6]["summands"][0]["support"] in (["1", "1'"], ["2", "2'"], ["3", "3'"])


# ---------------------------------------------------------------- products


def test_cube_nonzero_products_are_the_listed_ones(cube):
    ring = coh.CupRing(cube)
    got = {}
    gens = [g for g in ring.generators() if g.support != ring.full]
    for a, b in combinations(gens, 2):
        if a.degree + b.degree > ring.dim_x:
            continue
        c = ring.product(a, b)
        if not c.is_zero():
            assert c.coordinates in ((1,), (-1,))
            got[frozenset({supports_named(cube, a.support), supports_named(cube, b.support)})] = supports_named(cube, c.support)
    for g in gens:
        if 2 * g.degree <= ring.dim_x:
            assert ring.product(g, g).is_zero()
    c12, c13, c23 = (frozenset({"1", "2", "1'", "2'"}), frozenset({"1", "3", "1'", "3'"}), frozenset({"2", "3", "2'", "3'"}))
    c1, c2, c3 = frozenset({"1", "1'"}), frozenset({"2", "2'"}), frozenset({"3", "3'"})
    top = frozenset()
    assert got == {
        frozenset({c12, c3}): top,
        frozenset({c13, c2}): top,
        frozenset({c23, c1}): top,
        frozenset({c12, c13}): c1,
        frozenset({c12, c23}): c2,
        frozenset({c13, c23}): c3,
    }


def test_cube_ring_is_an_exterior_algebra(cube):
    ring = coh.CupRing(cube)
    _, mat, sa, sb = ring.structure_constants(3, 3)
    ours = coh._tensor_invariants(mat, sa, sb)
    theirs = coh._tensor_invariants(exterior_structure(3, 1, 1), 3, 3)
    assert ours == theirs
    _, mat, sa, sb = ring.structure_constants(3, 6)
    assert coh._tensor_invariants(mat, sa, sb) == coh._tensor_invariants(exterior_structure(3, 1, 2), 3, 3)


def test_predicted_products_after_a_vertex_cut(cube, truncated_cube):
    low, high = 3, 7
    predicted = coh.predicted_multiplication_invariants(coh.CupRing(cube), low, high)
    actual = coh.multiplication_invariants(coh.CupRing(truncated_cube), low, high)
    assert predicted == actual


def ring_pairs(name, limit=400):
    ring = coh.CupRing(poly.builtin(name))
    gens = [g for g in ring.generators() if g.support != ring.full]
    pairs = [(a, b) for a, b in cartesian(gens, gens) if a.degree + b.degree <= ring.dim_x]
    return ring, pairs[:limit]


@pytest.mark.parametrize("name", ["cube", "pentagon", "truncated_cube", "book:5", "prism"])
def test_graded_commutativity(name):
    ring, pairs = ring_pairs(name)
    for a, b in pairs:
        ab, ba = ring.product(a, b), ring.product(b, a)
        sign = (-1) ** (a.degree * b.degree)
        assert ab.support == ba.support
        assert ab.coordinates == ring.make_class(ba.support, ba.degree, [sign * x for x in ba.coordinates]).coordinates


@pytest.mark.parametrize("name", ["cube", "pentagon", "truncated_cube", "book:5"])
def test_apex_independence(name):
    ring, pairs = ring_pairs(name)
    for a, b in pairs:
        if a.complement & b.complement or a.support == ring.full or b.support == ring.full:
            continue
        base = ring.product(a, b)
        for x in members_of(a.complement):
            for y in members_of(b.complement):
                assert ring.product(a, b, apexes=(x, y)) == base


@pytest.mark.parametrize("name", ["truncated_cube", "hexagon"])
def test_bilinearity(name):
    ring = coh.CupRing(poly.builtin(name))
    gens = [g for g in ring.generators() if g.support != ring.full and 0 < g.degree < ring.dim_x]
    by_summand = {}
    for g in gens:
        by_summand.setdefault((g.support, g.degree), []).append(g)
    for (support, degree), group in by_summand.items():
        if len(group) < 2:
            continue
        x, y = group[0], group[1]
        total = ring.make_class(support, degree, [s + t for s, t in zip(x.coordinates, y.coordinates)])
        for z in gens:
            if degree + z.degree > ring.dim_x:
                continue
            left = ring.product(total, z)
            parts = ring.product(x, z), ring.product(y, z)
            summed = ring.make_class(left.support, left.degree, [s + t for s, t in zip(*(c.coordinates for c in parts))]) if left.coordinates else left
            assert left == summed


@pytest.mark.parametrize("name", ["cube", "pentagon", "truncated_cube", "hexagon", "book:5", "cyclic_dual:4,6"])
def test_top_pairing_is_unimodular(name):
    ring = coh.CupRing(poly.builtin(name))
    for i in range(1, ring.dim_x):
        for support in range(ring.full):
            comp = ring.full ^ support
            if not (ring.in_delta(support) and ring.in_delta(comp)):
                continue
            left = [g for g in ring.generators(i) if g.support == support and ring._is_free(g)]
            right = [g for g in ring.generators(ring.dim_x - i) if g.support == comp and ring._is_free(g)]
            assert len(left) == len(right)
            if not left:
                continue
            mat = [[ring.product(a, b).coordinates[0] for b in right] for a in left]
            assert abs(cofactor_determinant(mat)) == 1


def test_unit_and_top(cube):
    ring = coh.CupRing(cube)
    for g in ring.generators():
        assert ring.product(ring.unit(), g) == g
    assert ring.top().degree == 9 and ring.top().support == 0


def test_product_cap():
    with pytest.raises(RefusedComputation):
        coh.CupRing(poly.builtin("rp2_truncation"))


def test_generator_names(cube):
    ring = coh.CupRing(cube)
    assert ring.name(ring.unit()) == "1"
    assert ring.name(ring.generators(6)[0]).startswith("psi({")


# ---------------------------------------------------------------- signs


def test_sign_epsilon_examples():
    d, n, k_prime = 3, 6, 1
    k_big = 1 - d + k_prime - 1
    assert coh.sign_epsilon([], [2], k_prime, d, n) == 1
    assert coh.sign_epsilon([1], [], k_prime, d, n) == 1
    assert coh.sign_epsilon([1], [2], k_prime, d, n) == (-1) ** (d + 1 + n + k_big)
    assert coh.sign_epsilon([2], [1], k_prime, d, n) == -((-1) ** (d + 1 + n + k_big))
    with pytest.raises(InvalidInput):
        coh.sign_epsilon([1, 2], [2], k_prime, d, n)


def test_sign_epsilon_permutation_sign():
    # Ī = {3, 1}, J̄ = {4, 2}: 1 3 2 4 needs one swap
    base = coh.sign_epsilon([1], [2], 0, 2, 5)
    assert coh.sign_epsilon([1, 3], [2, 4], 0, 2, 5) == -((-1) ** ((2 - 2 + 0 - 1) * 2 + 2 + 1 + 5))
    assert base in (1, -1)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 6), st.integers(0, 4), st.integers(0, 4), st.data())
def test_sign_relation_matches_graded_commutativity(d, k, k_prime, data):
    n = data.draw(st.integers(d + 2, d + 7))
    labels = list(range(1, n + 1))
    chosen = data.draw(st.permutations(labels))
    split = data.draw(st.integers(1, n - 1))
    stop = data.draw(st.integers(split + 1, n))
    assert coh.commutativity_sign_check(chosen[:split], chosen[split:stop], k, k_prime, d, n)


# ---------------------------------------------------------------- classification and Künneth


def test_classify_cube_with_cycle_witness(cube):
    out = coh.classify_ring(cube)
    assert out["connected_sum_type"] is False and out["criteria_agree"]
    w = out["witness"]
    assert len(w["cycle"]) == 4
    assert w["product"] != "0" and w["product_support"]


@pytest.mark.parametrize("l", [3, 4, 5, 6])
def test_classify_books(l):
    out = coh.classify_ring(poly.book(l))
    assert out["connected_sum_type"] is True and out["criteria_agree"]
    assert out["truncated_simplex"] == l - 3


def test_classify_cyclic_dual_4_8():
    out = coh.classify_ring(poly.cyclic_dual(4, 8))
    assert out["connected_sum_type"] and out["ring_only"]
    assert out["shape"] == "#(16) S^5×S^7 # #(15) S^6×S^6"


def test_classify_pentagon_by_products():
    out = coh.classify_ring(poly.polygon(5))
    assert out["connected_sum_type"] is True and out["shape"] == "#(5) S^3×S^4"


def test_connected_sum_from_betti():
    assert coh.connected_sum_from_betti([1, 0, 0, 0, 0, 7, 7, 0, 0, 0, 0, 1]) == [(7, 5, 6)]


def test_kunneth_with_torus():
    s3 = coh.cohomology_of(poly.simplex(1)).groups()
    assert coh.kunneth_with_torus(s3, 0) == s3
    assert [b for _, (b, _) in sorted(coh.kunneth_with_torus(s3, 1).items())] == [1, 1, 0, 1, 1]
    s5 = coh.cohomology_of(poly.simplex(2)).groups()
    assert [b for _, (b, _) in sorted(coh.kunneth_with_torus(s5, 2).items())] == [1, 2, 1, 0, 0, 1, 2, 1]


def test_kunneth_product_with_torsion():
    moore = {0: (1, ()), 1: (0, ()), 2: (0, (2,))}
    out = coh.kunneth_product(moore, moore)
    assert out[2] == (0, (2, 2)) and out[3] == (0, (2,)) and out[4] == (0, (2,))
    assert coh.primary_torsion([6, 4]) == (2, 3, 4)


@pytest.mark.parametrize("first,second", [("simplex:1", "simplex:2"), ("pentagon", "simplex:1"), ("square", "simplex:2")])
def test_kunneth_against_product_polytopes(first, second):
    a, b = poly.builtin(first), poly.builtin(second)
    expect = coh.kunneth_product(coh.cohomology_of(a).groups(), coh.cohomology_of(b).groups())
    got = coh.cohomology_of(poly.product(a, b)).groups()
    assert {i: g for i, g in got.items() if g != (0, ())} == {i: g for i, g in expect.items() if g != (0, ())}

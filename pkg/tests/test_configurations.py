from itertools import combinations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from quadric_links import polytopes as poly
from quadric_links.configurations import (
    Configuration,
    add_circles,
    affine_extension,
    check_admissible,
    face_condition,
    indispensable_points,
    link_descriptor,
    lvm_report,
    product,
    split_circles,
    suspend_for_complex_structure,
)
from quadric_links.errors import InvalidInput

PENTAGON = [(2, 0), (1, 2), (-2, 1), (-2, -1), (1, -2)]


def planar(points):
    return Configuration.from_rows([[x for x, _ in points], [y for _, y in points]])


def zero_configuration(n):
    return Configuration(0, tuple(() for _ in range(n)))


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def zero_in_planar_hull(points):
    """0 ∈ conv(points) in the plane via orientation tests only."""
    pts = list(points)
    if any(p == (0, 0) for p in pts):
        return True
    for a, b in combinations(pts, 2):
        if cross(a, b) == 0 and a[0] * b[0] + a[1] * b[1] < 0:
            return True
    for a, b, c in combinations(pts, 3):
        s1, s2, s3 = cross(a, b), cross(b, c), cross(c, a)
        if (s1 > 0 and s2 > 0 and s3 > 0) or (s1 < 0 and s2 < 0 and s3 < 0):
            return True
    return False


# ---------------------------------------------------------------- admissibility


def test_one_dimensional_with_an_indispensable_point():
    rep = check_admissible(Configuration.from_rows([[1, 1, -1]]))
    assert rep.admissible
    assert rep.indispensable == (3,) and rep.k == 1


def test_zero_column_violates_weak_hyperbolicity():
    rep = check_admissible(Configuration.from_rows([[0, 1, -1]]))
    assert not rep.admissible
    assert rep.violator == (1,)


def test_square_approximants_of_fifth_roots_are_rejected():
    # (-1,1) and (1,-1) are antipodal, so the segment between them holds 0
    rep = check_admissible(planar([(1, 0), (0, 1), (-1, 1), (-1, -1), (1, -1)]))
    assert not rep.admissible
    assert rep.violator == (3, 5)


def test_pentagon_configuration_is_admissible():
    rep = check_admissible(planar(PENTAGON))
    assert rep.admissible and rep.k == 0


def test_certificates_verify_by_substitution():
    c = planar(PENTAGON)
    rep = check_admissible(c)
    assert rep.siegel.verify(c.columns, 2)
    bad = planar([(1, 0), (0, 1), (-1, 1), (-1, -1), (1, -1)])
    rep = check_admissible(bad)
    assert rep.violator_witness.verify([bad.columns[i - 1] for i in rep.violator], 2)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=7))
def test_one_dimensional_sign_counting(entries):
    rep = check_admissible(Configuration.from_rows([entries]))
    pos = [i + 1 for i, x in enumerate(entries) if x > 0]
    neg = [i + 1 for i, x in enumerate(entries) if x < 0]
    assert rep.admissible == (0 not in entries and bool(pos) and bool(neg))
    if rep.admissible:
        expect = tuple(sorted((pos if len(pos) == 1 else []) + (neg if len(neg) == 1 else [])))
        assert rep.indispensable == expect


planar_points = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=6)


@settings(max_examples=200, deadline=None)
@given(planar_points)
def test_planar_admissibility_against_orientation_oracle(points):
    rep = check_admissible(planar(points))
    siegel = zero_in_planar_hull(points)
    weak = not any(zero_in_planar_hull([points[i] for i in s]) for r in (1, 2) for s in combinations(range(len(points)), r))
    assert rep.admissible == (siegel and weak)
    if rep.admissible:
        expect = tuple(i + 1 for i in range(len(points)) if not zero_in_planar_hull(points[:i] + points[i + 1 :]))
        assert rep.indispensable == expect


@settings(max_examples=100, deadline=None)
@given(planar_points)
def test_face_condition_and_facet_count(points):
    c = planar(points)
    rep = check_admissible(c)
    assume(rep.admissible)
    for i in range(1, c.n + 1):
        assert face_condition(c, [i]) == (i not in rep.indispensable)
    for size in range(c.n + 1):
        for subset in combinations(range(1, c.n + 1), size):
            rest = [points[j - 1] for j in range(1, c.n + 1) if j not in subset]
            assert face_condition(c, subset) == zero_in_planar_hull(rest)
    if c.n - c.p - 1 >= 1 and c.n - rep.k >= c.n - c.p:
        assert poly.polytope_of(c).n == c.n - rep.k


# ---------------------------------------------------------------- face condition


def test_face_condition_for_p_zero():
    c = zero_configuration(4)
    for size in range(4):
        for subset in combinations(range(1, 5), size):
            assert face_condition(c, subset)


def test_face_condition_full_set_is_never_a_face():
    assert not face_condition(planar(PENTAGON), [1, 2, 3, 4, 5])


def test_face_condition_pentagon_pair():
    c = planar(PENTAGON)
    assert face_condition(c, [1, 2]) == zero_in_planar_hull(PENTAGON[2:])


def test_face_condition_rejects_bad_labels():
    with pytest.raises(InvalidInput):
        face_condition(planar(PENTAGON), [7])


# ---------------------------------------------------------------- circles and products


def test_split_circles_of_the_bridging_construction():
    a = planar(PENTAGON)
    c = add_circles(a, 1)
    b, k = split_circles(c)
    assert k == 1
    assert poly.polytope_of(b).dual_facets == poly.polytope_of(a).dual_facets


def test_split_circles_identity_without_indispensable_points():
    a = planar(PENTAGON)
    b, k = split_circles(a)
    assert k == 0 and b == a


def test_split_circles_by_the_pivot_formula():
    b, k = split_circles(Configuration.from_rows([[1, 1, -1]]))
    assert k == 1 and b.p == 0 and b.n == 2


@settings(max_examples=80, deadline=None)
@given(planar_points)
def test_split_circles_preserves_the_polytope(points):
    c = planar(points)
    rep = check_admissible(c)
    assume(rep.admissible and c.n - c.p - 1 >= 1)
    b, k = split_circles(c)
    assert k == rep.k
    assert indispensable_points(b) == ()
    if b.n - b.p - 1 >= 1:
        assert poly.polytope_of(b).named_facets() == poly.polytope_of(c).named_facets()


def test_product_of_two_zero_configurations():
    out = product(zero_configuration(2), zero_configuration(2))
    assert out.p == 1 and out.n == 4
    assert check_admissible(out).admissible


def test_product_with_a_point_adds_only_the_bridging_row():
    out = product(planar(PENTAGON), zero_configuration(1))
    assert out.p == 3 and out.n == 6
    assert check_admissible(out).indispensable == (6,)


def test_iterated_product_of_segments_is_the_cube():
    seg = zero_configuration(2)
    c = product(product(seg, seg), seg)
    assert (c.n, c.p) == (6, 2)
    got = poly.polytope_of(c)
    assert poly.combinatorially_equal(got, poly.builtin("cube"), up_to_relabeling=True) is not None


def test_product_polytope_is_the_product_of_polytopes():
    a, b = planar(PENTAGON), Configuration.from_rows([[-2, -1, 1, 2]])
    joined = poly.polytope_of(product(a, b))
    assert joined.dual_facets == poly.product(poly.polytope_of(a), poly.polytope_of(b)).dual_facets


# ---------------------------------------------------------------- complex structures


def test_suspension_for_odd_p():
    out = suspend_for_complex_structure(Configuration.from_rows([[1, 1, -1]]))
    assert (out.n, out.p) == (4, 2)


def test_suspension_for_even_p():
    out = suspend_for_complex_structure(zero_configuration(3))
    assert (out.n, out.p) == (5, 2)


def test_suspension_twice_keeps_p_even():
    once = suspend_for_complex_structure(Configuration.from_rows([[1, 1, -1]]))
    twice = suspend_for_complex_structure(once)
    assert once.p % 2 == 0 and twice.p % 2 == 0 and twice.p == once.p + 2


@pytest.mark.parametrize("l", [1, 2, 3])
def test_affine_extension_adds_indispensable_points(l):
    out = affine_extension(planar(PENTAGON), l)
    rep = lvm_report(out)
    assert rep["indispensable_count"] == 2 * l
    assert rep["affine_criterion"] == (2 * l >= out.p // 2 + 1)


def test_lvm_projective_case():
    rep = lvm_report(zero_configuration(3))
    assert rep["m"] == 0 and "note" in rep


def test_lvm_pentagon_fails_the_affine_criterion():
    rep = lvm_report(planar(PENTAGON))
    assert rep["m"] == 1 and rep["indispensable_count"] == 0 and not rep["affine_criterion"]


def test_lvm_rejects_odd_p():
    with pytest.raises(InvalidInput):
        lvm_report(Configuration.from_rows([[1, 1, -1]]))


def test_link_descriptor_dimensions():
    desc = link_descriptor(planar(PENTAGON), neighbourliness=0)
    assert desc.dim_x == 7 and desc.d == 2 and desc.dim_x == desc.n + desc.d and desc.connectivity == 2


def test_configuration_json_round_trip():
    c = Configuration.from_rows([["1/2", -1, 3], [0, "2/3", -1]])
    assert Configuration.from_json(c.to_json()) == c
    assert c.to_json()["columns"][0] == ["1/2", "0"]

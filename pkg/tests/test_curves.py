"""Curve kernel: canonical forms, intersections, cuts, enumeration."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from curvelab import curves as cv
from curvelab.errors import (EmptyAfterReduction, FormatError,
                             InvalidDescriptor, MixedTriangulations,
                             NotAdmissible)
from curvelab.surfaces import SurfaceSig, reference_triangulation

TORUS = reference_triangulation(SurfaceSig(1, 1))


def slope(p, q):
    """The (p, q) curve on the torus as a canonical class."""
    return cv.canonicalize((abs(q), abs(p), abs(p + q)), TORUS)


def coprime_slopes(bound):
    """Primitive (p, q) with q > 0, plus (1, 0), up to |p|, q <= bound."""
    out = [(1, 0)]
    for q in range(1, bound + 1):
        for p in range(-bound, bound + 1):
            if math.gcd(p, q) == 1:
                out.append((p, q))
    return out


def test_canonicalize_rejects_bad_vectors():
    """Length, parity and sign violations raise the right errors"""
    with pytest.raises(InvalidDescriptor):
        cv.canonicalize((1, 1), TORUS)
    with pytest.raises(NotAdmissible):
        cv.canonicalize((1, 0, 0), TORUS)
    with pytest.raises(NotAdmissible):
        cv.canonicalize((-1, 1, 0), TORUS)
    with pytest.raises(EmptyAfterReduction):
        cv.canonicalize((0, 0, 0), TORUS)


def test_slope_sign_is_immaterial():
    """(p, q) and (-p, -q) canonicalize to the same class"""
    for p, q in coprime_slopes(3):
        assert slope(p, q) == slope(-p, -q)


def test_intersection_matches_slope_determinant():
    """i((p,q), (r,s)) = |ps - qr| across all slope pairs up to 3"""
    slopes = coprime_slopes(3)
    classes = {pq: slope(*pq) for pq in slopes}
    for i, (p, q) in enumerate(slopes):
        for (r, s) in slopes[i:]:
            want = abs(p * s - q * r)
            assert cv.intersection_number(classes[(p, q)],
                                          classes[(r, s)]) == want


def test_intersection_requires_shared_triangulation():
    """Curves on different surfaces cannot be intersected"""
    c = cv.enumerate_curves(SurfaceSig(0, 4), 1)[0]
    with pytest.raises(MixedTriangulations):
        cv.intersection_number(slope(1, 0), c)


def test_parallel_components_are_merged():
    """A doubled slope keeps one component and reports the merge"""
    c = cv.canonicalize((0, 2, 2), TORUS)
    assert c.n_components == 1
    assert c.report.parallel == 1
    assert c == slope(1, 0)


def test_enumerate_torus_bound_one():
    """Exactly the three Farey neighbours 0/1, 1/0, 1/1 fit in weight 1"""
    curves = cv.enumerate_curves(SurfaceSig(1, 1), 1)
    assert len(curves) == 3
    assert {c.weights for c in curves} == {(0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_enumerate_torus_matches_farey_count():
    """Curve counts at weight bound k agree with the coprime-slope count"""
    for bound in (1, 2, 3, 4):
        curves = cv.enumerate_curves(SurfaceSig(1, 1), bound)
        wanted = {pq for pq in coprime_slopes(2 * bound)
                  if max(abs(pq[1]), abs(pq[0]), abs(pq[0] + pq[1]))
                  <= bound}
        assert len(curves) == len(wanted)


def test_enumerate_orders_deterministically():
    """Two runs of the enumerator list the same classes in the same order"""
    a = cv.enumerate_curves(SurfaceSig(0, 5), 2)
    b = cv.enumerate_curves(SurfaceSig(0, 5), 2)
    assert [c.weights for c in a] == [c.weights for c in b]


def test_no_separating_curves_on_four_holed_sphere():
    """Both sides of any S_{0,4} curve are pants, so the filter is empty"""
    assert cv.enumerate_curves(SurfaceSig(0, 4), 2, which="separating") == []


def test_cut_four_holed_sphere_into_pants():
    """Every essential S_{0,4} curve splits it into two pants"""
    for c in cv.enumerate_curves(SurfaceSig(0, 4), 2):
        cut = cv.cut_along(c)
        assert sorted(p.sig.key for p in cut.pieces) == ["0,3", "0,3"]
        assert not cv.is_separating_multicurve(c)


def test_cut_five_holed_sphere():
    """An S_{0,5} curve cuts off a pants and a four-holed sphere"""
    for c in cv.enumerate_curves(SurfaceSig(0, 5), 1):
        cut = cv.cut_along(c)
        assert sorted(p.sig.key for p in cut.pieces) == ["0,3", "0,4"]


def test_cut_complexity_additive():
    """Piece complexities of a single-curve cut sum to xi(S) - 1"""
    for sig in (SurfaceSig(0, 4), SurfaceSig(0, 5), SurfaceSig(1, 2)):
        for c in cv.enumerate_curves(sig, 1):
            pieces = cv.cut_along(c).pieces
            total = sum(p.sig.complexity() for p in pieces)
            assert total == sig.complexity() - 1


def test_cut_euler_conservation():
    """Piece Euler characteristics always sum to chi(S)"""
    for sig in (SurfaceSig(1, 1), SurfaceSig(1, 2), SurfaceSig(0, 5)):
        for c in cv.enumerate_multicurves(sig, 1):
            pieces = cv.cut_along(c).pieces
            assert sum(p.chi for p in pieces) == sig.euler()


def test_locate_in_cut_places_disjoint_curves():
    """A curve disjoint from the cut lands in a piece; a crossing one in none"""
    c = cv.enumerate_curves(SurfaceSig(0, 4), 1)[0]
    cut = cv.cut_along(c)
    hits = misses = 0
    for x in cv.enumerate_curves(SurfaceSig(0, 4), 2):
        piece = cv.locate_in_cut(cut, x)
        if cv.intersection_number(c, x) == 0:
            assert piece is not None
            hits += 1
        else:
            assert piece is None
            misses += 1
    assert hits >= 1 and misses >= 1


def test_component_curves_roundtrip():
    """Splitting a multicurve into components preserves each class"""
    tri = reference_triangulation(SurfaceSig(0, 5))
    for c in cv.enumerate_multicurves(SurfaceSig(0, 5), 1):
        for comp in c.component_curves():
            again = cv.canonicalize(comp.weights, tri)
            assert again == comp


def test_curve_file_roundtrip(tmp_path):
    """Writing and reading a curve file reproduces the classes"""
    curves = cv.enumerate_curves(SurfaceSig(0, 5), 1)
    path = tmp_path / "ball.curves"
    cv.write_curve_file(path, curves)
    assert cv.read_curve_file(path) == curves


def test_curve_file_rejects_garbage(tmp_path):
    """Missing fields and foreign versions raise FormatError"""
    path = tmp_path / "bad.curves"
    path.write_text("surface=1,1 w=[1,1,0]\n")
    with pytest.raises(FormatError):
        cv.read_curve_file(path)
    path.write_text("surface=1,1 tri=elsewhere-9 w=[1,1,0]\n")
    with pytest.raises(FormatError):
        cv.read_curve_file(path)


@st.composite
def torus_vectors(draw):
    """Admissible torus weight vectors built from a slope and multiplicity"""
    p = draw(st.integers(min_value=-4, max_value=4))
    q = draw(st.integers(min_value=-4, max_value=4))
    k = draw(st.integers(min_value=1, max_value=3))
    if (p, q) == (0, 0):
        p = 1
    g = math.gcd(p, q)
    p, q = p // g, q // g
    return tuple(k * w for w in (abs(q), abs(p), abs(p + q)))


@given(torus_vectors())
@settings(max_examples=60, deadline=None)
def test_canonicalize_idempotent(vec):
    """Re-canonicalizing a canonical class is the identity"""
    c = cv.canonicalize(vec, TORUS)
    again = cv.canonicalize(c.weights, TORUS)
    assert again == c
    assert again.weights == c.weights


@given(torus_vectors(), torus_vectors())
@settings(max_examples=60, deadline=None)
def test_intersection_symmetric(va, vb):
    """i(a, b) = i(b, a) on generated torus classes"""
    a = cv.canonicalize(va, TORUS)
    b = cv.canonicalize(vb, TORUS)
    assert cv.intersection_number(a, b) == cv.intersection_number(b, a)

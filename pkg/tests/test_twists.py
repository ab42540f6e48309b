"""Dehn twists, twist words, and point pushes."""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from curvelab import curves as cv
from curvelab import twists as tw
from curvelab.errors import (FormatError, NotSimpleLoop, SurfaceMismatch,
                             UnsupportedSurface)
from curvelab.surfaces import SurfaceSig, reference_triangulation

TORUS = reference_triangulation(SurfaceSig(1, 1))


def slope(p, q):
    """The (p, q) curve on the torus as a canonical class."""
    return cv.canonicalize((abs(q), abs(p), abs(p + q)), TORUS)


def test_twist_matches_torus_matrix_action():
    """T^n along (r,s) sends (p,q) to (p + n*det*r, q + n*det*s)"""
    pairs = [((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (1, -1)),
             ((2, 1), (1, 2)), ((1, 2), (3, 2)), ((2, -3), (1, 1))]
    for (p, q), (r, s) in pairs:
        word = tw.twist_word(TORUS, [("g", slope(r, s), 1)])
        det = p * s - q * r
        for n in (-2, -1, 1, 2, 3):
            got = tw.apply_twist(word.power(n), slope(p, q))
            assert got == slope(p + n * det * r, q + n * det * s)


def test_twist_intersection_growth_identity():
    """i(T_b^n(a), a) = |n| * i(a, b)^2 on sampled pairs"""
    rng = random.Random(11)
    for sig, bound in ((SurfaceSig(1, 1), 3), (SurfaceSig(1, 2), 2)):
        tri = reference_triangulation(sig)
        curves = cv.enumerate_curves(sig, bound)
        for _ in range(8):
            a, b = rng.choice(curves), rng.choice(curves)
            i_ab = cv.intersection_number(a, b)
            word = tw.twist_word(tri, [("b", b, 1)])
            for n in (-2, 1, 3):
                image = tw.apply_twist(word.power(n), a)
                assert cv.intersection_number(image, a) == abs(n) * i_ab ** 2


def test_inverse_word_undoes_the_twist():
    """w^-1 after w is the identity on every small curve"""
    sig = SurfaceSig(0, 5)
    tri = reference_triangulation(sig)
    curves = cv.enumerate_curves(sig, 1)
    word = tw.twist_word(tri, [("x", curves[0], 2), ("y", curves[3], -1)])
    for a in curves:
        assert tw.apply_twist(word.inverse(), tw.apply_twist(word, a)) == a


def test_twists_preserve_intersection_numbers():
    """A mapping class never changes i(a, b)"""
    sig = SurfaceSig(0, 5)
    tri = reference_triangulation(sig)
    curves = cv.enumerate_curves(sig, 1)
    word = tw.twist_word(tri, [("x", curves[1], 1), ("y", curves[4], 2)])
    rng = random.Random(5)
    for _ in range(6):
        a, b = rng.choice(curves), rng.choice(curves)
        assert (cv.intersection_number(tw.apply_twist(word, a),
                                       tw.apply_twist(word, b))
                == cv.intersection_number(a, b))


def test_point_push_trivial_on_once_punctured_torus():
    """Both push-offs of any torus loop agree, so pushes act trivially"""
    for loop in range(TORUS.n_edges):
        word = tw.point_push(TORUS, loop)
        plus, minus = word.letters[0].pushes
        assert plus == minus
        for p, q in ((1, 0), (0, 1), (2, 1)):
            assert tw.apply_twist(word, slope(p, q)) == slope(p, q)


def test_point_pushes_distinct_on_genus_two():
    """Every loop on the punctured genus-two surface has two push-offs"""
    tri = reference_triangulation(SurfaceSig(2, 1))
    for loop in range(tri.n_edges):
        word = tw.point_push(tri, loop)
        plus, minus = word.letters[0].pushes
        assert plus is not None and minus is not None
        assert plus != minus


def test_word_format_round_trip():
    """format then parse_word reproduces the letters exactly"""
    g = slope(1, 1)
    word = tw.twist_word(TORUS, [("g", g, 2), ("g", g, -1)])
    text = word.format()
    assert text == "T[g]^2 T[g]^-1"
    back = tw.parse_word(text, TORUS, curves={"g": g})
    assert back.format() == text
    tri = reference_triangulation(SurfaceSig(2, 1))
    push = tw.point_push(tri, 0, name="e0")
    again = tw.parse_word(push.format(), tri, loops={"e0": 0})
    assert again.format() == push.format()


def test_parse_rejects_malformed_words():
    """Bad letters, unknown ids and zero exponents all raise"""
    g = slope(1, 0)
    with pytest.raises(FormatError):
        tw.parse_word("T[g]", TORUS, curves={"g": g})
    with pytest.raises(FormatError):
        tw.parse_word("T[h]^1", TORUS, curves={"g": g})
    with pytest.raises(FormatError):
        tw.parse_word("T[g]^0", TORUS, curves={"g": g})
    with pytest.raises(FormatError):
        tw.parse_word("P[e9]^1", TORUS, loops={})


def test_word_application_checks_the_surface():
    """Applying a torus word to a four-holed-sphere curve raises"""
    sig = SurfaceSig(0, 4)
    other = cv.enumerate_curves(sig, 1)[0]
    word = tw.twist_word(TORUS, [("g", slope(0, 1), 1)])
    with pytest.raises(SurfaceMismatch):
        tw.apply_twist(word, other)


def test_point_push_rejects_bad_loops():
    """Out-of-range loops and multi-vertex complexes both raise"""
    tri = reference_triangulation(SurfaceSig(2, 1))
    with pytest.raises(NotSimpleLoop):
        tw.point_push(tri, tri.n_edges + 3)
    with pytest.raises(UnsupportedSurface):
        tw.point_push(reference_triangulation(SurfaceSig(0, 5)), 0)


@st.composite
def torus_slopes(draw):
    """A primitive slope pair with small entries."""
    p = draw(st.integers(min_value=-3, max_value=3))
    q = draw(st.integers(min_value=-3, max_value=3))
    if p == q == 0 or math.gcd(p, q) != 1:
        p, q = 1, 0
    return p, q


@settings(max_examples=25, deadline=None)
@given(torus_slopes(), torus_slopes(), st.integers(min_value=-2, max_value=2))
def test_twist_then_inverse_is_identity(pq, rs, n):
    """T^n then T^-n fixes every slope"""
    if n == 0:
        return
    word = tw.twist_word(TORUS, [("g", slope(*rs), n)])
    a = slope(*pq)
    assert tw.apply_twist(word.inverse(), tw.apply_twist(word, a)) == a

"""
Mapping classes as words in Dehn twists and point pushes.

A word is an ordered sequence of letters, each a twist ``T[id]^n`` along
a stored single curve or a point push ``P[id]^n`` along a based loop;
composition reads right-to-left, so the rightmost letter acts first.

A single twist power acts on normal coordinates by surgery: put the
curve and the twisting curve in minimal position, lay down |n| * i(c, g)
parallel copies of the twisting curve, and resolve every crossing with
one fixed chirality.  Resolving with the same turn at each crossing is
exactly what makes the result the twist image; the two chiralities give
the two twist directions.  The construction is validated against the
torus slope action, where the twist matrices are known exactly.

Point pushing moves the distinguished puncture around a based loop.  On
the one-vertex reference complexes a based loop is an edge of the
complex, always embedded; its two push-offs are the boundary circles of
a regular neighborhood of the loop, read off combinatorially from the
cyclic order of edge ends around the vertex.  The push is the twist
along one push-off composed with the inverse twist along the other,
which is why pushes act trivially downstairs once the puncture is
filled in.
"""

import re
from functools import lru_cache

from .curves import (NormalMulticurve, _finish_system, canonicalize,
                     intersection_number)
from .engine import Arrangement, rebuild_from_cycles
from .errors import (EmptyAfterReduction, FormatError, NotSimpleLoop,
                     SurfaceMismatch, UnsupportedSurface)
from .surfaces import SurfaceSig, reference_triangulation, seed_data

__all__ = [
    "TwistLetter", "TwistWord", "apply_twist", "point_push",
    "pseudo_anosov_seed", "seed_curves", "twist_word", "parse_word",
]

_LETTER = re.compile(r"^([TP])\[([^\[\]\s]+)\]\^(-?\d+)$")


class TwistLetter:
    """One factor of a word: a twist along a stored curve, or a push.

    Twist letters carry the twisting curve; push letters carry the based
    loop's two push-off classes (either may be absent when the push-off
    dies under canonicalization, leaving that factor trivial).
    """

    def __init__(self, kind, name, exponent, curve=None, pushes=None):
        if kind not in ("T", "P"):
            raise FormatError("unknown letter kind %r" % kind)
        if exponent == 0:
            raise FormatError("letter %s[%s] has exponent 0" % (kind, name))
        if kind == "T":
            if curve is None or curve.n_components != 1:
                raise FormatError(
                    "twist letters need a single twisting curve")
        self.kind = kind
        self.name = str(name)
        self.exponent = int(exponent)
        self.curve = curve
        self.pushes = pushes

    def inverse(self):
        return TwistLetter(self.kind, self.name, -self.exponent,
                           self.curve, self.pushes)

    def format(self):
        return "%s[%s]^%d" % (self.kind, self.name, self.exponent)

    def __repr__(self):
        return "TwistLetter(%s)" % self.format()


class TwistWord:
    """An ordered product of letters; the rightmost letter acts first."""

    def __init__(self, tri, letters=()):
        self.tri = tri
        self.sig = tri.sig
        self.letters = tuple(letters)
        for letter in self.letters:
            if letter.kind == "T" and letter.curve.tri is not tri:
                raise SurfaceMismatch(
                    "letter %s twists a curve on %s, word is on %s"
                    % (letter.format(), letter.curve.sig, self.sig))

    def __len__(self):
        return len(self.letters)

    def inverse(self):
        return TwistWord(self.tri,
                         [l.inverse() for l in reversed(self.letters)])

    def then(self, other):
        """The composition acting as ``self`` after ``other``."""
        if other.tri is not self.tri:
            raise SurfaceMismatch("cannot compose words across surfaces")
        return TwistWord(self.tri, self.letters + other.letters)

    def power(self, n):
        if n == 0:
            return TwistWord(self.tri)
        base = self if n > 0 else self.inverse()
        return TwistWord(self.tri, base.letters * abs(n))

    def format(self):
        return " ".join(l.format() for l in self.letters)

    def __repr__(self):
        return "TwistWord(%s: %s)" % (self.sig, self.format() or "id")


def twist_word(tri, factors):
    """Word from ``(name, curve, exponent)`` triples, leftmost first."""
    return TwistWord(tri, [TwistLetter("T", name, exp, curve=c)
                           for name, c, exp in factors])


def parse_word(text, tri, curves=None, loops=None):
    """Read a word from its file form.

    ``curves`` maps twist ids to stored classes and ``loops`` maps push
    ids to based-loop edges; ids absent from the tables are errors.
    """
    letters = []
    for tok in text.split():
        m = _LETTER.match(tok)
        if m is None:
            raise FormatError("unreadable word letter %r" % tok)
        kind, name, exp = m.group(1), m.group(2), int(m.group(3))
        if kind == "T":
            if not curves or name not in curves:
                raise FormatError("unknown curve id %r" % name)
            letters.append(TwistLetter("T", name, exp, curve=curves[name]))
        else:
            if not loops or name not in loops:
                raise FormatError("unknown loop id %r" % name)
            letters.append(_push_letter(tri, name, loops[name], exp))
    return TwistWord(tri, letters)


# -- the twist action --------------------------------------------------

def apply_twist(word, c):
    """Image of the class ``c`` under the mapping class of ``word``."""
    if word.tri is not c.tri:
        raise SurfaceMismatch(
            "word on %s cannot act on a curve on %s" % (word.sig, c.sig))
    for letter in reversed(word.letters):
        if letter.kind == "T":
            c = _twist_power(c, letter.curve.weights, letter.exponent)
        else:
            for gamma, sign in zip(letter.pushes, (1, -1)):
                if gamma is not None:
                    c = _twist_power(c, gamma.weights,
                                     sign * letter.exponent)
    return c


def _twist_power(c, gvec, n):
    """Apply the n-th twist power along the single curve ``gvec``."""
    if n == 0:
        return c
    tri = c.tri
    punctures = tri.real_punctures if tri.sig.punctures else frozenset()
    arr = Arrangement(tri)
    arr.add_system(0, c.weights)
    arr.add_system(1, gvec)
    arr.refresh()
    arr.reduce_pair(0, 1, real_punctures=punctures,
                    max_steps=arr.crossing_count() // 2 + 2)
    k = arr.crossing_count()
    if k == 0:
        return c
    arr.replicate_system(1, abs(n) * k)
    if arr.crossing_count() != abs(n) * k * k:
        raise AssertionError("replicated overlay is not minimal: %d != %d"
                             % (arr.crossing_count(), abs(n) * k * k))
    cycles = arr.smooth_all(0, 1, positive=n > 0)
    if arr.smoothing_dropped:
        raise AssertionError("twist smoothing dropped %d components"
                             % arr.smoothing_dropped)
    return _finish_system(tri, rebuild_from_cycles(tri, cycles, arr))


# -- point pushing -----------------------------------------------------

def _push_off_vectors(tri, loop):
    """Weight vectors of the two push-offs of the edge-loop ``loop``.

    Around the one vertex, the loop's two edge ends split the cyclic
    order of all edge ends into two intervals; the push-off on either
    side crosses exactly the ends in its interval, once each.
    """
    if tri.sig.punctures == 0:
        raise UnsupportedSurface("point pushing needs a puncture")
    if tri.n_vertices != 1:
        raise UnsupportedSurface(
            "based loops are only tabulated on one-vertex complexes")
    if not 0 <= loop < tri.n_edges:
        raise NotSimpleLoop("no edge %r to push along" % (loop,))
    ends = tri.vertex_edge_ends[tri.edge_start[loop]]
    idx = [i for i, (e, _) in enumerate(ends) if e == loop]
    if len(idx) != 2:
        raise NotSimpleLoop("edge %d is not a loop at the puncture" % loop)
    i0, i1 = idx
    sides = (ends[i0 + 1:i1], ends[i1 + 1:] + ends[:i0])
    vectors = []
    for side in sides:
        w = [0] * tri.n_edges
        for e, _ in side:
            w[e] += 1
        vectors.append(tuple(w))
    return vectors


def _push_letter(tri, name, loop, exponent):
    pushes = []
    for vec in _push_off_vectors(tri, loop):
        try:
            pushes.append(canonicalize(vec, tri))
        except EmptyAfterReduction:
            pushes.append(None)
    return TwistLetter("P", name, exponent, pushes=tuple(pushes))


def point_push(tri, loop, name=None):
    """The mapping class pushing the puncture around an edge-loop.

    Returns the word twisting once along each push-off with opposite
    signs; when the push-offs agree (or die) the word acts trivially,
    exactly as pushing along such a loop should.
    """
    if name is None:
        name = "e%d" % loop
    return TwistWord(tri, [_push_letter(tri, name, loop, 1)])


# -- the shipped genus-two seed ----------------------------------------

def seed_curves(sig):
    """The stored seed classes (chain curves and the waist) on ``sig``."""
    entry = seed_data().get(sig.key)
    if entry is None:
        raise UnsupportedSurface("no seed curves shipped for %s" % sig)
    tri = reference_triangulation(sig)
    return {name: canonicalize(vec, tri)
            for name, vec in sorted(entry["curves"].items())}


@lru_cache(maxsize=1)
def _seed_words():
    up = SurfaceSig(2, 1)
    down = SurfaceSig(2, 0)
    entry = seed_data().get(up.key)
    if entry is None or "word" not in entry:
        raise UnsupportedSurface("no pseudo-Anosov seed word shipped")
    word_up = parse_word(entry["word"], reference_triangulation(up),
                         curves=seed_curves(up))
    word_down = parse_word(entry["word"], reference_triangulation(down),
                           curves=seed_curves(down))
    # the shipped correspondence is pinned by this intersection fact
    alpha0 = seed_curves(down)["alpha0"]
    image = apply_twist(word_down, alpha0)
    got = intersection_number(image, alpha0)
    if got != 4:
        raise AssertionError(
            "seed word moves the waist curve to intersection %d, not 4"
            % got)
    return word_down, word_up


def pseudo_anosov_seed():
    """The stored pseudo-Anosov word downstairs and its lift upstairs.

    Returns ``(word on S_{2,0}, word on S_{2,1})`` built from the five
    shipped chain curves; the defining intersection fact is asserted on
    first use.
    """
    return _seed_words()

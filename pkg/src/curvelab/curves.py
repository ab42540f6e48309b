"""
Isotopy classes of simple closed multicurves in normal coordinates.

A multicurve is stored as a nonnegative integer weight per edge of its
surface's reference triangulation; the weight counts transverse crossings
with that edge.  Admissible vectors (every triangle corner coefficient a
nonnegative integer) are exactly the ones realizable by a disjoint union
of arcs cutting triangle corners, so membership is a local parity and
triangle-inequality test.

Identity of classes is the ``fingerprint``: per component, the ordered
vector of geometric intersection numbers against the surface's marking
curves, together with the component's own weight vector on surfaces with
punctures.  On punctured surfaces taut weight vectors determine the class,
so fingerprints there are injective outright; on the closed surface weight
vectors are representative-dependent (a strand may sweep across the
vertex of the one-vertex triangulation), which is why identity rests on
marking intersections instead, validated against exhaustive tables when
the marking data is built.

Geometric intersection numbers are computed by overlaying the two taut
systems in one arrangement and removing complementary disk regions
bounded by one arc of each system until none remain; what survives is
minimal position and the crossing count is i(a, b).  A disk region that
traps the distinguished puncture is not removable on the punctured
surface but is removable on its closed quotient — the same mechanics give
both readings, and removing exactly such a disk (rerouting only the first
curve) is the boundary-surgery step that reduces i by two while fixing
the image downstairs.
"""

from functools import lru_cache

from .engine import Arrangement, extract_system
from .errors import (AlreadyDisjoint, BudgetExceeded, EmptyAfterReduction,
                     FormatError, InvalidDescriptor, MixedTriangulations,
                     NoAdmissibleBigon, NotAdmissible, UnsupportedSurface)
from .surfaces import SurfaceSig, reference_triangulation

__all__ = [
    "NormalMulticurve", "StripReport", "CutPiece", "CutSurface",
    "canonicalize", "intersection_number", "cut_along", "locate_in_cut",
    "is_separating_multicurve", "bigon_surgery_step", "forget_boundary",
    "lift_curve", "enumerate_curves", "enumerate_multicurves",
    "format_curve_line", "parse_curve_line", "write_curve_file",
    "read_curve_file",
]

# The one supported boundary-forgetting pair: the once-punctured genus-two
# surface shares its reference complex with the closed genus-two surface.
_FORGET_PAIRS = {SurfaceSig(2, 1): SurfaceSig(2, 0)}
_LIFT_PAIRS = {v: k for k, v in _FORGET_PAIRS.items()}


class StripReport:
    """What ``canonicalize`` removed: counts by reason."""

    def __init__(self, trivial=0, peripheral=0, parallel=0):
        self.trivial = trivial
        self.peripheral = peripheral
        self.parallel = parallel

    def total(self):
        return self.trivial + self.peripheral + self.parallel

    def __repr__(self):
        return ("StripReport(trivial=%d, peripheral=%d, parallel=%d)"
                % (self.trivial, self.peripheral, self.parallel))


class NormalMulticurve:
    """An isotopy class of essential, pairwise-disjoint, non-parallel
    simple closed curves, in canonical normal coordinates.

    Instances come from ``canonicalize`` and the operations below; the
    constructor trusts its arguments.  Equality and hashing go through
    the fingerprint, so classes compare correctly even where weight
    vectors are representative-dependent.
    """

    def __init__(self, tri, components, report=None):
        self.tri = tri
        self.sig = tri.sig
        self.components = tuple(tuple(v) for v in components)
        self.weights = (tuple(sum(col) for col in zip(*self.components))
                        if self.components else (0,) * tri.n_edges)
        self.fingerprint = _fingerprint(tri, self.components)
        self.report = report if report is not None else StripReport()

    @property
    def n_components(self):
        return len(self.components)

    def component_curves(self):
        """Each component as its own single-curve value."""
        return tuple(NormalMulticurve(self.tri, (v,))
                     for v in self.components)

    def __eq__(self, other):
        if not isinstance(other, NormalMulticurve):
            return NotImplemented
        return (self.sig == other.sig
                and self.fingerprint == other.fingerprint)

    def __hash__(self):
        return hash((self.sig.key, self.fingerprint))

    def __repr__(self):
        return "NormalMulticurve(%s, w=%r)" % (self.sig, list(self.weights))


# -- fingerprints and intersection numbers -----------------------------

def _fingerprint(tri, components):
    punctured = tri.sig.punctures > 0
    if not punctured and not tri.marking:
        raise FormatError(
            "closed-surface identity needs marking data for %s" % tri.sig)
    rows = []
    for v in components:
        marks = tuple(_vector_i(tri, tuple(v), m, punctured)
                      for m in tri.marking)
        rows.append(tuple(v) + marks if punctured else marks)
    rows.sort()
    flat = [len(rows)]
    for row in rows:
        flat.extend(row)
    return tuple(flat)


def _vector_i(tri, va, vb, punctured):
    """Geometric intersection number of two admissible weight vectors."""
    if va > vb:
        va, vb = vb, va
    return _vector_i_cached(tri.sig.key, tuple(va), tuple(vb), punctured)


@lru_cache(maxsize=None)
def _vector_i_cached(sig_key, va, vb, punctured):
    if va == vb:
        return 0
    tri = reference_triangulation(SurfaceSig.parse(sig_key))
    arr = Arrangement(tri)
    arr.add_system(0, va)
    arr.add_system(1, vb)
    arr.refresh()
    punctures = tri.real_punctures if punctured else frozenset()
    arr.reduce_pair(0, 1, real_punctures=punctures,
                    max_steps=arr.crossing_count() // 2 + 2)
    return arr.crossing_count()


def intersection_number(a, b):
    """Geometric (minimal) intersection number of two classes."""
    _same_surface(a, b)
    return _vector_i(a.tri, a.weights, b.weights, a.sig.punctures > 0)


def _same_surface(a, b):
    if a.tri is not b.tri:
        raise MixedTriangulations(
            "cannot combine curves on %s and %s" % (a.sig, b.sig))


# -- canonical form ----------------------------------------------------

def canonicalize(raw_weights, tri):
    """Validate a weight vector and return its class.

    Trivial and peripheral components are stripped, parallel components
    are merged down to one, and the removals are tallied on the result's
    ``report``.  Raises ``NotAdmissible`` for a vector violating the
    corner conditions and ``EmptyAfterReduction`` when nothing essential
    remains.
    """
    weights = tuple(int(w) for w in raw_weights)
    if len(weights) != tri.n_edges:
        raise InvalidDescriptor(
            "expected %d edge weights for %s, got %d"
            % (tri.n_edges, tri.sig, len(weights)))
    if any(w < 0 for w in weights):
        raise NotAdmissible("edge weights must be nonnegative")
    if tri.corner_counts(weights) is None:
        raise NotAdmissible(
            "corner coefficients of %r are not all nonnegative integers"
            % (list(weights),))
    if not any(weights):
        raise EmptyAfterReduction("the empty multicurve has no class")
    arr = Arrangement.from_vector(tri, weights)
    return _finish_system(tri, arr)


def _finish_system(tri, arr):
    """Canonical class of the lone system of ``arr`` (which it consumes)."""
    arr.tauten(0)
    report = StripReport()
    while True:
        for cycle, vec in zip(arr.components(0), arr.component_weights(0)):
            role = _component_role(tri, vec)
            if role != "essential":
                arr.drop_component(cycle)
                if role == "trivial":
                    report.trivial += 1
                else:
                    report.peripheral += 1
                break
        else:
            break
    arr.refresh()
    vecs = sorted(arr.component_weights(0))
    if not vecs:
        raise EmptyAfterReduction("all components were trivial or peripheral")
    kept = _drop_parallel(tri, vecs, report)
    return NormalMulticurve(tri, kept, report)


def _drop_parallel(tri, vecs, report):
    """Remove repeated classes from a list of disjoint component vectors."""
    kept = []
    for v in vecs:
        if v in kept:
            report.parallel += 1
            continue
        if tri.sig.punctures == 0 and any(
                _vector_i(tri, v, u, False) == 0
                and _closed_rows(tri, v) == _closed_rows(tri, u)
                for u in kept):
            report.parallel += 1
            continue
        kept.append(v)
    return kept


def _closed_rows(tri, v):
    return tuple(_vector_i(tri, v, m, False) for m in tri.marking)


@lru_cache(maxsize=None)
def _component_role_cached(sig_key, vec):
    tri = reference_triangulation(SurfaceSig.parse(sig_key))
    for piece in _cut_pieces(tri, Arrangement.from_vector(tri, vec)):
        if piece["sig"] == SurfaceSig(0, 1):
            return "trivial"
        if (piece["sig"] == SurfaceSig(0, 2) and len(piece["walks"]) == 1
                and piece["punctures"]):
            return "peripheral"
    return "essential"


def _component_role(tri, vec):
    """Whether a single normal component bounds a disk, cuts off a disk
    around a puncture, or neither."""
    return _component_role_cached(tri.sig.key, tuple(vec))


# -- complement decomposition ------------------------------------------

class CutPiece:
    """One complementary component of a multicurve.

    ``boundary`` lists, per boundary walk, the index of the multicurve
    component traced by that walk; ``punctures`` holds the distinguished
    punctures inside the piece.
    """

    def __init__(self, index, sig, chi, boundary, punctures):
        self.index = index
        self.sig = sig
        self.chi = chi
        self.boundary = tuple(boundary)
        self.punctures = frozenset(punctures)

    def is_essential(self):
        return self.sig.is_essential_piece()

    def __repr__(self):
        return ("CutPiece(%d, %s, boundary=%r)"
                % (self.index, self.sig, list(self.boundary)))


class CutSurface:
    """A multicurve's complement, piece by piece.

    Keeps the cutting arrangement alive so later queries (which piece
    holds a disjoint curve, which strand sides border which piece) can be
    answered against the same token ids.
    """

    def __init__(self, curve, arrangement, pieces, piece_by_side):
        self.curve = curve
        self.arrangement = arrangement
        self.pieces = tuple(pieces)
        self.essential_pieces = tuple(p for p in self.pieces
                                      if p.is_essential())
        self.piece_by_side = dict(piece_by_side)

    def __repr__(self):
        return "CutSurface(%r -> %s)" % (
            self.curve, " + ".join(str(p.sig) for p in self.pieces))


def _cut_pieces(tri, arr):
    """Pieces of the complement of ``arr``'s lone system, as dicts."""
    arr.refresh()
    comp_of_token = {}
    for ci, cycle in enumerate(arr.components(0)):
        for uid, _ in cycle:
            comp_of_token[uid] = ci
    pieces = []
    for reg in arr.regions({0}):
        punct = reg.vertices & tri.real_punctures
        chi = reg.chi - len(punct)
        holes = len(reg.walks) + len(punct)
        genus2 = 2 - chi - holes
        if genus2 < 0 or genus2 % 2:
            raise AssertionError(
                "piece with chi=%d and %d holes" % (chi, holes))
        boundary = []
        for walk in reg.walks:
            payload = arr.arcs[walk[0][0]][3]
            boundary.append(comp_of_token[payload[1]])
        pieces.append({
            "sig": SurfaceSig(genus2 // 2, holes),
            "chi": chi,
            "walks": reg.walks,
            "boundary": sorted(boundary),
            "punctures": punct,
            "rid": reg.rid,
        })
    total = sum(p["chi"] for p in pieces)
    if total != tri.sig.euler():
        raise AssertionError("piece Euler characteristics sum to %d, "
                             "surface has %d" % (total, tri.sig.euler()))
    return pieces


def cut_along(c):
    """Decompose the surface along ``c``."""
    arr = Arrangement.from_vector(c.tri, c.weights)
    raw = _cut_pieces(c.tri, arr)
    rid_to_index = {p["rid"]: i for i, p in enumerate(raw)}
    pieces = [CutPiece(i, p["sig"], p["chi"], p["boundary"], p["punctures"])
              for i, p in enumerate(raw)]
    walks_total = sum(len(p["boundary"]) for p in raw)
    if walks_total != 2 * c.n_components:
        raise AssertionError("%d boundary walks for %d components"
                             % (walks_total, c.n_components))
    piece_by_side = {}
    for uid in arr.tok_edge:
        for forward in (True, False):
            rid = arr.region_of_eseg_side(uid, forward)
            piece_by_side[(uid, forward)] = rid_to_index[rid]
    return CutSurface(c, arr, pieces, piece_by_side)


def locate_in_cut(cut, x):
    """Index of the piece of ``cut`` containing the class ``x``.

    Returns ``None`` when ``x`` cannot be made disjoint from the cutting
    multicurve.  The cut curve's strands stay pinned while ``x`` is pulled
    tight against them, so piece identity carries over token for token.
    """
    c = cut.curve
    _same_surface(c, x)
    arr = Arrangement(c.tri)
    arr.add_system(0, c.weights)
    arr.add_system(1, x.weights)
    arr.refresh()
    punctures = (c.tri.real_punctures if c.sig.punctures else frozenset())
    arr.reduce_pair(0, 1, real_punctures=punctures,
                    max_steps=arr.crossing_count() // 2 + 2, move_sys=1)
    if arr.crossing_count():
        return None
    arr.regions({0})
    x_tokens = sorted(u for u, s in arr.tok_sys.items() if s == 1)
    target = arr.region_of_eseg_side(x_tokens[0], True)
    for (uid, forward), piece in sorted(cut.piece_by_side.items()):
        if arr.region_of_eseg_side(uid, forward) == target:
            return piece
    raise AssertionError("curve region touches no strand side")


def is_separating_multicurve(c):
    """Whether at least two complementary pieces are essential."""
    return len(cut_along(c).essential_pieces) >= 2


# -- boundary surgery --------------------------------------------------

def bigon_surgery_step(a, b, fiber_guard=False):
    """Resolve one surgery disk between ``a`` and ``b`` across the
    puncture, rerouting only ``a``.

    At punctured-minimal position the puncture sits in a single
    complementary region; when the curves bound a disk holding it, the
    arc of ``a`` slides across, the crossing count drops by exactly two,
    and the class of ``a`` downstairs is untouched.  ``fiber_guard``
    additionally checks that downstairs images agree before and after.
    """
    _same_surface(a, b)
    if a.sig.punctures != 1:
        raise UnsupportedSurface(
            "boundary surgery needs a single distinguished puncture, "
            "not %s" % a.sig)
    if fiber_guard and forget_boundary(a) != forget_boundary(b):
        raise ValueError("fiber_guard set but the curves differ downstairs")
    tri = a.tri
    arr = Arrangement(tri)
    arr.add_system(0, a.weights)
    arr.add_system(1, b.weights)
    arr.refresh()
    arr.reduce_pair(0, 1, max_steps=arr.crossing_count() // 2 + 2)
    before = arr.crossing_count()
    if before == 0:
        raise AlreadyDisjoint("the curves are disjoint; nothing to resolve")
    disks = arr.find_bigons({0, 1}, tri.real_punctures,
                            require_puncture=True)
    if not disks:
        raise NoAdmissibleBigon(
            "no surgery disk holds the puncture at minimal position")
    if len(disks) != 1:
        raise AssertionError("the puncture lies in several regions")
    arr.remove_bigon(disks[0], move_sys=0)
    arr.refresh()
    after = arr.crossing_count()
    if after != before - 2:
        raise AssertionError(
            "surgery changed the crossing count %d -> %d" % (before, after))
    result = _finish_system(tri, extract_system(arr, 0))
    if fiber_guard and forget_boundary(result) != forget_boundary(a):
        raise AssertionError("surgery moved the curve off its fiber")
    return result


# -- forgetting and lifting --------------------------------------------

def forget_boundary(c):
    """Image of a class under filling in the distinguished puncture.

    The punctured surface and its closed quotient share one reference
    complex, so the same weight vector is reread with isotopies allowed
    to sweep across the vertex, then re-canonicalized.
    """
    target = _FORGET_PAIRS.get(c.sig)
    if target is None:
        raise UnsupportedSurface(
            "no closed counterpart is shipped for %s" % c.sig)
    return canonicalize(c.weights, reference_triangulation(target))


def lift_curve(c):
    """The canonical lift of a closed-surface class across the puncture.

    Rereads the stored representative on the punctured complex, placing
    the puncture in the complementary region the representative happens
    to avoid; forgetting the boundary afterwards returns ``c``.
    """
    target = _LIFT_PAIRS.get(c.sig)
    if target is None:
        raise UnsupportedSurface(
            "no punctured counterpart is shipped for %s" % c.sig)
    return canonicalize(c.weights, reference_triangulation(target))


# -- enumeration -------------------------------------------------------

def _search_order(tri):
    """Edge order that closes triangles early, so parity and triangle
    inequalities prune the weight search as soon as possible."""
    remaining = set(range(len(tri.triangles)))
    order = []
    assigned = set()
    while len(order) < tri.n_edges:
        best, best_score = None, None
        for e in range(tri.n_edges):
            if e in assigned:
                continue
            closes = opens = 0
            for t in remaining:
                edges = set(tri.triangles[t])
                if e not in edges:
                    continue
                missing = edges - assigned - {e}
                if not missing:
                    closes += 1
                else:
                    opens += 1
            score = (closes, -opens, -e)
            if best_score is None or score > best_score:
                best, best_score = e, score
        order.append(best)
        assigned.add(best)
        remaining = {t for t in remaining
                     if not set(tri.triangles[t]) <= assigned}
    return order


def _admissible_vectors(tri, bound, cap):
    """Every weight vector with all corner conditions met and max weight
    at most ``bound``, in lexicographic order of the vector."""
    order = _search_order(tri)
    rank = {e: i for i, e in enumerate(order)}
    closing = {i: [] for i in range(tri.n_edges)}
    for t, edges in enumerate(tri.triangles):
        closing[max(rank[e] for e in edges)].append(edges)
    weights = [0] * tri.n_edges
    found = []

    def admissible(edges):
        x, y, z = (weights[e] for e in edges)
        return (x + y + z) % 2 == 0 and x <= y + z and y <= x + z \
            and z <= x + y

    def descend(depth):
        if depth == tri.n_edges:
            found.append(tuple(weights))
            if len(found) > cap:
                raise BudgetExceeded(
                    "more than %d candidate vectors at weight bound %d"
                    % (cap, bound))
            return
        e = order[depth]
        for w in range(bound + 1):
            weights[e] = w
            if all(admissible(edges) for edges in closing[depth]):
                descend(depth + 1)
        weights[e] = 0

    descend(0)
    return sorted(found)


def enumerate_multicurves(sig, weight_bound, max_components=None,
                          cap=500000):
    """All distinct multicurve classes with a representative of max edge
    weight at most ``weight_bound``, in fingerprint order."""
    if weight_bound < 1:
        raise InvalidDescriptor("weight bound must be at least 1")
    tri = reference_triangulation(sig)
    seen = {}
    for vec in _admissible_vectors(tri, weight_bound, cap):
        if not any(vec):
            continue
        try:
            c = canonicalize(vec, tri)
        except EmptyAfterReduction:
            continue
        if max_components is not None and c.n_components > max_components:
            continue
        key = c.fingerprint
        if key not in seen or c.weights < seen[key].weights:
            seen[key] = c
    return [seen[key] for key in sorted(seen)]


def enumerate_curves(sig, weight_bound, which="all", cap=500000):
    """Single essential curves within the weight bound.

    ``which`` restricts to ``separating`` or ``nonseparating`` classes
    (in the sense of the complement containing two essential pieces).
    """
    if which not in ("all", "separating", "nonseparating"):
        raise InvalidDescriptor("unknown curve filter %r" % (which,))
    curves = enumerate_multicurves(sig, weight_bound, max_components=1,
                                   cap=cap)
    if which == "all":
        return curves
    keep = which == "separating"
    return [c for c in curves if is_separating_multicurve(c) == keep]


# -- curve files -------------------------------------------------------

def format_curve_line(c):
    return "surface=%s tri=%s w=[%s]" % (
        c.sig.key, c.tri.version, ",".join(str(w) for w in c.weights))


def parse_curve_line(line):
    fields = {}
    for part in line.split():
        if "=" not in part:
            raise FormatError("bad curve-file field %r" % part)
        k, _, v = part.partition("=")
        fields[k] = v
    for k in ("surface", "tri", "w"):
        if k not in fields:
            raise FormatError("curve line is missing %r" % k)
    tri = reference_triangulation(SurfaceSig.parse(fields["surface"]))
    if fields["tri"] != tri.version:
        raise FormatError("curve line wants triangulation %r, shipped is %r"
                          % (fields["tri"], tri.version))
    body = fields["w"]
    if not (body.startswith("[") and body.endswith("]")):
        raise FormatError("weights must be bracketed, got %r" % body)
    try:
        weights = [int(x) for x in body[1:-1].split(",") if x != ""]
    except ValueError as exc:
        raise FormatError("non-integer weight in %r" % body) from exc
    return canonicalize(weights, tri)


def write_curve_file(path, curves):
    with open(path, "w", encoding="ascii") as fh:
        for c in curves:
            fh.write(format_curve_line(c) + "\n")


def read_curve_file(path):
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(parse_curve_line(line))
    return out

"""Subsurfaces, projections, graph snapshots and distance estimates.

The complexes studied here (curve graph, pants graph, and the two
separating-multicurve graphs) are locally infinite, so they are realized
as bounded snapshots: vertices enumerated within a weight bound and
closed to a declared radius around a basepoint.  Curves of a proper
subsurface are kept in ambient coordinates -- classes on the full surface
that happen to lie inside the piece -- so one normal-coordinate substrate
serves every graph and no induced triangulations are needed.

Subsurface projection is the usual surgical recipe: each arc that a curve
cuts through a piece is closed up along the piece's boundary, giving one
or two essential curves inside the piece.  The closing is done inside the
arrangement itself: a parallel ``hug`` copy of the boundary-and-arc
itinerary is drawn as a fresh system, extracted, and tautened into a
canonical class.
"""

import hashlib
import json
import os

from .curves import (NormalMulticurve, _finish_system, _same_surface,
                     canonicalize, cut_along, enumerate_curves,
                     enumerate_multicurves, forget_boundary,
                     intersection_number, is_separating_multicurve,
                     locate_in_cut)
from .engine import Arrangement, extract_system
from .errors import (DisconnectedSubsurface, EmptyAfterReduction,
                     FormatError, InvalidDescriptor, NoIntersection,
                     NotProper, NotOverlapping, NotSeparating,
                     SurfaceMismatch, UniverseTooSmall, UnknownVertex)
from .surfaces import SurfaceSig, reference_triangulation


class SubsurfaceDescriptor:
    """An essential subsurface: a boundary multicurve plus chosen pieces.

    The subsurface is the union of the selected complementary components
    of the boundary multicurve; every selected component must have
    complexity at least one (annuli and pairs of pants are never
    essential subsurfaces here).
    """

    def __init__(self, boundary, selected):
        if boundary is None:
            raise NotProper("the whole surface is not a proper subsurface")
        self.boundary = boundary
        self.ambient = boundary.sig
        self.cut = cut_along(boundary)
        pieces = self.cut.pieces
        chosen = tuple(sorted({int(i) for i in selected}))
        if not chosen:
            raise InvalidDescriptor("no complementary component selected")
        for i in chosen:
            if not 0 <= i < len(pieces):
                raise InvalidDescriptor("no complementary component %d" % i)
            if not pieces[i].sig.is_essential_piece():
                raise InvalidDescriptor(
                    "component %d is %s, complexity 0" % (i, pieces[i].sig))
        self.selected = chosen
        self.signatures = tuple(pieces[i].sig for i in chosen)

    def is_connected(self):
        return len(self.selected) == 1

    def piece_sig(self):
        """Signature of the lone selected component."""
        if not self.is_connected():
            raise DisconnectedSubsurface(
                "subsurface has %d components" % len(self.selected))
        return self.signatures[0]

    def __eq__(self, other):
        if not isinstance(other, SubsurfaceDescriptor):
            return NotImplemented
        return (self.ambient == other.ambient
                and self.boundary == other.boundary
                and self.selected == other.selected)

    def __hash__(self):
        return hash((self.ambient.key, self.boundary.fingerprint,
                     self.selected))

    def __repr__(self):
        return "Subsurface(%s in %s, piece %s)" % (
            "+".join(str(s) for s in self.signatures), self.ambient,
            ",".join(str(i) for i in self.selected))


def classify_subsurface(desc):
    """``separating`` when the complement keeps an essential piece."""
    rest = [p for p in desc.cut.pieces if p.index not in desc.selected]
    if any(p.sig.is_essential_piece() for p in rest):
        return "separating"
    return "nonseparating"


def subsurfaces_of(boundary):
    """One connected descriptor per essential piece of the complement."""
    cut = cut_along(boundary)
    return tuple(SubsurfaceDescriptor(boundary, (p.index,))
                 for p in cut.pieces if p.sig.is_essential_piece())


def subsurface_projection(curve, desc):
    """Project a multicurve into a connected essential subsurface.

    Returns a tuple of curve classes lying in the subsurface, sorted by
    fingerprint.  Components already inside the piece pass through
    unchanged, components crossing the boundary contribute the closures
    of their arcs, and components disjoint from the piece -- including
    any parallel to its boundary -- contribute nothing.  An empty tuple
    means the multicurve misses the subsurface entirely.
    """
    if not desc.is_connected():
        raise DisconnectedSubsurface(
            "projection needs a connected subsurface, got %d pieces"
            % len(desc.selected))
    _same_surface(curve, desc.boundary)
    target = desc.selected[0]
    boundary_parts = set(desc.boundary.component_curves())
    inside, crossing = [], []
    for comp in curve.component_curves():
        if comp in boundary_parts:
            continue
        if intersection_number(comp, desc.boundary) == 0:
            if locate_in_cut(desc.cut, comp) == target:
                inside.append(comp)
        else:
            crossing.append(comp)
    out = set(inside)
    if crossing:
        out.update(cls for cls in _surgery_curves(desc, crossing)
                   if cls not in boundary_parts)
    return tuple(sorted(out, key=lambda c: c.fingerprint))


# -- the surgical projection -------------------------------------------

def _region_pieces(cut, arr):
    """Map the overlay's region ids onto the cut's piece indices.

    Valid right after ``arr.regions({0})`` on an overlay whose system 0
    was laid out from the same weights as the cut's arrangement: token
    ids then agree, and every region touches a strand side.
    """
    mapping = {}
    for (uid, forward), piece in sorted(cut.piece_by_side.items()):
        rid = arr.region_of_eseg_side(uid, forward)
        if mapping.setdefault(rid, piece) != piece:
            raise AssertionError("region %d maps to two pieces" % rid)
    return mapping


def _wall_foot(arr, wall_index, a_dart):
    """Walk position where the strand leaving along ``a_dart`` attaches.

    Rotating clockwise from the dart lands on the wall dart that the
    boundary walk of the attachment side follows out of the crossing.
    """
    d = arr._sigma_inv(a_dart)
    while arr.arcs[d[0]][3][3] != 0:
        d = arr._sigma_inv(d)
    return wall_index[d]


def _walk_steps(arr, walk, start, count):
    """Anchor steps along ``count`` walk darts from position ``start``."""
    steps = []
    for k in range(count):
        d = walk[(start + k) % len(walk)]
        node = arr.origin[d]
        if node[0] == "tok":
            steps.append((node[1], arr.arcs[d[0]][3][0]))
    return steps


def _arc_steps(arr, items, forward):
    """Anchor steps along the arc's interior tokens, either direction.

    ``items`` runs from the entry crossing to the exit crossing,
    inclusive on both ends.  Backward travel pairs each token with the
    triangle of the chord segment arriving at it.
    """
    if forward:
        return [(node[1], arr.arcs[d[0]][3][0])
                for node, d in items[1:-1] if node[0] == "tok"]
    out = []
    for k in range(len(items) - 2, 0, -1):
        node = items[k][0]
        if node[0] == "tok":
            out.append((node[1], arr.arcs[items[k - 1][1][0]][3][0]))
    return out


def _hug_class(arr, legs):
    """Extract the push-off of a closed leg itinerary as its own class.

    Each leg is a list of anchor steps ``(uid, t_next)`` along one
    strand: the token the itinerary passes, and the triangle it enters
    next.  A step's hug token goes a third of the way into the gap on
    the travel's left; consecutive hugs are joined parallel to the
    strand, and the junction between legs happens inside the triangle
    of the crossing both leg ends reach.  Anchorless legs stay within
    one triangle and simply drop out.  Returns ``None`` when the
    push-off dies after tautening.
    """
    flat = [step for leg in legs for step in leg]
    if not flat:
        return None
    if len(flat) < 2:
        raise AssertionError("surgery itinerary shorter than two anchors")
    arr.refresh()

    hug = []
    for uid, t_next in flat:
        e = arr.tok_edge[uid]
        left = arr.tri.edge_slots[e][0][0]
        order = arr.edge_order[e]
        i = order.index(uid)
        p = arr.tok_pos[uid]
        if t_next == left:
            lim = arr.tok_pos[order[i - 1]] if i > 0 else 0
        else:
            lim = arr.tok_pos[order[i + 1]] if i + 1 < len(order) else 1
        hug.append(arr.new_token(2, e, p + (lim - p) / 3))
    for k, (uid, t) in enumerate(flat):
        arr.add_chord(t, hug[k], hug[(k + 1) % len(flat)])

    fresh = extract_system(arr, 2)
    if arr.crossing_count(0, 2):
        raise AssertionError("surgery push-off crosses the boundary")
    for k, (uid, t) in enumerate(flat):
        arr.del_chord(t, hug[k])
    for u in hug:
        arr.del_token(u)
    try:
        return _finish_system(arr.tri, fresh)
    except EmptyAfterReduction:
        return None


def _surgery_curves(desc, comps):
    """Curves cut out of the selected piece by arcs of ``comps``.

    One overlay hosts the boundary (system 0, pinned) and the crossing
    components (system 1, reduced against it).  Each strand of system 1
    splits at the crossings into arcs; for every arc through the piece,
    the itineraries that close it up along the piece's boundary are
    traced and pushed off.  Same-walk arcs close up in two ways,
    different-walk arcs in one.
    """
    tri = desc.boundary.tri
    arr = Arrangement(tri)
    arr.add_system(0, desc.boundary.weights)
    weights = tuple(sum(c.weights[k] for c in comps)
                    for k in range(tri.n_edges))
    arr.add_system(1, weights)
    punctures = tri.real_punctures if tri.sig.punctures else frozenset()
    arr.reduce_pair(0, 1, real_punctures=punctures, move_sys=1)
    arr.respread_positions()

    regions = arr.regions({0})
    piece_of = _region_pieces(desc.cut, arr)
    target = desc.selected[0]
    wall_index = {}
    for rid, reg in enumerate(regions):
        for wi, walk in enumerate(reg.walks):
            for pos, d in enumerate(walk):
                wall_index[d] = (rid, wi, pos)

    found = []
    for items in arr.system_walks(1):
        feet = [k for k, (node, _) in enumerate(items) if node[0] == "x"]
        if not feet:
            continue
        n = len(items)
        for idx, ci in enumerate(feet):
            cj = feet[(idx + 1) % len(feet)]
            span = (cj - ci) % n or n
            arc = [items[(ci + k) % n] for k in range(span)]
            first = arc[1] if len(arc) > 1 else None
            if first is not None and first[0][0] == "tok":
                rid = arr.region_of_eseg_side(first[0][1], True)
            else:
                rid = arr.region_of_dart(arc[0][1])
            if piece_of[rid] != target:
                continue
            found.extend(_close_arc(arr, regions, wall_index, arc,
                                    items[cj % n]))

    out = []
    for legs in found:
        cls = _hug_class(arr, legs)
        if cls is not None:
            out.append(cls)
    return out


def _close_arc(arr, regions, wall_index, arc, stop):
    """Leg itineraries closing one arc up along its region's walls.

    ``arc`` lists the arc's items from its entry crossing (inclusive)
    to its exit crossing (exclusive); ``stop`` is the exit item.  Feet
    positions come from rotating clockwise off the arc's end darts.
    """
    x_enter = arc[0]
    d_in = x_enter[1]
    d_back = arr.alpha[arc[-1][1]]
    rid_s, wi_s, ps = _wall_foot(arr, wall_index, d_in)
    rid_e, wi_e, pe = _wall_foot(arr, wall_index, d_back)
    if rid_s != rid_e:
        raise AssertionError("arc feet land in different regions")
    walk_s = regions[rid_s].walks[wi_s]
    walk_e = regions[rid_e].walks[wi_e]
    fwd = _arc_steps(arr, arc + [stop], True)
    bwd = _arc_steps(arr, arc + [stop], False)

    if (wi_s, rid_s) == (wi_e, rid_e):
        n = len(walk_s)
        one = _walk_steps(arr, walk_s, ps, (pe - ps) % n)
        two = _walk_steps(arr, walk_s, pe, (ps - pe) % n)
        return [[one, bwd], [two, fwd]]
    loop_s = _walk_steps(arr, walk_s, ps, len(walk_s))
    loop_e = _walk_steps(arr, walk_e, pe, len(walk_e))
    return [[loop_s, fwd, loop_e, bwd]]


# -- pants decompositions ----------------------------------------------

class PantsDecomposition(NormalMulticurve):
    """A maximal multicurve: every complementary piece is a pair of pants."""

    def __init__(self, tri, components, report=None):
        super().__init__(tri, components, report)
        need = self.sig.complexity()
        if self.n_components != need:
            raise InvalidDescriptor(
                "pants decomposition of %s needs %d curves, got %d"
                % (self.sig, need, self.n_components))
        pieces = cut_along(self).pieces
        if not all(p.sig.is_pants() for p in pieces):
            raise InvalidDescriptor(
                "complement pieces %s are not all pants"
                % " + ".join(str(p.sig) for p in pieces))


def as_pants(c):
    """View an existing multicurve as a pants decomposition."""
    if isinstance(c, PantsDecomposition):
        return c
    return PantsDecomposition(c.tri, c.components)


def _merge_disjoint(a, b):
    """Union of two disjoint multicurve classes, as one multicurve.

    On punctured surfaces taut vectors are unique per class, so the
    components simply concatenate.  On a closed surface the stored
    representatives may cross as drawn, so the pair is first pulled to
    minimal position and the union vector read off the overlay.
    """
    _same_surface(a, b)
    if not a.n_components:
        return b
    if not b.n_components:
        return a
    if a.sig.punctures:
        return NormalMulticurve(
            a.tri, sorted(a.components + b.components))
    arr = Arrangement(a.tri)
    arr.add_system(0, a.weights)
    arr.add_system(1, b.weights)
    arr.reduce_pair(0, 1, real_punctures=frozenset())
    if arr.crossing_count():
        raise AssertionError("classes declared disjoint still cross")
    union = tuple(x + y for x, y in zip(arr.weights(0), arr.weights(1)))
    return canonicalize(union, a.tri)


# -- adjacency predicates ----------------------------------------------

def curve_adjacent(a, b):
    """Curve-graph adjacency, with the low-complexity conventions.

    Distinct disjoint curves are adjacent; on the surfaces whose curves
    are never disjoint the convention is minimal intersection instead
    (one on the once-punctured torus, two on the four-punctured
    sphere).
    """
    _same_surface(a, b)
    need = _minimal_intersection(a.sig)
    if need:
        return intersection_number(a, b) == need
    return a != b and intersection_number(a, b) == 0


def _minimal_intersection(sig):
    """Required adjacency intersection on complexity-one surfaces."""
    if sig.complexity() != 1:
        return 0
    return 1 if sig.genus else 2


def pants_adjacent(p, q):
    """Whether two pants decompositions differ by one elementary move."""
    _same_surface(p, q)
    shared = set(p.components) & set(q.components)
    if len(shared) != p.n_components - 1 or p == q:
        return False
    (c,) = [v for v in p.components if v not in shared]
    (d,) = [v for v in q.components if v not in shared]
    a = NormalMulticurve(p.tri, (c,))
    b = NormalMulticurve(p.tri, (d,))
    if shared:
        rest = NormalMulticurve(p.tri, sorted(shared))
        piece = cut_along(rest)
        sig = piece.pieces[locate_in_cut(piece, a)].sig
    else:
        sig = p.sig
    if sig.complexity() != 1:
        raise AssertionError(
            "removing one curve left a complexity-%d piece"
            % sig.complexity())
    return intersection_number(a, b) == _minimal_intersection(sig)


_CURVE_POOLS = {}
_MULTI_POOLS = {}


def _curve_pool(sig, weight_bound):
    """Enumerated ambient curves, cached per surface and bound."""
    key = (sig.key, weight_bound)
    if key not in _CURVE_POOLS:
        _CURVE_POOLS[key] = tuple(enumerate_curves(sig, weight_bound))
    return _CURVE_POOLS[key]


def _multicurve_pool(sig, weight_bound):
    """Enumerated ambient multicurves, cached per surface and bound."""
    key = (sig.key, weight_bound)
    if key not in _MULTI_POOLS:
        _MULTI_POOLS[key] = tuple(enumerate_multicurves(sig, weight_bound))
    return _MULTI_POOLS[key]


def pants_neighbors(p, weight_bound):
    """Pants decompositions one elementary move away, within the bound.

    Each curve of ``p`` is replaced by every enumerated curve that stays
    disjoint from the rest and meets the replaced curve minimally inside
    its complexity-one complementary piece.
    """
    pool = _curve_pool(p.sig, weight_bound)
    out = []
    for k, c in enumerate(p.components):
        old = NormalMulticurve(p.tri, (c,))
        keep = [v for i, v in enumerate(p.components) if i != k]
        if keep:
            rest = NormalMulticurve(p.tri, sorted(keep))
            cut = cut_along(rest)
            sig = cut.pieces[locate_in_cut(cut, old)].sig
        else:
            rest = None
            sig = p.sig
        if sig.complexity() != 1:
            raise AssertionError(
                "removing one curve left a complexity-%d piece"
                % sig.complexity())
        need = _minimal_intersection(sig)
        # Meeting the old curve ``need`` > 0 times already confines a
        # candidate to the right piece and rules out the old curve and
        # anything parallel to the remaining ones.
        for cand in pool:
            if intersection_number(cand, old) != need:
                continue
            if rest is not None and intersection_number(cand, rest):
                continue
            base = rest if rest is not None else NormalMulticurve(p.tri, ())
            out.append(as_pants(_merge_disjoint(base, cand)))
    return out


def sep_adjacent(c, d):
    """Adjacency in the separating-multicurve graph.

    Two distinct separating multicurves are adjacent when the
    complement of their union still contains an essential subsurface.
    """
    _same_surface(c, d)
    for x in (c, d):
        if not is_separating_multicurve(x):
            raise NotSeparating("%r is not a separating multicurve" % (x,))
    if c == d:
        return False
    return _union_keeps_essential(c, d)


def sep_prime_adjacent(c, d):
    """Adjacency in the disjointness-refined separating graph."""
    return sep_adjacent(c, d) and intersection_number(c, d) == 0


def _union_keeps_essential(c, d):
    """Whether the complement of ``c`` and ``d`` together keeps an
    essential piece once the pair is in minimal position."""
    tri = c.tri
    arr = Arrangement(tri)
    arr.add_system(0, c.weights)
    arr.add_system(1, d.weights)
    punct = tri.real_punctures if tri.sig.punctures else frozenset()
    arr.reduce_pair(0, 1, real_punctures=punct)
    for reg in arr.regions({0, 1}):
        inner = reg.vertices & tri.real_punctures
        chi = reg.chi - len(inner)
        holes = len(reg.walks) + len(inner)
        genus2 = 2 - chi - holes
        if genus2 < 0 or genus2 % 2:
            raise AssertionError(
                "union piece with chi=%d and %d holes" % (chi, holes))
        if SurfaceSig(genus2 // 2, holes).is_essential_piece():
            return True
    return False


# -- projecting pants decompositions, extensions, regions --------------

def _cycle_indices_of(cut, g):
    """Indices, in the cut's own component numbering, of ``g``'s curves.

    Boundary lists on cut pieces use the order in which the cutting
    arrangement walks its strands, which need not match the component
    tuple; matching goes through the class of each walked cycle.
    """
    want = set(g.component_curves())
    tri = cut.curve.tri
    found = set()
    for i, vec in enumerate(cut.arrangement.component_weights(0)):
        if NormalMulticurve(tri, (tuple(vec),)) in want:
            found.add(i)
    if len(found) != len(want):
        raise AssertionError("%d of %d curves found among the cut cycles"
                             % (len(found), len(want)))
    return found


def project_pants(p, desc):
    """Pants decomposition of a subsurface induced by an ambient one.

    Projects ``p`` into the piece, keeps the fingerprint-least curve,
    and recurses into the complementary pieces inside the subsurface
    until they are all pants.  Returns the chosen curves as a multicurve
    in ambient coordinates with exactly the piece's complexity many
    components.
    """
    if not desc.is_connected():
        raise DisconnectedSubsurface(
            "pants projection needs a connected subsurface")
    chosen = []
    stack = [desc]
    while stack:
        y = stack.pop()
        proj = subsurface_projection(p, y)
        if not proj:
            raise NoIntersection(
                "nothing of %r meets the piece %r" % (p, y))
        g = proj[0]
        chosen.append(g)
        wider = _merge_disjoint(y.boundary, g)
        cut = cut_along(wider)
        mark = _cycle_indices_of(cut, g)
        # Only the pieces bordered by the new curve lie inside the old
        # piece; the rest of the surface is cut exactly as before.
        for piece in cut.pieces:
            if not piece.sig.is_essential_piece():
                continue
            if mark & set(piece.boundary):
                stack.append(SubsurfaceDescriptor(wider, (piece.index,)))
    want = desc.piece_sig().complexity()
    if len(chosen) != want:
        raise AssertionError(
            "projection chose %d curves for a complexity-%d piece"
            % (len(chosen), want))
    out = chosen[0]
    for g in chosen[1:]:
        out = _merge_disjoint(out, g)
    return out


def extend_multicurve(c, x):
    """Extension of a multicurve to a pants decomposition through ``x``.

    Keeps ``c`` and fills every essential complementary piece with the
    projection of ``x`` to that piece.
    """
    _same_surface(c, x)
    if not c.n_components:
        return as_pants(x)
    out = c
    for desc in subsurfaces_of(c):
        out = _merge_disjoint(out, project_pants(x, desc))
    return as_pants(out)


def region_contains(c, p):
    """Whether the pants decomposition lies in the region over ``c``.

    The region over a multicurve collects the pants decompositions
    containing it; the empty multicurve constrains nothing.
    """
    _same_surface(c, p)
    have = set(p.component_curves())
    return all(comp in have for comp in c.component_curves())


def x_region_contains(alpha, q):
    """Whether a closed-surface curve labels a piece of ``q``.

    True when filling the puncture sends some separating curve of the
    decomposition ``q`` exactly to ``alpha``.
    """
    if alpha.sig.punctures:
        raise SurfaceMismatch(
            "first argument must live on a closed surface, got %s"
            % alpha.sig)
    for comp in q.component_curves():
        if is_separating_multicurve(comp):
            if forget_boundary(comp) == alpha:
                return True
    return False


# -- graph snapshots ---------------------------------------------------

SNAPSHOT_FORMAT = "curvelab-snapshot"
SNAPSHOT_VERSION = 1

_KIND_PREDICATES = {
    "curve": curve_adjacent,
    "pants": pants_adjacent,
    "sep": sep_adjacent,
    "sep_prime": sep_prime_adjacent,
}


class GraphSnapshot:
    """A bounded ball of one of the four complexes.

    Vertices are canonical classes keyed by fingerprint, discovered by
    breadth-first search from the basepoint out to ``radius`` within the
    weight-bounded universe, admitted in fingerprint order per layer.
    The adjacency map holds every edge among the admitted vertices, so
    in-snapshot distances are exact for the bounded universe.
    """

    def __init__(self, kind, sig, weight_bound, radius, basepoint,
                 vertices, adjacency, layer):
        self.kind = kind
        self.sig = sig
        self.weight_bound = weight_bound
        self.radius = radius
        self.basepoint = basepoint
        self.vertices = vertices
        self.adjacency = adjacency
        self.layer = layer

    def __contains__(self, key):
        return _vertex_key(key) in self.vertices

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return ("GraphSnapshot(%s on %s, bound %d, radius %d, %d vertices)"
                % (self.kind, self.sig, self.weight_bound, self.radius,
                   len(self.vertices)))


def _vertex_key(v):
    return v.fingerprint if isinstance(v, NormalMulticurve) else tuple(v)


def _snapshot_universe(kind, sig, weight_bound):
    """All candidate vertices of the kind within the weight bound."""
    if kind == "curve":
        return list(_curve_pool(sig, weight_bound))
    pool = _multicurve_pool(sig, weight_bound)
    if kind == "pants":
        want = sig.complexity()
        out = []
        for c in pool:
            if c.n_components == want:
                try:
                    out.append(as_pants(c))
                except InvalidDescriptor:
                    pass
        return out
    if kind in ("sep", "sep_prime"):
        return [c for c in pool if is_separating_multicurve(c)]
    raise InvalidDescriptor("unknown snapshot kind %r" % (kind,))


def build_snapshot(kind, basepoint, weight_bound, radius):
    """Grow the radius-``radius`` ball of the kind's graph around a vertex.

    The basepoint must itself satisfy the kind's membership predicate;
    it is admitted even if its weights exceed the bound.  Discovery is
    deterministic: each layer scans the remaining universe in
    fingerprint order.
    """
    sig = basepoint.sig
    pred = _KIND_PREDICATES[kind]
    universe = _snapshot_universe(kind, sig, weight_bound)
    if kind == "pants":
        basepoint = as_pants(basepoint)
    elif kind in ("sep", "sep_prime"):
        if not is_separating_multicurve(basepoint):
            raise NotSeparating("basepoint %r is not separating" % (basepoint,))
    by_key = {c.fingerprint: c for c in universe}
    by_key[basepoint.fingerprint] = basepoint

    memo = {}

    def adjacent(a, b):
        ka, kb = a.fingerprint, b.fingerprint
        if ka > kb:
            ka, kb, a, b = kb, ka, b, a
        if (ka, kb) not in memo:
            memo[(ka, kb)] = pred(a, b)
        return memo[(ka, kb)]

    layer = {basepoint.fingerprint: 0}
    frontier = [basepoint]
    for r in range(1, radius + 1):
        if not frontier:
            break
        fresh = []
        for key in sorted(by_key):
            if key in layer:
                continue
            cand = by_key[key]
            if any(adjacent(cand, f) for f in frontier):
                layer[key] = r
                fresh.append(cand)
        frontier = fresh

    keys = sorted(layer)
    vertices = {k: by_key[k] for k in keys}
    adjacency = {k: [] for k in keys}
    for i, ka in enumerate(keys):
        for kb in keys[i + 1:]:
            if adjacent(vertices[ka], vertices[kb]):
                adjacency[ka].append(kb)
                adjacency[kb].append(ka)
    adjacency = {k: tuple(sorted(n)) for k, n in adjacency.items()}
    return GraphSnapshot(kind, sig, weight_bound, radius,
                         basepoint.fingerprint, vertices, adjacency, layer)


def graph_distance(snap, u, v):
    """Exact shortest-path length inside the snapshot, or ``None``.

    ``None`` is an honest partial answer: the vertices are in the
    snapshot but no path between them stays inside it.  The true
    complex may connect them beyond the ball.
    """
    ku, kv = _vertex_key(u), _vertex_key(v)
    for k in (ku, kv):
        if k not in snap.vertices:
            raise UnknownVertex("vertex %r is not in the snapshot" % (k,))
    if ku == kv:
        return 0
    dist = {ku: 0}
    queue = [ku]
    while queue:
        nxt = []
        for a in queue:
            for b in snap.adjacency[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    if b == kv:
                        return dist[b]
                    nxt.append(b)
        queue = nxt
    return None


def snapshot_to_json(snap):
    """Plain-data form of a snapshot, stable across rebuilds."""
    keys = sorted(snap.vertices)
    index = {k: i for i, k in enumerate(keys)}
    edges = sorted((index[a], index[b])
                   for a in keys for b in snap.adjacency[a]
                   if index[a] < index[b])
    return {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "kind": snap.kind,
        "surface": snap.sig.key,
        "weight_bound": snap.weight_bound,
        "radius": snap.radius,
        "basepoint": list(snap.basepoint),
        "vertices": [{"key": list(k),
                      "components": [list(v) for v in
                                     snap.vertices[k].components],
                      "layer": snap.layer[k]} for k in keys],
        "edges": [list(e) for e in edges],
    }


def _snapshot_digest(payload):
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("ascii")).hexdigest()[:12]


def save_snapshot(snap, directory):
    """Write the snapshot under a content-addressed file name."""
    payload = snapshot_to_json(snap)
    digest = _snapshot_digest(payload)
    name = "%s-%s-b%d-r%d-%s.json" % (
        snap.kind, snap.sig.key.replace(",", "_"), snap.weight_bound,
        snap.radius, digest)
    path = os.path.join(directory, name)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def load_snapshot(path):
    """Read a snapshot back; the digest in the name must still match."""
    with open(path) as fh:
        payload = json.load(fh)
    if (payload.get("format") != SNAPSHOT_FORMAT
            or payload.get("version") != SNAPSHOT_VERSION):
        raise FormatError("not a version-%d snapshot file: %s"
                          % (SNAPSHOT_VERSION, path))
    stem = os.path.basename(path)
    digest = _snapshot_digest(payload)
    if stem.rsplit("-", 1)[-1][:-5] != digest:
        raise FormatError("snapshot content does not match its name: %s"
                          % stem)
    tri = reference_triangulation(SurfaceSig.parse(payload["surface"]))
    vertices = {}
    layer = {}
    for entry in payload["vertices"]:
        comps = tuple(tuple(v) for v in entry["components"])
        c = NormalMulticurve(tri, comps)
        if payload["kind"] == "pants":
            c = as_pants(c)
        key = tuple(entry["key"])
        if key != c.fingerprint:
            raise FormatError("stored key disagrees with its class")
        vertices[key] = c
        layer[key] = entry["layer"]
    keys = sorted(vertices)
    adjacency = {k: [] for k in keys}
    for a, b in payload["edges"]:
        ka, kb = keys[a], keys[b]
        adjacency[ka].append(kb)
        adjacency[kb].append(ka)
    return GraphSnapshot(payload["kind"],
                         SurfaceSig.parse(payload["surface"]),
                         payload["weight_bound"], payload["radius"],
                         tuple(payload["basepoint"]), vertices,
                         {k: tuple(sorted(n)) for k, n in adjacency.items()},
                         layer)


# -- the distance-formula estimator ------------------------------------

class DistanceEstimate:
    """Thresholded sum of subsurface projection distances.

    ``terms`` pairs each contributing subsurface with its projection
    distance; only distances at or above the threshold contribute, and
    ``total`` is their sum.
    """

    def __init__(self, pair, threshold, terms):
        self.pair = pair
        self.threshold = threshold
        self.terms = tuple(terms)
        self.total = sum(d for _, d in self.terms)
        for _, d in self.terms:
            if d < threshold:
                raise InvalidDescriptor(
                    "estimate term %d below threshold %d" % (d, threshold))

    def __repr__(self):
        return ("DistanceEstimate(M=%d, %d terms, total %d)"
                % (self.threshold, len(self.terms), self.total))


_PIECE_GRAPHS = {}


def _piece_graph(desc, curve_bound):
    """Bounded curve graph of a piece, in ambient coordinates.

    Vertices are the enumerated ambient curves lying in the piece;
    adjacency follows the piece's own convention (disjointness, or
    minimal intersection when the piece has complexity one).  Cached
    per descriptor and bound.
    """
    key = (desc.ambient.key, desc.boundary.fingerprint, desc.selected,
           curve_bound)
    if key in _PIECE_GRAPHS:
        return _PIECE_GRAPHS[key]
    target = desc.selected[0]
    verts = {}
    for c in _curve_pool(desc.ambient, curve_bound):
        if (intersection_number(c, desc.boundary) == 0
                and c not in set(desc.boundary.component_curves())
                and locate_in_cut(desc.cut, c) == target):
            verts[c.fingerprint] = c
    need = _minimal_intersection(desc.piece_sig())
    keys = sorted(verts)
    adjacency = {k: [] for k in keys}
    for i, ka in enumerate(keys):
        for kb in keys[i + 1:]:
            if intersection_number(verts[ka], verts[kb]) == need:
                adjacency[ka].append(kb)
                adjacency[kb].append(ka)
    graph = (verts, {k: tuple(v) for k, v in adjacency.items()})
    _PIECE_GRAPHS[key] = graph
    return graph


def piece_set_distance(desc, a_curves, b_curves, curve_bound):
    """Shortest in-piece curve-graph distance between two projections.

    Multi-source breadth-first search from one projection set to the
    other inside the piece's bounded curve graph; ``None`` when no
    member of either set is in the bounded graph or no path connects
    them there.
    """
    verts, adjacency = _piece_graph(desc, curve_bound)
    src = sorted(c.fingerprint for c in a_curves if c.fingerprint in verts)
    dst = {c.fingerprint for c in b_curves if c.fingerprint in verts}
    if not src or not dst:
        return None
    if dst & set(src):
        return 0
    dist = {k: 0 for k in src}
    queue = list(src)
    while queue:
        nxt = []
        for a in queue:
            for b in adjacency[a]:
                if b not in dist:
                    if b in dst:
                        return dist[a] + 1
                    dist[b] = dist[a] + 1
                    nxt.append(b)
        queue = nxt
    return None


def subsurface_universe(sig, weight_bound):
    """Connected essential subsurfaces with enumerated boundaries.

    One descriptor per (multicurve, piece) pair in which the multicurve
    is the piece's entire boundary; annuli and pants never appear, and
    each abstract subsurface shows up exactly once.
    """
    out = []
    for b in _multicurve_pool(sig, weight_bound):
        cut = cut_along(b)
        whole = set(range(b.n_components))
        for piece in cut.pieces:
            if not piece.sig.is_essential_piece():
                continue
            if set(piece.boundary) == whole:
                out.append(SubsurfaceDescriptor(b, (piece.index,)))
    return out


def distance_formula_estimate(p, q, threshold, universe, curve_bound=4):
    """Sum the large subsurface projection distances between two
    pants decompositions.

    Every universe subsurface contributes the distance between the two
    projections in its bounded curve graph whenever that distance
    reaches the threshold.  A subsurface whose distance cannot be
    resolved inside its bounded graph raises ``UniverseTooSmall``; a
    projection that misses the subsurface contributes nothing.
    """
    if threshold < 1:
        raise InvalidDescriptor("threshold must be at least 1")
    p = as_pants(p)
    q = as_pants(q)
    terms = []
    for desc in universe:
        a = subsurface_projection(p, desc)
        b = subsurface_projection(q, desc)
        if not a or not b:
            continue
        d = piece_set_distance(desc, a, b, curve_bound)
        if d is None:
            raise UniverseTooSmall(
                "projection distance in %r unresolved at curve bound %d"
                % (desc, curve_bound))
        if d >= threshold:
            terms.append((desc, d))
    return DistanceEstimate((p.fingerprint, q.fingerprint), threshold, terms)


def behrstock_gap(p, w, v, curve_bound=4):
    """Projection distances of a pants decomposition to two overlapping
    subsurfaces' boundaries.

    Returns ``(d_W(p, boundary of V), d_V(p, boundary of W))`` measured
    in the bounded in-piece curve graphs.  The subsurfaces must
    overlap: each boundary has to cut the other piece.
    """
    p = as_pants(p)
    bv_in_w = subsurface_projection(v.boundary, w)
    bw_in_v = subsurface_projection(w.boundary, v)
    if not bv_in_w or not bw_in_v:
        raise NotOverlapping(
            "subsurfaces do not overlap: a boundary misses the other piece")
    p_in_w = subsurface_projection(p, w)
    p_in_v = subsurface_projection(p, v)
    first = piece_set_distance(w, p_in_w, bv_in_w, curve_bound)
    second = piece_set_distance(v, p_in_v, bw_in_v, curve_bound)
    if first is None or second is None:
        raise UniverseTooSmall(
            "a gap coordinate is unresolved at curve bound %d" % curve_bound)
    return (first, second)

"""Surface signatures and the fixed reference triangulations.

A surface is recorded by its signature ``(genus, punctures)``; boundary
components and punctures are interchangeable throughout, so only one count is
kept.  Curves are stored as integer edge weights on a *reference
triangulation* of the surface, one fixed triangulation per supported
signature, shipped as versioned data.  For punctured surfaces the
triangulation is ideal (every vertex is a puncture); the closed genus-two
surface uses a one-vertex triangulation whose vertex is an ordinary point.
The once-punctured genus-two surface reuses the same complex with the vertex
declared a puncture, which is what makes filling in the puncture a
reinterpretation instead of a change of coordinates.

All combinatorial conventions live here:

* triangle sides are listed counterclockwise; side ``k`` runs from corner
  ``k`` to corner ``k + 1`` (mod 3);
* every edge has exactly two side slots, one traversing the edge along its
  global direction (``flag True``) and one against it, which forces the glued
  surface to be oriented;
* the triangle with ``flag True`` lies on the left of the edge.
"""

import json
import importlib.resources

from .errors import FormatError, UnsupportedSurface

TRI_FORMAT = "curvelab-tri-1"

#: Signatures with a shipped reference triangulation.
TRIANGULATED = ((1, 1), (0, 4), (0, 5), (1, 2), (2, 0), (2, 1))

#: Signatures the package accepts as ambient surfaces or complement pieces.
SUPPORTED = TRIANGULATED + ((0, 3),)


class SurfaceSig:
    """A genus/puncture pair with the small arithmetic used everywhere."""

    def __init__(self, genus, punctures):
        if genus < 0 or punctures < 0:
            raise ValueError("negative genus or puncture count")
        self.genus = genus
        self.punctures = punctures

    @classmethod
    def parse(cls, text):
        """Parse ``"g,n"`` into a signature."""
        try:
            g, n = (int(part) for part in text.split(","))
        except ValueError:
            raise ValueError("expected 'g,n' with two integers, got %r" % (text,))
        return cls(g, n)

    def __key(self):
        return (self.genus, self.punctures)

    def __hash__(self):
        return hash(self.__key())

    def __eq__(self, other):
        return isinstance(other, SurfaceSig) and self.__key() == other.__key()

    def __repr__(self):
        return "SurfaceSig(%d, %d)" % (self.genus, self.punctures)

    def __str__(self):
        return "S_{%d,%d}" % (self.genus, self.punctures)

    @property
    def key(self):
        return "%d,%d" % (self.genus, self.punctures)

    def complexity(self):
        """The count 3g - 3 + n of curves in a pants decomposition."""
        return 3 * self.genus - 3 + self.punctures

    def euler(self):
        """Euler characteristic of the (punctured) surface."""
        return 2 - 2 * self.genus - self.punctures

    def is_pants(self):
        return (self.genus, self.punctures) == (0, 3)

    def is_essential_piece(self):
        """Whether a complement piece of this signature supports curves."""
        return self.complexity() >= 1


def _check(cond, message):
    if not cond:
        raise FormatError(message)


class ReferenceTriangulation:
    """A fixed triangulation plus all derived corner/vertex combinatorics.

    Pre-condition: the raw data must describe a closed oriented complex —
    every edge appears in exactly two side slots with opposite directions.
    The constructor verifies this together with the expected Euler
    characteristic and vertex count for the claimed signature, so a loaded
    triangulation can be trusted downstream.
    """

    def __init__(self, sig, triangles, flags, marking, version):
        self.sig = sig
        self.triangles = tuple(tuple(t) for t in triangles)
        self.flags = tuple(tuple(f) for f in flags)
        self.marking = tuple(tuple(int(w) for w in m) for m in marking)
        self.version = version
        self.n_edges = max(max(t) for t in self.triangles) + 1
        self._derive()

    # -- construction -------------------------------------------------

    @classmethod
    def from_sides(cls, sig, sides, marking=(), version=TRI_FORMAT):
        """Build from triangles given as ``[(edge, sign), ...]`` triples."""
        triangles = [tuple(e for e, _ in tri) for tri in sides]
        flags = [tuple(s > 0 for _, s in tri) for tri in sides]
        return cls(sig, triangles, flags, marking, version)

    def _derive(self):
        # Each edge: exactly one True slot and one False slot.
        slots = {e: {} for e in range(self.n_edges)}
        for t, tri in enumerate(self.triangles):
            for k, e in enumerate(tri):
                flag = self.flags[t][k]
                _check(flag not in slots[e],
                       "edge %d traversed twice in the same direction" % e)
                slots[e][flag] = (t, k)
        for e, pair in slots.items():
            _check(len(pair) == 2, "edge %d does not have two sides" % e)
        self.edge_slots = {e: (slots[e][True], slots[e][False])
                           for e in range(self.n_edges)}

        # Corner identification.  Crossing an edge matches the start corner
        # of the True slot with the end corner of the False slot and vice
        # versa (sides of an oriented edge are traversed oppositely).
        parent = {(t, k): (t, k)
                  for t in range(len(self.triangles)) for k in range(3)}

        def find(c):
            while parent[c] != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        def union(c1, c2):
            parent[find(c1)] = find(c2)

        for e in range(self.n_edges):
            (tp, kp), (tm, km) = self.edge_slots[e]
            union((tp, kp), (tm, (km + 1) % 3))
            union((tp, (kp + 1) % 3), (tm, km))

        roots = sorted({find(c) for c in parent})
        self.corner_vertex = {c: roots.index(find(c)) for c in parent}
        self.n_vertices = len(roots)

        # Rotation around each vertex, counterclockwise.  Corner k sits
        # between incoming side k-1 and outgoing side k; with triangles
        # oriented counterclockwise the sector sweeps from side k around the
        # interior to side k-1, so the CCW walk exits across side k-1 and
        # lands on the start corner of the partner slot.
        def rot_next(corner):
            t, k = corner
            km = (k - 1) % 3
            e = self.triangles[t][km]
            (tp, kp), (tm, km2) = self.edge_slots[e]
            return (tm, km2) if (t, km) == (tp, kp) else (tp, kp)

        seen = set()
        self.vertex_corners = {}
        self.vertex_edge_ends = {}
        for c in sorted(parent):
            if c in seen:
                continue
            v = self.corner_vertex[c]
            if v in self.vertex_corners:
                continue
            orbit, ends = [], []
            cur = c
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                t, k = cur
                km = (k - 1) % 3
                e = self.triangles[t][km]
                ends.append((e, "end" if self.flags[t][km] else "start"))
                cur = rot_next(cur)
            self.vertex_corners[v] = orbit
            self.vertex_edge_ends[v] = ends
        _check(all(self.corner_vertex[c] == v
                   for v, orbit in self.vertex_corners.items() for c in orbit),
               "rotation orbits disagree with corner identification")

        # Ends of each edge as vertex ids.
        self.edge_start = {}
        self.edge_end = {}
        for e in range(self.n_edges):
            (tp, kp), (tm, km) = self.edge_slots[e]
            self.edge_start[e] = self.corner_vertex[(tp, kp)]
            self.edge_end[e] = self.corner_vertex[(tp, (kp + 1) % 3)]

        # Vertex link weights: one crossing per edge end at the vertex.
        self.link_weights = {}
        for v, ends in self.vertex_edge_ends.items():
            w = [0] * self.n_edges
            for e, _ in ends:
                w[e] += 1
            self.link_weights[v] = tuple(w)

        g, n = self.sig.genus, self.sig.punctures
        cells = self.n_vertices - self.n_edges + len(self.triangles)
        _check(cells == 2 - 2 * g, "Euler characteristic mismatch for %s" % self.sig)
        if n > 0:
            _check(self.n_vertices == n,
                   "ideal triangulation needs %d vertices, found %d"
                   % (n, self.n_vertices))
            self.real_punctures = frozenset(range(self.n_vertices))
        else:
            _check(self.n_vertices == 1,
                   "closed model expects a one-vertex triangulation")
            self.real_punctures = frozenset()

        # Connectivity across edge gluings.
        reach = {0}
        frontier = [0]
        adj = {t: set() for t in range(len(self.triangles))}
        for e in range(self.n_edges):
            (tp, _), (tm, _) = self.edge_slots[e]
            adj[tp].add(tm)
            adj[tm].add(tp)
        while frontier:
            t = frontier.pop()
            for u in adj[t]:
                if u not in reach:
                    reach.add(u)
                    frontier.append(u)
        _check(len(reach) == len(self.triangles), "triangulation is disconnected")

    # -- conveniences used by the arrangement engine -------------------

    def left_slot(self, e):
        """Slot of the triangle on the left of edge ``e``."""
        return self.edge_slots[e][0]

    def right_slot(self, e):
        return self.edge_slots[e][1]

    def slot_flag(self, t, k):
        return self.flags[t][k]

    def other_slot(self, t, k):
        e = self.triangles[t][k]
        sp, sm = self.edge_slots[e]
        return sm if (t, k) == sp else sp

    def corner_counts(self, weights):
        """Corner coefficients per triangle, or ``None`` if inadmissible.

        Corner ``j`` of a triangle with side weights ``w`` holds
        ``(w[j-1] + w[j] - w[j+1]) / 2`` arcs; all three must be nonnegative
        integers.
        """
        out = []
        for t, tri in enumerate(self.triangles):
            w = [weights[e] for e in tri]
            corners = []
            for j in range(3):
                val = w[(j - 1) % 3] + w[j % 3] - w[(j + 1) % 3]
                if val < 0 or val % 2:
                    return None
                corners.append(val // 2)
            out.append(tuple(corners))
        return out

    def is_link_vector(self, weights):
        """Vertex whose link has exactly these weights, else ``None``."""
        for v, link in self.link_weights.items():
            if tuple(weights) == link:
                return v
        return None


# -- data loading ------------------------------------------------------

_CACHE = {}


def _load_data():
    ref = importlib.resources.files("curvelab.data").joinpath("triangulations.json")
    with ref.open("r") as handle:
        data = json.load(handle)
    if data.get("format") != TRI_FORMAT:
        raise FormatError("triangulation data has format %r, expected %r"
                          % (data.get("format"), TRI_FORMAT))
    return data


def triangulation_data():
    """The raw shipped data table (cached)."""
    if "data" not in _CACHE:
        _CACHE["data"] = _load_data()
    return _CACHE["data"]


def reference_triangulation(sig):
    """The reference triangulation for ``sig``.

    Raises ``UnsupportedSurface`` for signatures without one; note the
    three-holed sphere is a supported signature but carries no essential
    curves and therefore no triangulation.
    """
    if isinstance(sig, str):
        sig = SurfaceSig.parse(sig)
    if sig.key in _CACHE:
        return _CACHE[sig.key]
    if (sig.genus, sig.punctures) not in TRIANGULATED:
        raise UnsupportedSurface("no reference triangulation for %s" % sig)
    entry = triangulation_data()["surfaces"].get(sig.key)
    if entry is None:
        raise FormatError("data file lacks surface %s" % sig.key)
    got = tuple(entry["surface"])
    if got != (sig.genus, sig.punctures):
        raise FormatError("surface entry %s claims signature %s" % (sig.key, got))
    triangles = [tuple(t) for t in entry["triangles"]]
    flags = [[None] * 3 for _ in triangles]
    for pair in entry["gluings"]:
        (tp, kp), (tm, km) = pair
        flags[tp][kp] = True
        flags[tm][km] = False
    if any(f is None for tri in flags for f in tri):
        raise FormatError("gluing table does not cover every side")
    tri = ReferenceTriangulation(sig, triangles, flags,
                                 entry.get("marking", ()),
                                 triangulation_data()["format"])
    _CACHE[sig.key] = tri
    return tri


def seed_data():
    """Shipped seed curves (genus-two chain and friends)."""
    return triangulation_data().get("seeds", {})

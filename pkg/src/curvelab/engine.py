"""Exact arrangements of curve systems on a reference triangulation.

A *system* is one multicurve drawn transversally to the triangulation: its
data are *tokens* (crossing points with triangulation edges, each carrying an
exact rational position along its edge) and *chords* (straight segments
joining two tokens across one triangle).  Several systems may be overlaid in
a single arrangement; tokens of different systems interleave along edges by
position, and chords of different systems may cross inside triangles.

Geometry inside each triangle is exact: the boundary points (corners and
tokens, counterclockwise) are placed at ``(i, i^2)`` on a parabola, so they
are in convex position, chords cross if and only if their endpoint indices
interleave, and crossing points have rational coordinates.  After every
mutation the full one-complex of the picture is rebuilt — nodes are
triangulation vertices, tokens, and crossings; faces are traced from
counterclockwise rotations — and an Euler-characteristic check guards each
rebuild.

The three mutations are the content of this module:

* ``tauten`` pulls arcs off triangle sides they enter and leave without
  progress, deleting null components on the way; a tautened single system
  has canonical edge weights.
* ``reduce_pair`` finds disk regions bounded by one arc of each system and
  empties them, two crossings at a time; when none remain the systems are in
  minimal position and the crossing count is the intersection number.
* ``smooth_all`` replaces every crossing between two systems by a pair of
  turns of fixed chirality, which is the surgery description of Dehn
  twisting.
"""

from fractions import Fraction


class EngineError(AssertionError):
    """Internal consistency violation inside the arrangement engine."""


def _require(cond, message):
    if not cond:
        raise EngineError(message)


class Region:
    """A complementary region of the wall strands, as merged faces.

    ``chi`` is the Euler characteristic of the closed-up region, ``walks``
    its boundary circuits (wall darts with the region on the left),
    ``switches`` per walk the crossing nodes where the boundary passes from
    one system's strand to the other's, and ``vertices`` the triangulation
    vertices in the region's interior.
    """

    def __init__(self, rid, faces):
        self.rid = rid
        self.faces = faces
        self.chi = None
        self.walks = []
        self.switches = []
        self.vertices = set()


class Arrangement:
    """Curve systems over one reference triangulation, with exact geometry."""

    def __init__(self, tri):
        for t, edges in enumerate(tri.triangles):
            _require(len(set(edges)) == 3, "triangle %d repeats an edge" % t)
        for e in range(tri.n_edges):
            (tp, _), (tm, _) = tri.edge_slots[e]
            _require(tp != tm, "edge %d has one triangle on both sides" % e)
        self.tri = tri
        self.tok_edge = {}
        self.tok_pos = {}
        self.tok_sys = {}
        self.chord_at = {}   # (token, triangle) -> partner token
        self._uid = 0
        self._stale = True

    # -- raw mutation helpers ------------------------------------------

    def new_token(self, sys, edge, pos):
        uid = self._uid
        self._uid += 1
        self.tok_edge[uid] = edge
        self.tok_pos[uid] = Fraction(pos)
        self.tok_sys[uid] = sys
        self._stale = True
        return uid

    def del_token(self, uid):
        del self.tok_edge[uid], self.tok_pos[uid], self.tok_sys[uid]
        self._stale = True

    def token_triangles(self, uid):
        (tp, _), (tm, _) = self.tri.edge_slots[self.tok_edge[uid]]
        return tp, tm

    def add_chord(self, t, u, w):
        _require(u != w, "degenerate chord")
        for uid in (u, w):
            _require((uid, t) not in self.chord_at,
                     "token %d already has a chord in triangle %d" % (uid, t))
            _require(t in self.token_triangles(uid),
                     "token %d does not lie on triangle %d" % (uid, t))
        self.chord_at[(u, t)] = w
        self.chord_at[(w, t)] = u
        self._stale = True

    def del_chord(self, t, u):
        w = self.chord_at.pop((u, t))
        del self.chord_at[(w, t)]
        self._stale = True
        return w

    def systems(self):
        return sorted(set(self.tok_sys.values()))

    def weights(self, sys):
        w = [0] * self.tri.n_edges
        for uid, e in self.tok_edge.items():
            if self.tok_sys[uid] == sys:
                w[e] += 1
        return tuple(w)

    # -- building a system from an admissible weight vector ------------

    def add_system(self, sys, weights):
        """Lay out the normal multicurve with these edge weights.

        The vector must be admissible (checked).  Tokens are spread evenly
        along each edge; when other systems are present the orders
        interleave by position, ties broken by system label.
        """
        tri = self.tri
        corners = tri.corner_counts(weights)
        _require(corners is not None,
                 "inadmissible weight vector %r" % (weights,))
        grid = {}
        for e in range(tri.n_edges):
            grid[e] = [self.new_token(sys, e, Fraction(i + 1, weights[e] + 1))
                       for i in range(weights[e])]

        def token_at(t, k, p):
            # p-th token along side k in the side's traversal order
            e = tri.triangles[t][k]
            idx = p if tri.flags[t][k] else weights[e] - 1 - p
            return grid[e][idx]

        for t in range(len(tri.triangles)):
            w = [weights[e] for e in tri.triangles[t]]
            a = corners[t]
            for j in range(3):
                for m in range(a[j]):
                    u = token_at(t, (j - 1) % 3, w[(j - 1) % 3] - 1 - m)
                    v = token_at(t, j, m)
                    self.add_chord(t, u, v)

    @classmethod
    def from_vector(cls, tri, weights, sys=0):
        arr = cls(tri)
        arr.add_system(sys, weights)
        return arr

    # -- derived structures --------------------------------------------

    def refresh(self):
        """Rebuild edge orders, crossings, and faces; run self-checks."""
        if not self._stale:
            return
        tri = self.tri
        for uid in self.tok_edge:
            tp, tm = self.token_triangles(uid)
            _require((uid, tp) in self.chord_at and (uid, tm) in self.chord_at,
                     "token %d is missing a chord" % uid)

        def order_key(uid):
            return (self.tok_pos[uid], self.tok_sys[uid], uid)

        self.edge_order = {
            e: sorted((u for u, ee in self.tok_edge.items() if ee == e),
                      key=order_key)
            for e in range(tri.n_edges)}
        for order in self.edge_order.values():
            for a, b in zip(order, order[1:]):
                _require(self.tok_pos[a] < self.tok_pos[b]
                         or self.tok_sys[a] != self.tok_sys[b],
                         "tokens of one system share an edge position")

        # Boundary index of each (token, triangle) incidence, CCW.
        self.bindex = {}
        for t in range(len(tri.triangles)):
            i = 0
            for k in range(3):
                i += 1  # corner k
                e = tri.triangles[t][k]
                order = self.edge_order[e]
                side = order if tri.flags[t][k] else list(reversed(order))
                for uid in side:
                    self.bindex[(uid, t)] = i
                    i += 1

        def point(t, uid):
            i = self.bindex[(uid, t)]
            return (Fraction(i), Fraction(i * i))

        # Chords per triangle, sorted for determinism.
        self.tri_chords = {t: [] for t in range(len(tri.triangles))}
        for (u, t), w in self.chord_at.items():
            if u < w:
                self.tri_chords[t].append((u, w))
        for t in self.tri_chords:
            self.tri_chords[t].sort(
                key=lambda ch, tt=t: tuple(sorted((self.bindex[(ch[0], tt)],
                                                   self.bindex[(ch[1], tt)]))))

        # Crossings: interleaved endpoint pairs, exact intersection points.
        self.crossings = []
        self.chord_hits = {}
        for t, chords in sorted(self.tri_chords.items()):
            spans = []
            for (u, w) in chords:
                spans.append(tuple(sorted((self.bindex[(u, t)],
                                           self.bindex[(w, t)]))))
                self.chord_hits[(t, u, w)] = []
            for a in range(len(chords)):
                for b in range(a + 1, len(chords)):
                    ia, ja = spans[a]
                    ib, jb = spans[b]
                    if not (ia < ib < ja < jb or ib < ia < jb < ja):
                        continue
                    ca, cb = chords[a], chords[b]
                    _require(self.tok_sys[ca[0]] != self.tok_sys[cb[0]],
                             "strands of one system cross in triangle %d" % t)
                    pt = _segment_meet(point(t, ca[0]), point(t, ca[1]),
                                       point(t, cb[0]), point(t, cb[1]))
                    xid = len(self.crossings)
                    self.crossings.append({"t": t, "chords": (ca, cb),
                                           "pt": pt})
                    self.chord_hits[(t,) + ca].append(xid)
                    self.chord_hits[(t,) + cb].append(xid)
        for (t, u, w), xids in self.chord_hits.items():
            xids.sort(key=lambda x: self.crossings[x]["pt"][0])
            if self.bindex[(u, t)] > self.bindex[(w, t)]:
                xids.reverse()

        self._build_complex(point)
        self._stale = False

    def _build_complex(self, point):
        tri = self.tri
        arcs = []    # (node_a, node_b, kind, payload)
        self.rot = {}

        def add_arc(na, nb, kind, payload):
            arcs.append((na, nb, kind, payload))
            return len(arcs) - 1

        # Edge segments.
        first_seg, last_seg, tok_esegs = {}, {}, {}
        for e in range(tri.n_edges):
            chain = ([("v", tri.edge_start[e])]
                     + [("tok", u) for u in self.edge_order[e]]
                     + [("v", tri.edge_end[e])])
            segs = [add_arc(chain[i], chain[i + 1], "edge", e)
                    for i in range(len(chain) - 1)]
            first_seg[e], last_seg[e] = segs[0], segs[-1]
            for i, uid in enumerate(self.edge_order[e]):
                tok_esegs[uid] = (segs[i], segs[i + 1])

        # Chord segments, subdivided at crossings.
        self.chord_chain = {}
        for t in sorted(self.tri_chords):
            for (u, w) in self.tri_chords[t]:
                key = (t, u, w)
                nodes = ([("tok", u)]
                         + [("x", x) for x in self.chord_hits[key]]
                         + [("tok", w)])
                segs = [add_arc(nodes[i], nodes[i + 1], "chord",
                                key + (self.tok_sys[u],))
                        for i in range(len(nodes) - 1)]
                self.chord_chain[key] = (nodes, segs)

        def chord_dart_from(key, node):
            """Dart leaving ``node`` along chord ``key``."""
            nodes, segs = self.chord_chain[key]
            if node == nodes[0]:
                return (segs[0], 0)
            if node == nodes[-1]:
                return (segs[-1], 1)
            raise EngineError("%r is not an end of chord %r" % (node, key))

        self._chord_dart_from = chord_dart_from

        # Rotations.  Vertices use the triangulation's CCW edge-end cycle;
        # tokens are [forward, left chord, backward, right chord]; crossings
        # use the exact CCW angular order of the four half-chords.
        for v, ends in tri.vertex_edge_ends.items():
            darts = []
            for e, end in ends:
                darts.append((first_seg[e], 0) if end == "start"
                             else (last_seg[e], 1))
            self.rot[("v", v)] = darts

        for uid in self.tok_edge:
            e = self.tok_edge[uid]
            tl = tri.edge_slots[e][0][0]
            tr = tri.edge_slots[e][1][0]
            prev_a, next_a = tok_esegs[uid]
            self.rot[("tok", uid)] = [
                (next_a, 0),
                chord_dart_from(self.chord_key(uid, tl), ("tok", uid)),
                (prev_a, 1),
                chord_dart_from(self.chord_key(uid, tr), ("tok", uid)),
            ]

        for xid, x in enumerate(self.crossings):
            t = x["t"]
            (u, w), (p, q) = x["chords"]
            X = x["pt"]

            def leg(endpoint, key):
                nodes, segs = self.chord_chain[key]
                i = nodes.index(("x", xid))
                toward_tail = endpoint == key[2]
                dart = (segs[i], 0) if toward_tail else (segs[i - 1], 1)
                P = point(t, endpoint)
                return (P[0] - X[0], P[1] - X[1]), dart

            vw, dart_w = leg(w, (t, u, w))
            vu, dart_u = leg(u, (t, u, w))
            vp, dart_p = leg(p, (t, p, q))
            vq, dart_q = leg(q, (t, p, q))
            if vw[0] * vp[1] - vw[1] * vp[0] > 0:
                self.rot[("x", xid)] = [dart_w, dart_p, dart_u, dart_q]
            else:
                self.rot[("x", xid)] = [dart_w, dart_q, dart_u, dart_p]

        self.arcs = arcs
        self._tok_esegs = tok_esegs
        self._trace_faces()

    def chord_key(self, uid, t):
        w = self.chord_at[(uid, t)]
        return (t,) + tuple(sorted((uid, w)))

    def _trace_faces(self):
        arcs = self.arcs
        alpha, origin = {}, {}
        for a, (na, nb, _, _) in enumerate(arcs):
            alpha[(a, 0)], alpha[(a, 1)] = (a, 1), (a, 0)
            origin[(a, 0)], origin[(a, 1)] = na, nb
        rot_index = {}
        for node, darts in self.rot.items():
            _require(len(darts) == len(set(darts)),
                     "repeated dart in rotation at %r" % (node,))
            for i, d in enumerate(darts):
                _require(origin[d] == node,
                         "rotation at %r lists a dart from %r"
                         % (node, origin[d]))
                rot_index[d] = (node, i)
        _require(len(rot_index) == 2 * len(arcs),
                 "rotations do not cover all darts")

        def sigma_inv(d):
            node, i = rot_index[d]
            darts = self.rot[node]
            return darts[(i - 1) % len(darts)]

        face_of, faces = {}, []
        for a in range(len(arcs)):
            for d0 in ((a, 0), (a, 1)):
                if d0 in face_of:
                    continue
                fid = len(faces)
                d = d0
                cycle = []
                while d not in face_of:
                    face_of[d] = fid
                    cycle.append(d)
                    d = sigma_inv(alpha[d])
                _require(d == d0, "face trace did not close")
                faces.append(cycle)
        self.faces, self.face_of = faces, face_of
        self.alpha, self.origin = alpha, origin
        self._sigma_inv = sigma_inv

        V, E, F = len(self.rot), len(arcs), len(faces)
        _require(V - E + F == 2 - 2 * self.tri.sig.genus,
                 "Euler check failed: V=%d E=%d F=%d" % (V, E, F))

    # -- queries -------------------------------------------------------

    def sys_of_dart(self, d):
        return self.arcs[d[0]][3][3]

    def crossing_count(self, sys_a=None, sys_b=None):
        self.refresh()
        if sys_a is None:
            return len(self.crossings)
        n = 0
        for x in self.crossings:
            pair = {self.tok_sys[x["chords"][0][0]],
                    self.tok_sys[x["chords"][1][0]]}
            if pair == {sys_a, sys_b}:
                n += 1
        return n

    # -- regions -------------------------------------------------------

    def regions(self, wall_systems=None):
        """Complementary regions of the strands of ``wall_systems``.

        Faces merge across triangulation-edge segments and across chord
        segments of every system not named a wall (default: all systems are
        walls).  Also stores the face-to-region map for side queries.
        """
        self.refresh()
        if wall_systems is None:
            wall_systems = set(self.tok_sys.values())

        def is_wall(a):
            _, _, kind, payload = self.arcs[a]
            return kind == "chord" and payload[3] in wall_systems

        parent = list(range(len(self.faces)))

        def find(f):
            while parent[f] != f:
                parent[f] = parent[parent[f]]
                f = parent[f]
            return f

        for a in range(len(self.arcs)):
            if not is_wall(a):
                parent[find(self.face_of[(a, 0)])] = find(self.face_of[(a, 1)])

        groups = {}
        for f in range(len(self.faces)):
            groups.setdefault(find(f), []).append(f)
        regions = []
        region_of_face = {}
        for root in sorted(groups, key=lambda r: min(groups[r])):
            reg = Region(len(regions), sorted(groups[root]))
            for f in reg.faces:
                region_of_face[f] = reg.rid
            regions.append(reg)

        # Euler characteristic: faces minus interior arcs plus interior
        # nodes; wall arcs and the nodes they touch sit on the boundary.
        int_arcs = [0] * len(regions)
        for a in range(len(self.arcs)):
            if is_wall(a):
                continue
            r = region_of_face[self.face_of[(a, 0)]]
            _require(r == region_of_face[self.face_of[(a, 1)]],
                     "merged arc lies between two regions")
            int_arcs[r] += 1
        node_darts = {}
        for d, node in self.origin.items():
            node_darts.setdefault(node, []).append(d)
        int_nodes = [0] * len(regions)
        for node, darts in sorted(node_darts.items()):
            if any(is_wall(d[0]) for d in darts):
                continue
            rs = {region_of_face[self.face_of[d]] for d in darts}
            if len(rs) == 1:
                r = rs.pop()
                int_nodes[r] += 1
                if node[0] == "v":
                    regions[r].vertices.add(node[1])
        for reg in regions:
            reg.chi = len(reg.faces) - int_arcs[reg.rid] + int_nodes[reg.rid]

        # Boundary walks: wall darts with the region on the left.
        seen = set()
        for a in range(len(self.arcs)):
            if not is_wall(a):
                continue
            for d0 in ((a, 0), (a, 1)):
                if d0 in seen:
                    continue
                reg = regions[region_of_face[self.face_of[d0]]]
                walk, d = [], d0
                while d not in seen:
                    seen.add(d)
                    walk.append(d)
                    # Face-next, then rotate past merged arcs: deleting an
                    # arc from the map removes its darts from the rotation.
                    x = self._sigma_inv(self.alpha[d])
                    while not is_wall(x[0]):
                        x = self._sigma_inv(x)
                    d = x
                _require(d == d0, "region boundary walk did not close")
                reg.walks.append(walk)

        for reg in regions:
            for walk in reg.walks:
                sw = []
                for i, d in enumerate(walk):
                    if self.sys_of_dart(walk[i - 1]) != self.sys_of_dart(d):
                        sw.append(self.origin[d])
                reg.switches.append(sw)
        self._region_of_face = region_of_face
        return regions

    def region_of_eseg_side(self, uid, forward):
        """Region holding the edge segment beside token ``uid``.

        Valid right after ``regions``; ``forward`` picks the segment toward
        the edge's end, else toward its start.
        """
        prev_a, next_a = self._tok_esegs[uid]
        a = next_a if forward else prev_a
        return self._region_of_face[self.face_of[(a, 0)]]

    def region_of_chord_side(self, key, left):
        """Region beside chord ``key`` (left of its tail-to-head dart)."""
        _, segs = self.chord_chain[key]
        d = (segs[0], 0) if left else (segs[0], 1)
        return self._region_of_face[self.face_of[d]]

    def region_of_dart(self, d):
        """Region holding the face on the left of dart ``d``.

        Valid right after ``regions``; for darts of non-wall arcs both
        sides give the same answer.
        """
        return self._region_of_face[self.face_of[d]]

    # -- tautening (single system) -------------------------------------

    def tauten(self, sys):
        """Remove arcs that enter and leave a triangle through one side.

        Only safe — and only permitted — when ``sys`` is alone in the
        arrangement, since the move slides the strand across an edge
        segment.  Components reduced to nothing (null curves) disappear.
        """
        _require(self.systems() in ([sys], []),
                 "tauten requires a lone system")
        while True:
            target = None
            for (u, t), w in sorted(self.chord_at.items()):
                if u >= w or self.tok_edge[u] != self.tok_edge[w]:
                    continue
                e = self.tok_edge[u]
                order = sorted(
                    (x for x, ee in self.tok_edge.items() if ee == e),
                    key=lambda x: (self.tok_pos[x], x))
                if abs(order.index(u) - order.index(w)) == 1:
                    target = (t, u, w)
                    break
            if target is None:
                break
            t, u, w = target
            t2 = [tt for tt in self.token_triangles(u) if tt != t][0]
            self.del_chord(t, u)
            x = self.del_chord(t2, u)
            if x == w:
                self.del_token(u)
                self.del_token(w)
                continue
            y = self.del_chord(t2, w)
            self.del_token(u)
            self.del_token(w)
            self.add_chord(t2, x, y)
        self.refresh()

    # -- component tracing ---------------------------------------------

    def components(self, sys):
        """Cycles of ``(token, triangle-of-next-chord)`` per component."""
        self.refresh()
        tokens = sorted(u for u in self.tok_sys if self.tok_sys[u] == sys)
        seen, comps = set(), []
        for start in tokens:
            if start in seen:
                continue
            cycle = []
            uid, t_next = start, self.token_triangles(start)[0]
            while uid not in seen:
                seen.add(uid)
                cycle.append((uid, t_next))
                nxt = self.chord_at[(uid, t_next)]
                t_next = [tt for tt in self.token_triangles(nxt)
                          if tt != t_next][0]
                uid = nxt
            _require(uid == start, "component trace did not close")
            comps.append(cycle)
        return comps

    def component_weights(self, sys):
        out = []
        for cycle in self.components(sys):
            w = [0] * self.tri.n_edges
            for uid, _ in cycle:
                w[self.tok_edge[uid]] += 1
            out.append(tuple(w))
        return out

    def drop_component(self, cycle):
        members = {uid for uid, _ in cycle}
        for uid, _ in cycle:
            for t in self.token_triangles(uid):
                if (uid, t) in self.chord_at:
                    w = self.del_chord(t, uid)
                    _require(w in members, "component chord leaves component")
        for uid, _ in cycle:
            self.del_token(uid)

    def system_walks(self, sys):
        """Per component: ``(node, dart)`` pairs in traversal order.

        Nodes are the tokens and crossings met along the strands; each dart
        is the chord-segment dart leaving that node toward the next one.
        The closing node of each chord is the opening node of the next, so
        it appears once.
        """
        self.refresh()
        walks = []
        for cycle in self.components(sys):
            items = []
            for i, (uid, t_next) in enumerate(cycle):
                key = self.chord_key(uid, t_next)
                nodes, segs = self.chord_chain[key]
                if nodes[0] == ("tok", uid):
                    items.extend((nodes[k], (segs[k], 0))
                                 for k in range(len(segs)))
                else:
                    _require(nodes[-1] == ("tok", uid),
                             "token is not an end of its own chord")
                    items.extend((nodes[k + 1], (segs[k], 1))
                                 for k in range(len(segs) - 1, -1, -1))
            walks.append(items)
        return walks

    def respread_positions(self):
        """Re-space token positions evenly along each edge, keeping order.

        Crossing combinatorics depend only on the boundary order, so this
        is a no-op geometrically; it guarantees strict position gaps (two
        systems may otherwise sit at equal fractions, tie-broken by id).
        """
        self.refresh()
        for e, order in self.edge_order.items():
            for i, uid in enumerate(order):
                self.tok_pos[uid] = Fraction(i + 1, len(order) + 1)
        self._stale = True
        self.refresh()

    def replicate_system(self, sys, copies):
        """Replace the strands of ``sys`` by ``copies`` parallel push-offs.

        Each extra copy sits on the strand's left, within half the gap to
        the neighboring token, so copies stay parallel: none cross each
        other, and every other count scales by exactly ``copies``.
        """
        _require(copies >= 1, "copies must be positive")
        if copies == 1:
            return
        self.respread_positions()
        comps = self.components(sys)
        offset = {}
        for cycle in comps:
            for uid, t_next in cycle:
                e = self.tok_edge[uid]
                left = self.tri.edge_slots[e][0][0]
                sign = -1 if t_next == left else 1
                order = self.edge_order[e]
                i = order.index(uid)
                p = self.tok_pos[uid]
                if sign > 0:
                    lim = (self.tok_pos[order[i + 1]]
                           if i + 1 < len(order) else Fraction(1))
                else:
                    lim = (self.tok_pos[order[i - 1]]
                           if i > 0 else Fraction(0))
                offset[uid] = (lim - p) / 2
        clones = {}
        for uid, step in sorted(offset.items()):
            for j in range(1, copies):
                clones[(uid, j)] = self.new_token(
                    sys, self.tok_edge[uid],
                    self.tok_pos[uid] + step * Fraction(j, copies))
        for cycle in comps:
            for i, (uid, t_next) in enumerate(cycle):
                nxt = cycle[(i + 1) % len(cycle)][0]
                for j in range(1, copies):
                    self.add_chord(t_next, clones[(uid, j)],
                                   clones[(nxt, j)])
        self.refresh()

    # -- minimal position for a pair of systems ------------------------

    def reduce_pair(self, sys_a, sys_b, real_punctures=None, max_steps=10000,
                    move_sys=None):
        """Remove disk regions bounded by one arc of each system.

        ``real_punctures`` overrides the triangulation's own set, which is
        how one complex serves both the closed surface and the
        once-punctured one.  ``move_sys`` pins the other system's strands:
        only arcs of ``move_sys`` are rerouted.  Returns the number of
        removals.
        """
        _require(set(self.systems()) <= {sys_a, sys_b},
                 "reduce_pair requires exactly the two systems")
        if real_punctures is None:
            real_punctures = self.tri.real_punctures
        # Overlays built from two vectors may tie positions across systems
        # (tie-broken in the ordering); the thirds-insertion below assumes
        # strict gaps, so make every position distinct first.
        self.respread_positions()
        steps = 0
        while True:
            found = self._find_bigon({sys_a, sys_b}, real_punctures)
            if found is None:
                return steps
            before = self.crossing_count()
            self.remove_bigon(found, move_sys=move_sys)
            self.refresh()
            _require(self.crossing_count() == before - 2,
                     "bigon removal changed crossings by %d"
                     % (self.crossing_count() - before))
            steps += 1
            _require(steps <= max_steps, "bigon removal did not terminate")

    def find_bigons(self, walls, real_punctures, require_puncture=False):
        """All regions currently satisfying the disk-between-arcs test.

        With ``require_puncture`` the test inverts: only disks that do trap
        a real puncture qualify (the shape sought by boundary surgery).
        """
        out = []
        for reg in self.regions(walls):
            if reg.chi != 1 or len(reg.walks) != 1:
                continue
            trapped = bool(reg.vertices & real_punctures)
            if trapped != require_puncture:
                continue
            sw = reg.switches[0]
            if len(sw) != 2 or sw[0] == sw[1]:
                continue
            if not all(node[0] == "x" for node in sw):
                continue
            if len({self.sys_of_dart(d) for d in reg.walks[0]}) != 2:
                continue
            out.append(reg)
        return out

    def _find_bigon(self, walls, real_punctures):
        bigons = self.find_bigons(walls, real_punctures)
        return bigons[0] if bigons else None

    def remove_bigon(self, reg, move_sys=None):
        """Slide one bounding arc of a bigon region across the other.

        The rerouted arc belongs to ``move_sys`` when given (the other
        system's strand is left untouched); by default the choice falls on
        whichever system happens to lead the boundary walk.
        """
        walk = reg.walks[0]
        starts = [i for i, d in enumerate(walk)
                  if self.sys_of_dart(walk[i - 1]) != self.sys_of_dart(d)]
        _require(len(starts) == 2, "region is not a two-arc disk")
        start = starts[0]
        if move_sys is not None:
            picks = [i for i in starts
                     if self.sys_of_dart(walk[i]) == move_sys]
            _require(len(picks) == 1, "no arc of system %r here" % move_sys)
            start = picks[0]
        walk = walk[start:] + walk[:start]
        sys_a = self.sys_of_dart(walk[0])
        run_a = [d for d in walk if self.sys_of_dart(d) == sys_a]
        run_b = [d for d in walk if self.sys_of_dart(d) != sys_a]
        _require(run_a + run_b == walk, "runs are not contiguous")
        x_enter_a = self.origin[walk[0]]
        x_enter_b = self.origin[run_b[0]]
        _require(x_enter_a[0] == "x" and x_enter_b[0] == "x",
                 "system switch away from a crossing")

        def run_chords_tokens(run):
            chords, tokens = [], []
            for d in run:
                key = self.arcs[d[0]][3][:3]
                if not chords or chords[-1] != key:
                    chords.append(key)
                node = self.origin[d]
                if node[0] == "tok":
                    tokens.append(node[1])
            return chords, tokens

        chords_a, tokens_a = run_chords_tokens(run_a)
        chords_b, tokens_b = run_chords_tokens(run_b)
        _require(len(chords_b) == len(tokens_b) + 1,
                 "arc-of-b bookkeeping is off")

        def far_endpoint(dart, crossing, entering):
            t, u, w, _ = self.arcs[dart[0]][3]
            nodes, _segs = self.chord_chain[(t, u, w)]
            ia = nodes.index(self.origin[dart])
            ib = nodes.index(self.origin[self.alpha[dart]])
            if entering:
                _require(self.origin[dart] == crossing,
                         "run does not start at its crossing")
                return u if ib > ia else w
            _require(self.origin[self.alpha[dart]] == crossing,
                     "run does not end at its crossing")
            return w if ib > ia else u

        u_far = far_endpoint(run_a[0], x_enter_a, True)
        u2_far = far_endpoint(run_a[-1], x_enter_b, False)

        # Insertion side per b-token: the edge segment inside the region
        # marks the region side; the new token goes the other way, one third
        # of the post-deletion gap out (thirds keep facing insertions apart).
        doomed = set(tokens_a)
        inserts = []
        for b in tokens_b:
            fwd_in = self.region_of_eseg_side(b, True) == reg.rid
            bwd_in = self.region_of_eseg_side(b, False) == reg.rid
            _require(fwd_in != bwd_in,
                     "cannot read the region side at token %d" % b)
            forward = not fwd_in
            e = self.tok_edge[b]
            order = [x for x in self.edge_order[e] if x not in doomed]
            i = order.index(b)
            here = self.tok_pos[b]
            if forward:
                limit = (self.tok_pos[order[i + 1]]
                         if i + 1 < len(order) else Fraction(1))
            else:
                limit = (self.tok_pos[order[i - 1]]
                         if i > 0 else Fraction(0))
            inserts.append((b, here + (limit - here) / 3))

        # When the first and last moved chords coincide, the run wraps its
        # whole component: the strand leaves the first crossing only to come
        # straight back along the shared chord, so both anchors sit inside
        # the run and are about to be deleted with it.
        wraps = len(chords_a) > 1 and chords_a[0] == chords_a[-1]
        _require(wraps == (u_far in doomed or u2_far in doomed),
                 "anchor tokens disagree with the wrap test")

        sys_label = self.tok_sys[u_far]
        new_tokens = [self.new_token(sys_label, self.tok_edge[b], pos)
                      for b, pos in inserts]

        for (t, u, w) in chords_a:
            if (u, t) in self.chord_at:
                self.del_chord(t, u)
        for uid in tokens_a:
            for t in self.token_triangles(uid):
                if (uid, t) in self.chord_at:
                    self.del_chord(t, uid)
            self.del_token(uid)

        # Thread the replacement parallel to the b-run but in reverse:
        # u_far sits by x_enter_a, where the b-run ends.  A wrapped run has
        # no surviving anchors; its replacement closes up on itself, with
        # one extra chord standing in for the vanished middle segment
        # (between the two crossings both ends live in its triangle).
        tri_seq = [key[0] for key in reversed(chords_b)]
        if wraps:
            _require(len(new_tokens) >= 2, "wrapped replacement too short")
            _require(tri_seq[0] == tri_seq[-1], "wrap triangles disagree")
            chain = list(reversed(new_tokens))
            for i in range(len(chain) - 1):
                self.add_chord(tri_seq[i + 1], chain[i], chain[i + 1])
            self.add_chord(tri_seq[0], chain[-1], chain[0])
            return
        chain = [u_far] + list(reversed(new_tokens)) + [u2_far]
        _require(len(tri_seq) == len(chain) - 1, "junction bookkeeping")
        for i in range(len(chain) - 1):
            self.add_chord(tri_seq[i], chain[i], chain[i + 1])

    # -- smoothing (for twisting) --------------------------------------

    def smooth_all(self, sys_a, sys_g, positive):
        """Replace every a/g crossing by turns; trace the resulting curves.

        At each crossing the four half-chords are paired so that every
        a-half joins the g-half adjacent to it counterclockwise when
        ``positive`` (clockwise otherwise); using one chirality at every
        crossing is what makes the result a twist power.  Returns component
        cycles of ``(token, triangle-of-next-gap)`` pairs in traversal
        order; components that never reach a triangulation edge bound disks
        inside a single triangle and are dropped (counted in
        ``smoothing_dropped``).
        """
        self.refresh()
        pair = {}
        for xid in range(len(self.crossings)):
            darts = self.rot[("x", xid)]
            systems = [self.sys_of_dart(d) for d in darts]
            _require(sorted(set(systems)) == sorted({sys_a, sys_g}),
                     "foreign system at crossing %d" % xid)
            for i, d in enumerate(darts):
                if systems[i] == sys_a:
                    j = (i + 1) % 4 if positive else (i - 1) % 4
                    _require(systems[j] == sys_g, "rotation not alternating")
                    pair[d] = darts[j]
                    pair[darts[j]] = d
        _require(len(pair) == 4 * len(self.crossings), "pairing incomplete")

        def step(d):
            """Follow dart ``d`` to its far node; return (visited, next)."""
            far = self.origin[self.alpha[d]]
            if far[0] == "tok":
                uid = far[1]
                t_in = self.arcs[d[0]][3][0]
                t_out = [t for t in self.token_triangles(uid)
                         if t != t_in][0]
                out = self._chord_dart_from(self.chord_key(uid, t_out), far)
                return (uid, t_out), out
            _require(far[0] == "x", "chord piece ends at %r" % (far,))
            return None, pair[self.alpha[d]]

        seen, cycles, dropped = set(), [], 0
        for a in range(len(self.arcs)):
            if self.arcs[a][2] != "chord":
                continue
            for d0 in ((a, 0), (a, 1)):
                if d0 in seen:
                    continue
                tokens, d = [], d0
                while d not in seen:
                    seen.add(d)
                    seen.add(self.alpha[d])
                    visited, d = step(d)
                    if visited is not None:
                        tokens.append(visited)
                _require(d == d0, "smoothing trace did not close")
                if tokens:
                    cycles.append(tokens)
                else:
                    dropped += 1
        self.smoothing_dropped = dropped
        return cycles


def rebuild_from_cycles(tri, cycles, src, sys=0):
    """Fresh single-system arrangement from traced token cycles.

    ``cycles`` holds ``(token, triangle)`` pairs referring to tokens of
    ``src``; their relative order along each edge is preserved (with the
    same position-then-system tie-break the source used) and positions are
    re-spread evenly.
    """
    per_edge = {}
    for cycle in cycles:
        for uid, _ in cycle:
            per_edge.setdefault(src.tok_edge[uid], []).append(uid)
    mapping = {}
    arr = Arrangement(tri)
    for e in sorted(per_edge):
        uids = sorted(per_edge[e],
                      key=lambda u: (src.tok_pos[u], src.tok_sys[u], u))
        _require(len(set(uids)) == len(uids), "token reused across cycles")
        for i, uid in enumerate(uids):
            mapping[uid] = arr.new_token(sys, e,
                                         Fraction(i + 1, len(uids) + 1))
    for cycle in cycles:
        for i, (uid, t) in enumerate(cycle):
            nxt = cycle[(i + 1) % len(cycle)][0]
            arr.add_chord(t, mapping[uid], mapping[nxt])
    arr.refresh()
    return arr


def extract_system(arr, sys, out_sys=0):
    """Copy one system of ``arr`` into its own fresh arrangement."""
    return rebuild_from_cycles(arr.tri, arr.components(sys), arr, out_sys)


def _segment_meet(p1, p2, p3, p4):
    """Exact intersection point of segments p1p2 and p3p4 (must cross)."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (p4[0] - p3[0], p4[1] - p3[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    _require(den != 0, "parallel chords reported as crossing")
    s = ((p3[0] - p1[0]) * d2[1] - (p3[1] - p1[1]) * d2[0]) / den
    return (p1[0] + s * d1[0], p1[1] + s * d1[1])

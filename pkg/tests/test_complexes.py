"""Subsurfaces, projections, graph snapshots, estimates."""

import os

import pytest

from curvelab import complexes as cx
from curvelab import curves as cv
from curvelab.errors import (DisconnectedSubsurface, FormatError,
                             InvalidDescriptor, NotOverlapping, NotProper,
                             NotSeparating, SurfaceMismatch, UnknownVertex)
from curvelab.surfaces import SurfaceSig, reference_triangulation

S05 = SurfaceSig(0, 5)
S11 = SurfaceSig(1, 1)


def one_curve_descriptor(sig, index=0, piece=None):
    """Descriptor for a piece of the first enumerated curve on ``sig``."""
    c = cv.enumerate_curves(sig, 2)[index]
    if piece is None:
        piece = cv.cut_along(c).essential_pieces[0].index
    return cx.SubsurfaceDescriptor(c, (piece,))


def small_pants(sig, bound=2):
    """All pants decompositions on ``sig`` within the weight bound."""
    want = sig.complexity()
    out = []
    for m in cv.enumerate_multicurves(sig, bound):
        if m.n_components != want:
            continue
        try:
            out.append(cx.as_pants(m))
        except InvalidDescriptor:
            continue
    return out


def test_descriptor_validation():
    """Empty boundaries, bad piece indices and pants pieces all raise"""
    c = cv.enumerate_curves(S05, 1)[0]
    with pytest.raises(NotProper):
        cx.SubsurfaceDescriptor(None, (0,))
    with pytest.raises(InvalidDescriptor):
        cx.SubsurfaceDescriptor(c, ())
    with pytest.raises(InvalidDescriptor):
        cx.SubsurfaceDescriptor(c, (9,))
    pants_piece = next(p.index for p in cv.cut_along(c).pieces
                       if p.sig == SurfaceSig(0, 3))
    with pytest.raises(InvalidDescriptor):
        cx.SubsurfaceDescriptor(c, (pants_piece,))


def test_descriptor_piece_signature():
    """A one-curve cut of the five-holed sphere selects a four-holed one"""
    desc = one_curve_descriptor(S05)
    assert desc.is_connected()
    assert desc.piece_sig() == SurfaceSig(0, 4)


def test_classification_by_complement():
    """A piece is separating exactly when an essential piece is left over"""
    for c in cv.enumerate_curves(S05, 1):
        for desc in cx.subsurfaces_of(c):
            assert cx.classify_subsurface(desc) == "nonseparating"
    sep = next(c for c in cv.enumerate_curves(SurfaceSig(2, 1), 2)
               if cv.is_separating_multicurve(c))
    for desc in cx.subsurfaces_of(sep):
        assert cx.classify_subsurface(desc) == "separating"


def test_projection_lands_in_the_piece():
    """Projected curves are disjoint from the boundary and live inside"""
    desc = one_curve_descriptor(S05)
    target = desc.selected[0]
    seen = 0
    for x in cv.enumerate_curves(S05, 2):
        for g in cx.subsurface_projection(x, desc):
            assert cv.intersection_number(g, desc.boundary) == 0
            assert cv.locate_in_cut(desc.cut, g) == target
            seen += 1
    assert seen > 0


def test_projection_fixes_disjoint_curves():
    """A curve already inside the piece projects to itself"""
    desc = one_curve_descriptor(S05)
    target = desc.selected[0]
    for x in cv.enumerate_curves(S05, 2):
        if x == desc.boundary:
            continue
        if cv.intersection_number(x, desc.boundary) == 0 \
                and cv.locate_in_cut(desc.cut, x) == target:
            assert cx.subsurface_projection(x, desc) == (x,)


def test_projection_of_boundary_is_empty():
    """The boundary itself has nothing to project"""
    desc = one_curve_descriptor(S05)
    assert cx.subsurface_projection(desc.boundary, desc) == ()


def test_projection_twist_invariance():
    """Twisting about the boundary never moves the projection"""
    from curvelab.twists import apply_twist, twist_word
    desc = one_curve_descriptor(S05)
    word = twist_word(desc.boundary.tri, [("c", desc.boundary, 2)])
    checked = 0
    for x in cv.enumerate_curves(S05, 2):
        if cv.intersection_number(x, desc.boundary) == 0:
            continue
        moved = apply_twist(word, x)
        assert (cx.subsurface_projection(moved, desc)
                == cx.subsurface_projection(x, desc))
        checked += 1
        if checked == 6:
            break
    assert checked == 6


def test_curve_adjacency_conventions():
    """Disjointness on big surfaces, minimal intersection at complexity one"""
    a, b = cv.enumerate_curves(S05, 1)[:2]
    assert cx.curve_adjacent(a, b) == (cv.intersection_number(a, b) == 0)
    assert not cx.curve_adjacent(a, a)
    t = {c.weights: c for c in cv.enumerate_curves(S11, 1)}
    assert cx.curve_adjacent(t[(0, 1, 1)], t[(1, 0, 1)])
    f = {c.weights: c for c in cv.enumerate_curves(SurfaceSig(0, 4), 2)}
    pair = sorted(f)[:2]
    want = cv.intersection_number(f[pair[0]], f[pair[1]]) == 2
    assert cx.curve_adjacent(f[pair[0]], f[pair[1]]) == want


def test_pants_validation():
    """Too few components or a non-pants complement is rejected"""
    c = cv.enumerate_curves(S05, 1)[0]
    with pytest.raises(InvalidDescriptor):
        cx.as_pants(c)
    decs = small_pants(S05)
    assert decs and all(p.n_components == 2 for p in decs)


def test_pants_adjacency_is_an_elementary_move():
    """Neighbours swap one curve; everything else stays put"""
    decs = small_pants(S05)
    p = decs[0]
    adjacent = [q for q in decs if cx.pants_adjacent(p, q)]
    assert adjacent
    for q in adjacent:
        shared = set(p.components) & set(q.components)
        assert len(shared) == p.n_components - 1
    assert not cx.pants_adjacent(p, p)


def test_pants_neighbors_are_adjacent():
    """Every listed neighbour really is one elementary move away"""
    p = small_pants(S05)[0]
    nb = cx.pants_neighbors(p, 2)
    assert nb
    for q in nb:
        assert cx.pants_adjacent(p, q)
        assert cx.pants_adjacent(q, p)


def test_sep_adjacency_needs_separating_input():
    """Nonseparating multicurves are refused up front"""
    c = cv.enumerate_curves(S05, 1)[0]
    with pytest.raises(NotSeparating):
        cx.sep_adjacent(c, c)


def test_sep_prime_refines_sep():
    """Disjoint adjacency implies plain adjacency on the genus-two surface"""
    seps = [c for c in cv.enumerate_multicurves(SurfaceSig(2, 1), 2)
            if cv.is_separating_multicurve(c)]
    cases = 0
    for i, c in enumerate(seps):
        for d in seps[i + 1:]:
            if cx.sep_prime_adjacent(c, d):
                assert cx.sep_adjacent(c, d)
                assert cv.intersection_number(c, d) == 0
                cases += 1
        if cases >= 2:
            break
    assert cases >= 1


def test_extension_completes_to_pants():
    """Extending a curve by a pants decomposition yields a full one"""
    decs = small_pants(S05)
    c = cv.enumerate_curves(S05, 1)[0]
    x = next(p for p in decs if c.components[0] not in p.components)
    ext = cx.extend_multicurve(c, x)
    assert ext.n_components == S05.complexity()
    assert cx.region_contains(c, ext)


def test_extension_of_empty_is_identity():
    """An empty multicurve constrains nothing"""
    x = small_pants(S05)[0]
    empty = cv.NormalMulticurve(x.tri, ())
    assert cx.extend_multicurve(empty, x) == x


def test_region_membership():
    """A region holds exactly the decompositions through its multicurve"""
    decs = small_pants(S05)
    c = cv.NormalMulticurve(decs[0].tri, decs[0].components[:1])
    inside = [p for p in decs if cx.region_contains(c, p)]
    assert decs[0] in inside
    assert len(inside) < len(decs)


def test_x_region_wants_a_closed_curve():
    """The closed-surface region test rejects punctured input"""
    seps = [c for c in cv.enumerate_multicurves(SurfaceSig(2, 1), 2)
            if cv.is_separating_multicurve(c)]
    with pytest.raises(SurfaceMismatch):
        cx.x_region_contains(seps[0], seps[0])


def test_project_pants_fills_the_piece():
    """A full ambient decomposition projects onto a full one inside"""
    desc = one_curve_descriptor(S05)
    for p in small_pants(S05)[:4]:
        inner = cx.project_pants(p, desc)
        assert inner.n_components == desc.piece_sig().complexity()
        assert cv.intersection_number(inner, desc.boundary) == 0


def test_snapshot_soundness():
    """Edges of a Farey ball are exactly the minimal-intersection pairs"""
    snap = cx.build_snapshot("curve", cv.enumerate_curves(S11, 1)[0], 4, 2)
    keys = sorted(snap.vertices)
    for k in keys:
        assert k not in snap.adjacency[k]
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            want = cx.curve_adjacent(snap.vertices[a], snap.vertices[b])
            assert (b in snap.adjacency[a]) == want
            assert (a in snap.adjacency[b]) == want


def test_snapshot_layers_respect_radius():
    """Every vertex sits in a BFS layer no deeper than the radius"""
    snap = cx.build_snapshot("curve", cv.enumerate_curves(S11, 1)[0], 4, 2)
    assert snap.layer[cx._vertex_key(snap.basepoint)] == 0
    assert max(snap.layer.values()) <= 2
    for k, lay in snap.layer.items():
        if lay > 0:
            assert any(snap.layer[n] == lay - 1 for n in snap.adjacency[k])


def test_snapshot_build_is_deterministic():
    """Two builds from the same arguments agree exactly"""
    base = cv.enumerate_curves(S11, 1)[0]
    a = cx.build_snapshot("curve", base, 4, 2)
    b = cx.build_snapshot("curve", base, 4, 2)
    assert sorted(a.vertices) == sorted(b.vertices)
    assert a.adjacency == b.adjacency
    assert a.layer == b.layer


def test_graph_distance_and_unknown_vertex():
    """Distances refuse foreign curves"""
    base = cv.enumerate_curves(S11, 1)[0]
    snap = cx.build_snapshot("curve", base, 4, 2)
    assert cx.graph_distance(snap, base, base) == 0
    nb_key = snap.adjacency[cx._vertex_key(base)][0]
    assert cx.graph_distance(snap, base, snap.vertices[nb_key]) == 1
    stranger = cv.enumerate_curves(S05, 1)[0]
    with pytest.raises(UnknownVertex):
        cx.graph_distance(snap, base, stranger)


def test_graph_distance_reports_unreachable():
    """A snapshot with no edges yields honest None distances"""
    a, b = cv.enumerate_curves(S11, 1)[:2]
    snap = cx.GraphSnapshot("curve", S11, 1, 0, cx._vertex_key(a),
                            {cx._vertex_key(a): a, cx._vertex_key(b): b},
                            {cx._vertex_key(a): (), cx._vertex_key(b): ()},
                            {cx._vertex_key(a): 0, cx._vertex_key(b): 0})
    assert cx.graph_distance(snap, a, b) is None


def test_snapshot_roundtrip(tmp_path):
    """Saving and loading reproduces the snapshot byte for byte"""
    snap = cx.build_snapshot("curve", cv.enumerate_curves(S11, 1)[0], 4, 2)
    path = cx.save_snapshot(snap, tmp_path)
    again = cx.load_snapshot(path)
    assert sorted(again.vertices) == sorted(snap.vertices)
    assert again.adjacency == snap.adjacency
    assert cx.save_snapshot(again, tmp_path) == path


def test_snapshot_rejects_tampering(tmp_path):
    """A digest mismatch in the filename is caught on load"""
    snap = cx.build_snapshot("curve", cv.enumerate_curves(S11, 1)[0], 3, 1)
    path = cx.save_snapshot(snap, tmp_path)
    name = os.path.basename(path)
    bad = tmp_path / (name[:-17] + "000000000000.json")
    bad.write_bytes(open(path, "rb").read())
    with pytest.raises(FormatError):
        cx.load_snapshot(str(bad))


def test_subsurface_universe_is_exact_boundaries():
    """Universe entries use their whole multicurve as the piece boundary"""
    uni = cx.subsurface_universe(S05, 1)
    assert uni
    for desc in uni:
        piece = desc.cut.pieces[desc.selected[0]]
        assert set(piece.boundary) == set(range(desc.boundary.n_components))
        assert desc.piece_sig().is_essential_piece()


def test_piece_set_distance_basics():
    """Shared curves give zero; curves beyond the bound give None"""
    desc = cx.subsurface_universe(S05, 1)[0]
    verts, _ = cx._piece_graph(desc, 2)
    inside = [verts[k] for k in sorted(verts)]
    assert cx.piece_set_distance(desc, inside[:1], inside[:1], 2) == 0
    heavy = [c for c in cv.enumerate_curves(S05, 3) if max(c.weights) > 2
             and cv.intersection_number(c, desc.boundary) == 0]
    if heavy:
        assert cx.piece_set_distance(desc, heavy[:1], inside[:1], 2) is None


def test_estimate_self_distance_is_zero():
    """A decomposition is at estimated distance zero from itself"""
    uni = cx.subsurface_universe(S05, 1)
    p = small_pants(S05)[0]
    est = cx.distance_formula_estimate(p, p, 1, uni, curve_bound=3)
    assert est.total == 0 and est.terms == ()


def test_estimate_monotone_in_threshold():
    """Raising the threshold can only discard terms"""
    uni = cx.subsurface_universe(S05, 1)
    p, q = small_pants(S05)[:2]
    with pytest.raises(InvalidDescriptor):
        cx.distance_formula_estimate(p, q, 0, uni)
    prev = None
    for m in (1, 2, 3):
        est = cx.distance_formula_estimate(p, q, m, uni, curve_bound=3)
        assert all(d >= m for _, d in est.terms)
        if prev is not None:
            assert est.total <= prev
        prev = est.total


def test_behrstock_gap_refuses_same_piece():
    """A subsurface never overlaps itself"""
    uni = cx.subsurface_universe(S05, 1)
    p = small_pants(S05)[0]
    with pytest.raises(NotOverlapping):
        cx.behrstock_gap(p, uni[0], uni[0])


def test_behrstock_gap_on_overlapping_pieces():
    """Crossing boundaries give a defined, small gap"""
    uni = cx.subsurface_universe(S05, 1)
    w, v = None, None
    for i, a in enumerate(uni):
        for b in uni[i + 1:]:
            if cv.intersection_number(a.boundary, b.boundary) > 0:
                w, v = a, b
                break
        if w:
            break
    p = small_pants(S05)[0]
    gap = cx.behrstock_gap(p, w, v, curve_bound=3)
    assert len(gap) == 2 and min(gap) <= 10

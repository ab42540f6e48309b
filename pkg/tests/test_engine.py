"""Arrangement engine: crossings, regions, reduction, replication."""

import math

from curvelab.engine import Arrangement, extract_system
from curvelab.surfaces import SurfaceSig, reference_triangulation

TORUS = reference_triangulation(SurfaceSig(1, 1))


def slope_vec(p, q):
    """Edge weights of the (p, q) curve on the standard torus complex."""
    return (abs(q), abs(p), abs(p + q))


def overlay(va, vb):
    arr = Arrangement(TORUS)
    arr.add_system(0, va)
    arr.add_system(1, vb)
    arr.refresh()
    return arr


def test_parallel_systems_reduce_to_disjoint():
    """Two copies of one slope pull apart completely"""
    arr = overlay(slope_vec(1, 0), slope_vec(1, 0))
    arr.reduce_pair(0, 1, real_punctures=TORUS.real_punctures)
    assert arr.crossing_count() == 0


def test_transverse_slopes_cross_once():
    """The meridian and longitude meet exactly once"""
    arr = overlay(slope_vec(1, 0), slope_vec(0, 1))
    assert arr.crossing_count() == 1


def test_reduce_pair_reaches_slope_determinant():
    """Bigon removal lands on |ps - qr| for a spread of slope pairs"""
    pairs = [((1, 0), (0, 1)), ((1, 1), (1, -1)), ((2, 1), (1, 2)),
             ((3, 2), (2, -3)), ((1, 2), (2, 1)), ((4, 1), (1, 0))]
    for (p, q), (r, s) in pairs:
        arr = overlay(slope_vec(p, q), slope_vec(r, s))
        arr.reduce_pair(0, 1, real_punctures=TORUS.real_punctures)
        assert arr.crossing_count() == abs(p * s - q * r)


def test_region_of_torus_complement():
    """Cutting the torus along one curve leaves a single region"""
    arr = Arrangement.from_vector(TORUS, slope_vec(1, 0))
    regs = arr.regions({0})
    assert len(regs) == 1
    # complement of a nonseparating torus curve: chi 0, two boundary walks
    assert regs[0].chi == 0
    assert len(regs[0].walks) == 2
    assert regs[0].vertices == {0}


def test_system_walks_trace_every_token_once():
    """A component walk visits each of its tokens exactly once"""
    arr = overlay(slope_vec(1, 2), slope_vec(1, 0))
    walks = arr.system_walks(0)
    assert len(walks) == 1
    tokens = [node for node, _ in walks[0] if node[0] == "tok"]
    expected = sorted(u for u, s in arr.tok_sys.items() if s == 0)
    assert sorted(t[1] for t in tokens) == expected
    crossings = [node for node, _ in walks[0] if node[0] == "x"]
    assert len(crossings) == arr.crossing_count()


def test_replicate_system_multiplies_crossings():
    """n parallel copies of a slope meet a transversal n times as often"""
    for copies in (2, 3):
        arr = overlay(slope_vec(1, 1), slope_vec(1, 0))
        arr.reduce_pair(0, 1, real_punctures=TORUS.real_punctures)
        base = arr.crossing_count()
        arr.replicate_system(0, copies)
        assert arr.crossing_count() == copies * base
        # replication preserves per-copy weights
        assert arr.weights(0) == tuple(copies * w for w in slope_vec(1, 1))


def test_extract_system_keeps_weights():
    """Pulling one system out of an overlay preserves its weight vector"""
    arr = overlay(slope_vec(2, 1), slope_vec(1, -1))
    arr.reduce_pair(0, 1, real_punctures=TORUS.real_punctures)
    alone = extract_system(arr, 1)
    assert alone.weights(0) == slope_vec(1, -1)
    assert alone.crossing_count() == 0


def test_components_split_disjoint_union():
    """A two-component system reports two cycles with the right weights"""
    va = slope_vec(1, 0)
    arr = Arrangement.from_vector(TORUS, tuple(2 * w for w in va))
    comps = arr.component_weights(0)
    assert len(comps) == 2
    assert all(tuple(c) == tuple(va) for c in comps)


def test_drop_component_removes_one_copy():
    """Dropping one cycle of a doubled curve leaves a single copy"""
    va = slope_vec(0, 1)
    arr = Arrangement.from_vector(TORUS, tuple(2 * w for w in va))
    arr.drop_component(arr.components(0)[0])
    assert arr.weights(0) == va
    assert len(arr.components(0)) == 1


def test_euler_characteristic_across_surfaces():
    """Region Euler characteristics add up to chi(S) on every surface"""
    for g, n in ((1, 1), (0, 4), (0, 5), (1, 2), (2, 1), (2, 0)):
        tri = reference_triangulation(SurfaceSig(g, n))
        weights = tuple(2 for _ in range(tri.n_edges))
        if tri.corner_counts(weights) is None:
            weights = tuple(0 for _ in range(tri.n_edges))
        arr = Arrangement.from_vector(tri, weights)
        regs = arr.regions({0})
        total = sum(r.chi for r in regs)
        assert total == 2 - 2 * g  # punctures are interior vertices here

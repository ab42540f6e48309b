#!/usr/bin/env python3
"""Choose marking systems and the genus-two seed data, then freeze them.

The reference complexes are already stored; this tool fills in the two
data-driven pieces that the library trusts at run time:

* a marking system per surface: a short list of curves whose intersection
  rows separate every class enumerable within the validation bound.  On
  punctured surfaces taut weight vectors are canonical, so the vectors
  themselves are the ground truth the rows are checked against.  On the
  closed genus-two surface vectors are representative-dependent; ground
  truth there is the partition of taut vectors by full intersection
  profile against the enumerated universe, cross-checked pairwise by
  disjointness and cut signatures.

* the genus-two seed: a five-curve chain c_1..c_5 (consecutive curves
  meet once, all other pairs are disjoint), the waist curve alpha_0
  (separating, meeting only the middle chain curve, twice), and the
  twist word in the chain curves whose action moves alpha_0 to a curve
  meeting it four times.  The correspondence between chain labels and
  the stored vectors is fixed by that intersection fact; chirality and
  chain orientation are searched here, once, and then frozen.

Run from the repository root:

    python3 tools/make_marking_data.py [--write]

Without --write the chosen data is printed but not stored.
"""

import argparse
import itertools
import json
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from curvelab import curves as cv
from curvelab import twists as tw
from curvelab.engine import Arrangement
from curvelab.surfaces import SurfaceSig, reference_triangulation

DATA_PATH = os.path.join(os.path.dirname(__file__), "..",
                         "src", "curvelab", "data", "triangulations.json")

# validation bound per surface: the marking must separate everything
# enumerable within it
VALIDATION_BOUNDS = {
    "1,1": 6,
    "0,4": 4,
    "0,5": 3,
    "1,2": 4,
    "2,1": 3,
    "2,0": 3,
}
CANDIDATE_BOUND = 2
MAX_CANDIDATES = 30


def closed_i(tri, u, v):
    return cv._vector_i(tri, u, v, False)


def taut_singles(tri, bound):
    """All single-component essential taut vectors within the bound."""
    out = []
    for vec in cv._admissible_vectors(tri, bound, 5000000):
        if not any(vec):
            continue
        arr = Arrangement.from_vector(tri, vec)
        arr.tauten(0)
        comps = arr.component_weights(0)
        if len(comps) != 1 or tuple(comps[0]) != tuple(vec):
            continue
        if cv._component_role(tri, vec) == "essential":
            out.append(tuple(vec))
    return out


def closed_cut_sig(tri, vec):
    arr = Arrangement.from_vector(tri, vec)
    return tuple(sorted(p["sig"].key for p in cv._cut_pieces(tri, arr)))


def partition_closed_classes(tri, singles, probes):
    """Group taut vectors that represent one closed isotopy class.

    First pass groups by intersection profile against the probe set;
    within a group, vectors are confirmed equivalent by full profile
    against every enumerated single, pairwise disjointness, and equal
    cut signatures.
    """
    by_profile = {}
    for v in singles:
        key = tuple(closed_i(tri, v, p) for p in probes)
        by_profile.setdefault(key, []).append(v)
    classes = []
    for key in sorted(by_profile):
        group = by_profile[key]
        if len(group) == 1:
            classes.append(group)
            continue
        refined = {}
        for v in group:
            full = tuple(closed_i(tri, v, u) for u in singles)
            refined.setdefault((closed_cut_sig(tri, v), full),
                               []).append(v)
        for sub in refined.values():
            for a, b in itertools.combinations(sub, 2):
                if closed_i(tri, a, b) != 0:
                    raise AssertionError(
                        "profile-equal vectors %r, %r are not disjoint"
                        % (a, b))
            classes.append(sorted(sub))
    return sorted(classes)


def choose_marking(pair_i, reps, candidates, start=(), window=20):
    """Greedy marking: extend until every class has a distinct row.

    Each step scores candidates by how many row collisions they leave;
    a candidate only needs intersections with the currently colliding
    classes, so late steps are cheap.  The scan stops early on a full
    split, or after ``window`` scored candidates once some improvement
    is in hand; with no improvement it keeps walking the pool.
    """
    marking = list(start)

    def collision_groups():
        seen = {}
        for rep in reps:
            seen.setdefault(tuple(pair_i(rep, m) for m in marking),
                            []).append(rep)
        return [g for g in seen.values() if len(g) > 1]

    groups = collision_groups()
    while groups:
        left = sum(len(g) - 1 for g in groups)
        best, best_left, scored = None, left, 0
        for cand in candidates:
            if any(cand == m for m in marking):
                continue
            count = 0
            for group in groups:
                splits = {}
                for rep in group:
                    value = pair_i(rep, cand)
                    splits[value] = splits.get(value, 0) + 1
                count += sum(n - 1 for n in splits.values())
            scored += 1
            if count < best_left:
                best, best_left = cand, count
            if best_left == 0 or (best is not None and scored >= window):
                break
        if best is None:
            raise AssertionError(
                "no candidate resolves the %d remaining collisions" % left)
        marking.append(best)
        groups = collision_groups()
    return marking


def marking_for_punctured(sig, report):
    """Pick and validate a marking on a punctured surface."""
    tri = reference_triangulation(sig)
    bound = VALIDATION_BOUNDS[sig.key]
    t0 = time.time()
    universe = taut_singles(tri, bound)
    candidates = sorted(universe, key=lambda v: (max(v), sum(v), v))

    def pair_i(vec, m):
        return cv._vector_i(tri, vec, m, True)

    marking = choose_marking(pair_i, universe, candidates)
    rows = {}
    for v in universe:
        key = tuple(pair_i(v, m) for m in marking)
        assert key not in rows, "marking collision on %r, %r" % (rows[key], v)
        rows[key] = v
    report.append("%s: marking of %d curves separates %d singles "
                  "at bound %d (%.1fs)"
                  % (sig.key, len(marking), len(universe), bound,
                     time.time() - t0))
    return [list(m) for m in marking]


def find_chain(vectors, chain_i):
    """Five classes with consecutive meetings once, other pairs disjoint."""
    once = {v: [] for v in vectors}
    for a, b in itertools.combinations(vectors, 2):
        if chain_i(a, b) == 1:
            once[a].append(b)
            once[b].append(a)

    def extend(chain):
        if len(chain) == 5:
            return chain
        for nxt in once[chain[-1]]:
            if any(nxt == c for c in chain):
                continue
            if any(chain_i(nxt, c) != 0 for c in chain[:-1]):
                continue
            got = extend(chain + [nxt])
            if got is not None:
                return got
        return None

    for start in vectors:
        got = extend([start])
        if got is not None:
            return got
    return None


def find_waist(up, down, chain):
    """A separating curve meeting only the chain's middle curve, twice."""
    for vec in taut_singles(up, 2):
        pat = tuple(closed_i(down, vec, c) for c in chain)
        if pat != (0, 0, 2, 0, 0):
            continue
        c = cv.canonicalize(vec, up)
        if cv.is_separating_multicurve(c):
            return tuple(c.weights)
    return None


def find_seed_word(up, down, chain, alpha0):
    """Exponent signs and orientation pinning the figure's twist word.

    Returns the frozen word text, the growth of the waist intersections
    under iteration (first three powers), and the label-to-vector map
    for the orientation that realizes intersection four.
    """
    alpha_up = cv.canonicalize(alpha0, up)
    for flip in (1, -1):
        for order in (list(chain), list(reversed(chain))):
            c1, c2, c3, c4, c5 = order
            factors = [("a3", c5, flip), ("b2", c4, -flip),
                       ("b1", c2, -flip), ("a2", c3, flip),
                       ("a1", c1, flip)]
            curves = {name: cv.canonicalize(v, up)
                      for name, v, _ in factors}
            word = tw.twist_word(
                up, [(n, curves[n], e) for n, v, e in factors])
            image = tw.apply_twist(word, alpha_up)
            got = closed_i(down, tuple(image.weights), alpha0)
            if got != 4:
                continue
            growth = [got]
            for _ in range(2):
                image = tw.apply_twist(word, image)
                growth.append(closed_i(down, tuple(image.weights), alpha0))
            text = " ".join("T[%s]^%d" % (n, e) for n, _, e in factors)
            named = {n: list(v) for n, v, _ in factors}
            return text, growth, named
    raise AssertionError("no orientation/chirality gives intersection 4")


def genus_two_data(report):
    """Marking, chain, waist curve and twist word for the genus-two pair."""
    up = reference_triangulation(SurfaceSig(2, 1))
    down = reference_triangulation(SurfaceSig(2, 0))
    bound = VALIDATION_BOUNDS["2,0"]

    t0 = time.time()
    singles = taut_singles(down, bound)
    probes = sorted((v for v in singles if max(v) <= CANDIDATE_BOUND),
                    key=lambda v: (sum(v), v))[:MAX_CANDIDATES]
    classes = partition_closed_classes(down, singles, probes)
    reps = [g[0] for g in classes]
    swept = [g for g in classes if len(g) > 1]
    report.append("2,0: %d taut single vectors form %d classes at bound %d,"
                  " %d classes with several vectors (%.1fs)"
                  % (len(singles), len(classes), bound, len(swept),
                     time.time() - t0))

    t0 = time.time()
    small = [r for r in reps if max(r) <= CANDIDATE_BOUND]
    imat = {}

    def chain_i(a, b):
        if (a, b) not in imat:
            imat[(a, b)] = imat[(b, a)] = closed_i(down, a, b)
        return imat[(a, b)]

    chain = find_chain(small, chain_i)
    if chain is None:
        raise AssertionError("no five-curve chain among small vectors")
    report.append("2,0: chain found (%.1fs): %s"
                  % (time.time() - t0, [list(c) for c in chain]))

    t0 = time.time()
    alpha0 = find_waist(up, down, chain)
    if alpha0 is None:
        raise AssertionError("no waist curve matches the chain")
    report.append("2,0: waist curve (%.1fs): %s"
                  % (time.time() - t0, list(alpha0)))

    t0 = time.time()
    word, growth, named = find_seed_word(up, down, chain, alpha0)
    report.append("2,0: seed word %r; waist image intersections %s (%.1fs)"
                  % (word, growth, time.time() - t0))

    t0 = time.time()

    def pair_i(vec, m):
        return closed_i(down, vec, m)

    start = [tuple(named[n]) for n in ("a1", "b1", "a2", "b2", "a3")]
    start.append(alpha0)
    pool = sorted(reps, key=lambda v: (max(v), sum(v), v))
    marking = choose_marking(pair_i, reps, pool, start=start)
    seen = {}
    for rep in reps:
        key = tuple(pair_i(rep, m) for m in marking)
        assert key not in seen, "closed marking collision"
        seen[key] = rep
    report.append("2,0: marking of %d curves separates %d classes (%.1fs)"
                  % (len(marking), len(reps), time.time() - t0))

    named["alpha0"] = list(alpha0)
    return [list(m) for m in marking], named, word


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--write", action="store_true",
                        help="store the results in the shipped data file")
    args = parser.parse_args()

    report = []
    markings = {}
    for key in ("1,1", "0,4", "0,5", "1,2", "2,1"):
        markings[key] = marking_for_punctured(SurfaceSig.parse(key), report)
        print(report[-1])

    closed_marking, seed_curves, word = genus_two_data(report)
    for line in report[len(markings):]:
        print(line)
    markings["2,0"] = closed_marking

    loops = {}
    tri_up = reference_triangulation(SurfaceSig(2, 1))
    for e in range(tri_up.n_edges):
        loops["e%d" % e] = e

    seeds = {}
    for key in ("2,1", "2,0"):
        seeds[key] = {
            "curves": seed_curves,
            "word": word,
            "loops": loops if key == "2,1" else {},
            "note": ("chain a1,b1,a2,b2,a3 in order along the genus-two "
                     "chain; alpha0 is the waist; the word realizes the "
                     "intersection-four image of alpha0"),
        }

    if not args.write:
        print("\n(dry run; pass --write to store)")
        return

    with open(DATA_PATH, "r") as handle:
        data = json.load(handle)
    for key, marking in markings.items():
        data["surfaces"][key]["marking"] = marking
    data["seeds"] = seeds
    with open(DATA_PATH, "w") as handle:
        json.dump(data, handle, indent=1, sort_keys=True)
        handle.write("\n")
    print("wrote markings + seeds to %s" % os.path.relpath(DATA_PATH))


if __name__ == "__main__":
    main()

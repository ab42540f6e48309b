"""Regenerate ``src/curvelab/data/triangulations.json`` from the side tables.

Each triangulation is written down as triangles of ``(edge, sign)`` sides,
counterclockwise, with sign ``+1`` meaning the side runs along the edge's
global direction.  The script checks the two-slots-per-edge condition, emits
the JSON data file, and re-loads every surface through the package loader so
the full validation (Euler characteristic, vertex count, connectivity) runs.

Run with ``--bare`` to emit only the complexes; the default additionally
computes marking systems and seed curves, which needs the rest of the package
to be importable (see ``make_marking_data.py`` for that stage).
"""

import argparse
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "curvelab" / "data" / "triangulations.json"

# Sides are (edge, sign).  Comments name the underlying model.
SIDE_TABLES = {
    # Torus with one puncture: two triangles glued along all three edges.
    "1,1": [
        [(0, +1), (1, +1), (2, +1)],
        [(0, -1), (1, -1), (2, -1)],
    ],
    # Four-times-punctured sphere: boundary of a tetrahedron ABCD with
    # edges 0=AB 1=BC 2=CA 3=AD 4=DB 5=DC.
    "0,4": [
        [(0, +1), (1, +1), (2, +1)],   # ABC
        [(3, +1), (4, +1), (0, -1)],   # ADB
        [(4, -1), (5, +1), (1, -1)],   # BDC
        [(2, -1), (5, -1), (3, -1)],   # CAD... traversed A<-C, C<-D, D<-A
    ],
    # Five-times-punctured sphere: bipyramid over triangle ABC with apexes
    # N, S; edges 0=NA 1=NB 2=NC 3=SA 4=SB 5=SC 6=AB 7=BC 8=CA.
    "0,5": [
        [(0, +1), (6, +1), (1, -1)],   # NAB
        [(1, +1), (7, +1), (2, -1)],   # NBC
        [(2, +1), (8, +1), (0, -1)],   # NCA
        [(4, +1), (6, -1), (3, -1)],   # SBA
        [(5, +1), (7, -1), (4, -1)],   # SCB
        [(3, +1), (8, -1), (5, -1)],   # SAC
    ],
    # Twice-punctured torus: unit square torus with one extra vertex at the
    # center; 0=a (horizontal), 1=b (vertical), 2..5 = spokes from the
    # square's corner P to the center C, one per quadrant crossing.
    "1,2": [
        [(0, +1), (3, +1), (2, -1)],
        [(1, +1), (4, +1), (3, -1)],
        [(0, -1), (5, +1), (4, -1)],
        [(1, -1), (2, +1), (5, -1)],
    ],
    # Closed genus two: one-vertex fan triangulation of the octagon with
    # boundary word a b a^-1 b^-1 c d c^-1 d^-1; 0=a 1=b 2=c 3=d and
    # 4..8 the fan diagonals.
    "2,0": [
        [(0, +1), (1, +1), (4, -1)],
        [(4, +1), (0, -1), (5, -1)],
        [(5, +1), (1, -1), (6, -1)],
        [(6, +1), (2, +1), (7, -1)],
        [(7, +1), (3, +1), (8, -1)],
        [(8, +1), (2, -1), (3, -1)],
    ],
}
# The once-punctured genus-two surface reuses the closed model's complex
# with its single vertex reinterpreted as the puncture.
SIDE_TABLES["2,1"] = SIDE_TABLES["2,0"]

SIGS = {"1,1": (1, 1), "0,4": (0, 4), "0,5": (0, 5),
        "1,2": (1, 2), "2,0": (2, 0), "2,1": (2, 1)}


def entry_for(key):
    sides = SIDE_TABLES[key]
    triangles = [[e for e, _ in tri] for tri in sides]
    gluings = {}
    for t, tri in enumerate(sides):
        for k, (e, sign) in enumerate(tri):
            gluings.setdefault(e, {})[sign] = [t, k]
    for e, pair in sorted(gluings.items()):
        if set(pair) != {+1, -1}:
            raise SystemExit("surface %s: edge %d sides are %s"
                             % (key, e, sorted(pair)))
    return {
        "surface": list(SIGS[key]),
        "triangles": triangles,
        "gluings": [[pair[+1], pair[-1]] for _, pair in sorted(gluings.items())],
        "marking": [],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bare", action="store_true",
                        help="emit complexes only; keep existing markings/seeds")
    args = parser.parse_args()

    payload = {"format": "curvelab-tri-1", "surfaces": {}, "seeds": {}}
    if DATA.exists():
        old = json.loads(DATA.read_text())
        payload["seeds"] = old.get("seeds", {})
        old_surfaces = old.get("surfaces", {})
    else:
        old_surfaces = {}

    for key in SIGS:
        entry = entry_for(key)
        if key in old_surfaces and old_surfaces[key].get("marking"):
            entry["marking"] = old_surfaces[key]["marking"]
        payload["surfaces"][key] = entry

    DATA.parent.mkdir(parents=True, exist_ok=True)
    DATA.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print("wrote", DATA)

    sys.path.insert(0, str(ROOT / "src"))
    import curvelab.surfaces as surfaces
    surfaces._CACHE.clear()
    for key in SIGS:
        tri = surfaces.reference_triangulation(key)
        print("validated %-4s V=%d E=%d F=%d punctures=%s"
              % (key, tri.n_vertices, tri.n_edges, len(tri.triangles),
                 sorted(tri.real_punctures)))


if __name__ == "__main__":
    main()

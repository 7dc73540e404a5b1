"""File formats: graphs, polygons, polyhedra, angle maps, certificates.

Ideal points serialize as numbers with the token "inf" for the point at
infinity; exact rationals as strings "p/q".
"""

import json
import math
from fractions import Fraction

from .ads import AdSPolyhedron
from .conditions import EquatorGraph, edge_key
from .hp import HPPolyhedron
from .polygon import IdealPolygon


def point_out(x):
    return "inf" if math.isinf(x) else float(x)


def point_in(t):
    if t == "inf":
        return math.inf
    return float(t)


def value_out(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return float(v)


def value_in(t):
    if isinstance(t, str) and "/" in t:
        num, den = t.split("/")
        return Fraction(int(num), int(den))
    return float(t)


def polygon_out(p):
    return [point_out(x) for x in p.vertices]


def polygon_in(seq):
    return IdealPolygon(tuple(point_in(t) for t in seq))


def angles_out(theta):
    return {f"{i}-{j}": value_out(v) for (i, j), v in sorted(theta.items())}


def angles_in(doc):
    out = {}
    for key, v in doc.items():
        i, j = key.split("-")
        out[edge_key(int(i), int(j))] = value_in(v)
    return out


def weights_out(w):
    """Triangulation-edge keyed map: "i-j:side"."""
    return {f"{e[0]}-{e[1]}:{e[2]}": value_out(v) for e, v in sorted(w.items())}


def weights_in(doc):
    out = {}
    for key, v in doc.items():
        pair, side = key.split(":")
        i, j = pair.split("-")
        out[(int(i), int(j), side)] = value_in(v)
    return out


def tri_out(tri):
    """Marked triangulation as an edge list with side tags."""
    return {"n": tri.n,
            "edges": [[i, j, side] for (i, j, side) in tri.edges]}


def tri_in(doc):
    from .polygon import MarkedTriangulation

    top = [(int(i), int(j)) for i, j, side in doc["edges"] if side == "top"]
    bottom = [(int(i), int(j)) for i, j, side in doc["edges"] if side == "bottom"]
    return MarkedTriangulation(int(doc["n"]), tuple(top), tuple(bottom))


def graph_out(g):
    return g.to_json_dict()


def graph_in(doc):
    return EquatorGraph.from_json_dict(doc)


def ads_out(P):
    return {"x": [point_out(t) for t in P.xs], "y": [point_out(t) for t in P.ys]}


def ads_in(doc):
    return AdSPolyhedron(tuple(point_in(t) for t in doc["x"]),
                         tuple(point_in(t) for t in doc["y"]))


def hp_out(P):
    return {"polygon": polygon_out(P.polygon), "velocity": list(P.velocity)}


def hp_in(doc):
    return HPPolyhedron(polygon_in(doc["polygon"]),
                        tuple(float(t) for t in doc["velocity"]))


def write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)

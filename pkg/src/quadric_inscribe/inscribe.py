"""Quadric-inscribed meshes: construction, verification, export.

A mesh is inscribed when its vertex set is exactly its intersection with
the quadric: every vertex sits on the surface, every face supports the
hull, and every open chord lies strictly inside the solid region.  Because
the quadric form is quadratic and chord endpoints lie on the surface,
midpoint interiority decides chord interiority.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import embed_affine
from .ads import AdSPolyhedron, ads_hull, joined_points
from .hp import HPPolyhedron, hp_embed, hp_hull
from .hull3d import convex_hull
from .config import resolve_tol

QUADRIC_SIGNS = {"sphere": 1.0, "hyperboloid": -1.0, "cylinder": 0.0}


class InscribeError(Exception):
    pass


def quadric_value(quadric, v):
    x1, x2, x3 = v
    return x1 * x1 + x2 * x2 + QUADRIC_SIGNS[quadric] * x3 * x3


@dataclass(frozen=True)
class InscribedMesh:
    quadric: str
    vertices: tuple
    faces: tuple
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.quadric not in QUADRIC_SIGNS:
            raise InscribeError(f"unknown quadric {self.quadric!r}")
        object.__setattr__(self, "vertices",
                           tuple(tuple(float(c) for c in v) for v in self.vertices))
        object.__setattr__(self, "faces",
                           tuple(tuple(int(i) for i in f) for f in self.faces))


def _faces_zero_based(g):
    return tuple(tuple(v - 1 for v in f) for f in g.faces)


def inscribe(polyhedron, g=None, provenance=None):
    """Mesh of an AdS, HP or sphere-side ideal polyhedron.

    AdS polyhedra inscribe in the hyperboloid, HP in the cylinder; a plain
    list of boundary points of the hyperbolic-space model (projective
    points with kappa^2 = -1) inscribes in the sphere with hull faces.
    """
    prov = dict(provenance or {})
    if isinstance(polyhedron, AdSPolyhedron):
        if g is None:
            g = ads_hull(polyhedron)
        pts = [embed_affine(q) for q in joined_points(polyhedron)]
        mesh = InscribedMesh("hyperboloid", pts, _faces_zero_based(g), prov)
        return _solid_side(mesh)
    if isinstance(polyhedron, HPPolyhedron):
        if g is None:
            g = hp_hull(polyhedron)
        pts = hp_embed(polyhedron)
        return InscribedMesh("cylinder", pts, _faces_zero_based(g), prov)
    # sphere pass-through: projective points over the complex numbers
    pts = [embed_affine(q) for q in polyhedron]
    hull = convex_hull(pts)
    return InscribedMesh("sphere", pts, hull.faces, prov)


def _solid_side(mesh):
    """Move a hyperboloid mesh to the solid side if it landed outside."""
    centroid = np.mean(np.asarray(mesh.vertices), axis=0)
    if quadric_value("hyperboloid", centroid) <= 1.0:
        return mesh
    for phi in (0.0, 0.35, 0.7, 1.1):
        c, s = math.cos(phi), math.sin(phi)
        moved = []
        ok = True
        for (x1, x2, x3) in mesh.vertices:
            # rotate in the (x1,x2) plane, then swap the two planes of the form
            y1, y2 = c * x1 - s * x2, s * x1 + c * x2
            y3, y4 = x3, 1.0
            if abs(y2) < 1e-9:
                ok = False
                break
            moved.append((y3 / y2, y4 / y2, y1 / y2))
        if not ok:
            continue
        out = InscribedMesh(mesh.quadric, moved, mesh.faces,
                            {**mesh.provenance, "side_normalized": True,
                             "side_rotation": phi})
        centroid = np.mean(np.asarray(out.vertices), axis=0)
        if quadric_value("hyperboloid", centroid) <= 1.0:
            return out
    raise InscribeError("could not normalize the mesh to the solid side")


@dataclass
class VerifyReport:
    ok: bool
    quadric_residual: float
    support_margin: float
    planarity_residual: float
    midpoint_margin: float

    def as_dict(self):
        return {
            "ok": self.ok,
            "quadric_residual": self.quadric_residual,
            "support_margin": self.support_margin,
            "planarity_residual": self.planarity_residual,
            "midpoint_margin": self.midpoint_margin,
        }


def _exact_side(p0, p1, p2, q):
    """Exact sign of the oriented volume of (p1-p0, p2-p0, q-p0)."""
    a = [Fraction(p1[t]) - Fraction(p0[t]) for t in range(3)]
    b = [Fraction(p2[t]) - Fraction(p0[t]) for t in range(3)]
    c = [Fraction(q[t]) - Fraction(p0[t]) for t in range(3)]
    det = (a[0] * (b[1] * c[2] - b[2] * c[1])
           - a[1] * (b[0] * c[2] - b[2] * c[0])
           + a[2] * (b[0] * c[1] - b[1] * c[0]))
    return (det > 0) - (det < 0)


def verify_inscribed(mesh, tol=None):
    """Re-check the three inscription invariants; reports worst margins."""
    tol = resolve_tol(tol)
    verts = mesh.vertices
    qres = max(abs(quadric_value(mesh.quadric, v) - 1.0) for v in verts)

    support = math.inf
    planar = 0.0
    convex_ok = True
    for f in mesh.faces:
        p0, p1, p2 = (np.asarray(verts[f[t]]) for t in range(3))
        nrm = np.cross(p1 - p0, p2 - p0)
        nn = np.linalg.norm(nrm)
        if nn == 0:
            convex_ok = False
            continue
        nrm /= nn
        for t in f[3:]:
            planar = max(planar, abs(float(nrm.dot(np.asarray(verts[t]) - p0))))
        sides = set()
        for t in range(len(verts)):
            if t in f:
                continue
            sides.add(_exact_side(verts[f[0]], verts[f[1]], verts[f[2]], verts[t]))
            support = min(support, abs(float(nrm.dot(np.asarray(verts[t]) - p0))))
        if len(sides) != 1 or 0 in sides:
            convex_ok = False
    scale = max(1.0, max(abs(c) for v in verts for c in v))
    midpoint = math.inf
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            mid = tuple(0.5 * (a + b) for a, b in zip(verts[i], verts[j]))
            midpoint = min(midpoint, 1.0 - quadric_value(mesh.quadric, mid))
    ok = (qres <= max(1e-10, tol)
          and convex_ok and support > 1e-12 * scale
          and planar <= 1e-9 * scale
          and midpoint > 0.0)
    return VerifyReport(ok, qres, float(support), float(planar), float(midpoint))


# ---------------------------------------------------------------------------
# export / import

def export(mesh, fmt):
    """OBJ or JSON bytes; both round-trip bit-exactly through import_mesh."""
    if fmt == "obj":
        lines = [f"# quadric-inscribe mesh", f"# quadric: {mesh.quadric}"]
        for v in mesh.vertices:
            lines.append("v %.17g %.17g %.17g" % v)
        for f in mesh.faces:
            lines.append("f " + " ".join(str(i + 1) for i in f))
        return ("\n".join(lines) + "\n").encode()
    if fmt == "json":
        doc = {
            "schema_version": 1,
            "type": "quadric_mesh",
            "quadric": mesh.quadric,
            "vertices": [list(v) for v in mesh.vertices],
            "faces": [list(f) for f in mesh.faces],
            "provenance": mesh.provenance,
        }
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
    raise InscribeError(f"unknown export format {fmt!r}")


def import_mesh(data, fmt):
    if fmt == "obj":
        quadric = None
        verts = []
        faces = []
        for line in data.decode().splitlines():
            if line.startswith("# quadric:"):
                quadric = line.split(":", 1)[1].strip()
            elif line.startswith("v "):
                verts.append(tuple(float(t) for t in line.split()[1:4]))
            elif line.startswith("f "):
                faces.append(tuple(int(t) - 1 for t in line.split()[1:]))
        if quadric is None:
            raise InscribeError("OBJ data lacks the quadric header line")
        return InscribedMesh(quadric, verts, faces)
    if fmt == "json":
        doc = json.loads(data.decode())
        if doc.get("type") != "quadric_mesh":
            raise InscribeError("not a quadric mesh document")
        return InscribedMesh(doc["quadric"],
                             [tuple(v) for v in doc["vertices"]],
                             [tuple(f) for f in doc["faces"]],
                             doc.get("provenance", {}))
    raise InscribeError(f"unknown import format {fmt!r}")

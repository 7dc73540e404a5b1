"""3D convex hull for small point sets with exact-sign orientation tests.

Signs are decided by a float filter backed by exact rational arithmetic on
the given coordinates; a nonzero orientation whose normalized magnitude
falls below the degeneracy gate raises DegenerateHull instead of guessing.
Coplanar supporting points are merged into polygon faces.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class DegenerateHull(Exception):
    pass


class _Ambiguous(DegenerateHull):
    """Orientation below the gate: exact sign known but not trustworthy."""


_FLOAT_TRUST = 1e-7


def orient_sign(pts, i, j, k, l, gate=1e-9, merge_coplanar=False):
    """Sign of det[q-p, r-p, s-p]; DegenerateHull when below the gate.

    With merge_coplanar the sub-gate regime is treated as exact coplanarity
    instead of an error; callers doing so must validate the resulting
    combinatorics independently.
    """
    p, q, r, s = pts[i], pts[j], pts[k], pts[l]
    a = (q[0] - p[0], q[1] - p[1], q[2] - p[2])
    b = (r[0] - p[0], r[1] - p[1], r[2] - p[2])
    c = (s[0] - p[0], s[1] - p[1], s[2] - p[2])
    det = (a[0] * (b[1] * c[2] - b[2] * c[1])
           - a[1] * (b[0] * c[2] - b[2] * c[0])
           + a[2] * (b[0] * c[1] - b[1] * c[0]))
    scale = (math.hypot(*a) * math.hypot(*b) * math.hypot(*c))
    if scale == 0.0:
        raise DegenerateHull(f"coincident points among {(i, j, k, l)}")
    ratio = det / scale
    if abs(ratio) >= _FLOAT_TRUST:
        return 1 if det > 0 else -1
    fa = [Fraction(q[t]) - Fraction(p[t]) for t in range(3)]
    fb = [Fraction(r[t]) - Fraction(p[t]) for t in range(3)]
    fc = [Fraction(s[t]) - Fraction(p[t]) for t in range(3)]
    fdet = (fa[0] * (fb[1] * fc[2] - fb[2] * fc[1])
            - fa[1] * (fb[0] * fc[2] - fb[2] * fc[0])
            + fa[2] * (fb[0] * fc[1] - fb[1] * fc[0]))
    if fdet == 0:
        return 0
    if abs(ratio) < gate:
        if merge_coplanar:
            return 0
        raise _Ambiguous(
            f"orientation of {(i, j, k, l)} is ambiguous at the {gate} gate")
    return 1 if fdet > 0 else -1


def _cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _collinear_exact(p, q, r):
    u = [Fraction(q[t]) - Fraction(p[t]) for t in range(3)]
    v = [Fraction(r[t]) - Fraction(p[t]) for t in range(3)]
    return (u[1] * v[2] == u[2] * v[1] and u[2] * v[0] == u[0] * v[2]
            and u[0] * v[1] == u[1] * v[0])


@dataclass(frozen=True)
class HullResult:
    faces: tuple            # vertex index cycles, ccw seen from outside
    normals: tuple          # unit outward normals, floats

    def edge_set(self):
        out = set()
        for f in self.faces:
            k = len(f)
            for t in range(k):
                a, b = f[t], f[(t + 1) % k]
                out.add((min(a, b), max(a, b)))
        return out


def convex_hull(points, gate=1e-9, merge_coplanar=False):
    """Faces of the convex hull; every input point must be a vertex."""
    n = len(points)
    if n < 4:
        raise DegenerateHull("need at least four points")
    support = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                pos = neg = False
                zeros = []
                ambiguous = []
                for l in range(n):
                    if l in (i, j, k):
                        continue
                    try:
                        s = orient_sign(points, i, j, k, l, gate, merge_coplanar)
                    except _Ambiguous as exc:
                        # only fatal if this plane turns out to be supporting
                        ambiguous.append(exc)
                        continue
                    if s > 0:
                        pos = True
                    elif s < 0:
                        neg = True
                    else:
                        zeros.append(l)
                    if pos and neg:
                        break
                if pos and neg:
                    continue  # interior plane; stray coplanarity is harmless
                if ambiguous:
                    raise DegenerateHull(
                        f"supporting plane {(i, j, k)} undecidable: {ambiguous[0]}")
                if not pos and not neg:
                    raise DegenerateHull("all points lie in one plane")
                members = frozenset({i, j, k, *zeros})
                # orientation reference: (i,j,k) ccw from outside iff others negative
                if members not in support:
                    support[members] = (i, j, k) if neg else (i, k, j)
    faces = []
    normals = []
    corners = set()
    for members, ref in sorted(support.items(), key=lambda kv: sorted(kv[0])):
        cyc, nrm = _order_face(points, members, ref)
        faces.append(cyc)
        normals.append(nrm)
        corners.update(cyc)
    if corners != set(range(n)):
        missing = sorted(set(range(n)) - corners)
        raise DegenerateHull(f"points {missing} are not vertices of the hull")
    # Euler check on the face complex
    edges = set()
    for f in faces:
        for t in range(len(f)):
            a, b = f[t], f[(t + 1) % len(f)]
            edges.add((min(a, b), max(a, b)))
    if n - len(edges) + len(faces) != 2:
        raise DegenerateHull("hull face complex fails the Euler count")
    return HullResult(tuple(faces), tuple(normals))


def _order_face(points, members, ref):
    i, j, k = ref
    p = np.asarray(points[i])
    u = np.asarray(points[j]) - p
    w = np.asarray(points[k]) - p
    nrm = np.asarray(_cross3(u, w), dtype=float)
    nn = np.linalg.norm(nrm)
    if nn == 0.0:
        raise DegenerateHull("degenerate face normal")
    nrm /= nn
    e1 = u / np.linalg.norm(u)
    e2 = np.cross(nrm, e1)
    pts = sorted(members)
    centroid = sum(np.asarray(points[t]) for t in pts) / len(pts)
    ang = {}
    for t in pts:
        d = np.asarray(points[t]) - centroid
        ang[t] = math.atan2(float(d.dot(e2)), float(d.dot(e1)))
    cyc = tuple(sorted(pts, key=lambda t: ang[t]))
    # corner test: consecutive triples must make strict left turns
    m = len(cyc)
    for t in range(m):
        a, b, c = cyc[t - 1], cyc[t], cyc[(t + 1) % m]
        if _collinear_exact(points[a], points[b], points[c]):
            raise DegenerateHull(f"point {b} lies inside a face edge")
        cr = np.cross(np.asarray(points[b]) - np.asarray(points[a]),
                      np.asarray(points[c]) - np.asarray(points[b]))
        if float(cr.dot(nrm)) <= 0.0:
            raise DegenerateHull(f"point {b} is not a corner of its face")
    start = cyc.index(min(cyc))
    return cyc[start:] + cyc[:start], tuple(float(t) for t in nrm)

"""Half-pipe ideal polyhedra.

An HP polyhedron is an ideal polygon together with an infinitesimal
deformation of its vertices; its boundary at infinity embeds on the unit
cylinder.  Prescribed dihedral angles are realized by minimizing the
weighted length function over polygons and reading the deformation off the
infinitesimal shear field at the minimum.
"""

import math
from dataclasses import dataclass

import numpy as np

from .algebra import GC, ProjPoint, cross_ratio, decompose_shape, embed_affine
from .config import ANGLE_ORIENTATION, resolve_tol
from .conditions import (EquatorGraph, NotInCone, check_ads_conditions,
                         edge_key, equator_graph_from_faces)
from .hull3d import DegenerateHull, convex_hull
from .polygon import (IdealPolygon, in_ccw_interval, infinitesimal_shear_field,
                      length_fn, length_fn_grad)

INF = math.inf


class HPError(Exception):
    pass


class CombinatoricsMismatch(HPError):
    pass


class NoConvergence(HPError):
    pass


class DegenerateEdge(HPError):
    pass


@dataclass(frozen=True)
class HPPolyhedron:
    """Ideal polygon plus vertex velocities, gauge-fixed at the first three."""

    polygon: IdealPolygon
    velocity: tuple

    def __post_init__(self):
        object.__setattr__(self, "velocity", tuple(float(t) for t in self.velocity))
        if len(self.velocity) != self.polygon.n:
            raise HPError("one velocity per vertex required")
        if any(abs(t) > 1e-12 for t in self.velocity[:3]):
            raise HPError("velocities at the first three vertices must vanish")
        if all(abs(t) <= 1e-14 for t in self.velocity):
            raise HPError("velocity field vanishes identically (degenerate)")

    @property
    def n(self):
        return self.polygon.n


@dataclass(frozen=True)
class HPAngleData:
    combinatorics: EquatorGraph
    theta: dict


def hp_point(x, v):
    """Boundary point of the cylinder model: [x + sigma*v : 1], or the
    tangent representative at infinity."""
    if math.isinf(x):
        return ProjPoint.of(GC(1.0, 0.0, 0), GC(0.0, -v, 0))
    return ProjPoint.of(GC(x, v, 0), GC(1.0, 0.0, 0))


def embed_cylinder(xs, vs):
    return [embed_affine(hp_point(x, v)) for x, v in zip(xs, vs)]


def hp_embed(P):
    """Affine cylinder points of the ideal vertices; x1^2 + x2^2 = 1."""
    return embed_cylinder(P.polygon.vertices, P.velocity)


def _tagged_hull_graph(points, n, gate=1e-9, merge_coplanar=False):
    hull = convex_hull(points, gate, merge_coplanar)
    tops = []
    faces = []
    for f, nrm in zip(hull.faces, hull.normals):
        if abs(nrm[2]) < gate:
            raise DegenerateHull("face normal has no fiber component")
        face1 = tuple(t + 1 for t in f)
        faces.append(face1)
        if nrm[2] > 0:
            tops.append(face1)
    if not tops or len(tops) == len(faces):
        raise DegenerateHull("faces do not split into top and bottom")
    return equator_graph_from_faces(n, faces, top_faces=tops)


def hp_hull(P, gate=1e-9, merge_coplanar=False):
    """Hull combinatorics on the cylinder; top faces point up the fiber.

    merge_coplanar treats sub-gate orientations as flat; construction paths
    that already know the target combinatorics use it and then validate the
    result through the measured angles.
    """
    return _tagged_hull_graph(hp_embed(P), P.n, gate, merge_coplanar)


def _measure_raw(points, tri):
    """Signed (s, theta) per triangulation edge via generalized cross ratios."""
    out = {}
    for e in tri.edges:
        i, j, a3, a4, _m = tri.quad(e)
        z = cross_ratio(points[i - 1], points[j - 1], points[a3 - 1], points[a4 - 1])
        _sgn, s, th = decompose_shape(z)
        out[e] = (ANGLE_ORIENTATION * s, ANGLE_ORIENTATION * th)
    return out


def _assign_signs(g, tri, raw, tol, what):
    """Apply the equator sign convention and run the closure assertions."""
    sides = g.edge_sides()
    scale = max([abs(th) for _s, th in raw.values()] + [1e-30])
    theta_tri = {}
    for e, (_s, th) in raw.items():
        i, j, side = e
        key = edge_key(i, j)
        want = -abs(th) if sides.get(key) == "equator" else abs(th)
        if abs(want - th) > max(1e-9, 1e-9 * scale):
            raise HPError(f"{what}: orientation calibration broken at {e}: "
                          f"raw {th}, assigned {want}")
        theta_tri[e] = want
    for v in range(1, tri.n + 1):
        s = sum(theta_tri[e] for e in tri.vertex_edges(v))
        if abs(s) > 1e-9 * max(1.0, scale):
            raise HPError(f"{what}: angle sum at vertex {v} is {s}")
    return theta_tri


def _collapse_to_graph(g, tri, theta_tri, tol):
    """Fold triangulation angles onto graph edges; refinement diagonals
    must be flat."""
    sides = g.edge_sides()
    out = {}
    for e, th in theta_tri.items():
        key = edge_key(e[0], e[1])
        if key in sides and sides[key] == e[2]:
            out[key] = th
        elif abs(th) > max(1e-8, tol):
            raise HPError(f"refinement diagonal {e} carries angle {th}")
    return out


def hp_angles(P, g=None, tol=None):
    """Infinitesimal dihedral angles, negative exactly on the equator."""
    tol = resolve_tol(tol)
    if g is None:
        g = hp_hull(P)
    tri, _added = g.marked_triangulation()
    pts = [hp_point(x, v) for x, v in zip(P.polygon.vertices, P.velocity)]
    raw = _measure_raw(pts, tri)
    theta_tri = _assign_signs(g, tri, raw, tol, "hp_angles")
    theta = _collapse_to_graph(g, tri, theta_tri, tol)
    rep = check_ads_conditions(g, theta, max(1e-9, tol))
    if not rep.ok:
        raise HPError(f"measured angles violate the cone conditions: {rep.as_dict()}")
    return HPAngleData(g, theta)


# ---------------------------------------------------------------------------
# length minimization

def _theta_on_tri(g, tri, theta):
    """Spread graph-edge weights onto the refining triangulation.

    Only the copy on the graph edge's own side carries the weight; added
    refinement diagonals stay flat, even when one shares its vertex pair
    with a graph edge of the other disk.
    """
    sides = g.edge_sides()
    gth = {edge_key(*e): v for e, v in theta.items()}
    out = {}
    for e in tri.edges:
        key = edge_key(e[0], e[1])
        if key in gth and sides[key] == e[2]:
            out[e] = gth[key]
        else:
            out[e] = 0.0
    return out


def _positions_from_u(u):
    xs = [INF, 0.0, 1.0]
    for t in u:
        xs.append(xs[-1] + math.exp(t))
    return tuple(xs)


def _u_from_positions(xs):
    return tuple(math.log(xs[k + 1] - xs[k]) for k in range(2, len(xs) - 1))


def _bfgs(fun, u0, gtol, max_iter):
    """Quasi-Newton with Armijo backtracking; returns (u, f, sup-grad, path)."""
    u = np.asarray(u0, dtype=float)
    f, g = fun(u)
    h = np.eye(len(u))
    path = [f]
    for _ in range(max_iter):
        if np.max(np.abs(g)) < gtol:
            break
        d = -h.dot(g)
        if g.dot(d) >= 0:
            h = np.eye(len(u))
            d = -g
        step = 1.0
        while step > 1e-16:
            un = u + step * d
            fn, gn = fun(un)
            if fn <= f + 1e-4 * step * g.dot(d):
                break
            step *= 0.5
        else:
            break
        sv = un - u
        yv = gn - g
        sy = sv.dot(yv)
        if sy > 1e-12 * np.linalg.norm(sv) * np.linalg.norm(yv):
            rho = 1.0 / sy
            ident = np.eye(len(u))
            h = (ident - rho * np.outer(sv, yv)).dot(h).dot(ident - rho * np.outer(yv, sv)) \
                + rho * np.outer(sv, sv)
        u, f, g = un, fn, gn
        path.append(f)
    return u, f, g, path


def _newton_polish(fun, u, gtol, rounds=12):
    u = np.asarray(u, dtype=float)
    k = len(u)
    for _ in range(rounds):
        f, g = fun(u)
        if np.max(np.abs(g)) < gtol:
            return u
        hess = np.zeros((k, k))
        step = 1e-6
        for c in range(k):
            up = u.copy()
            up[c] += step
            um = u.copy()
            um[c] -= step
            hess[:, c] = (fun(up)[1] - fun(um)[1]) / (2 * step)
        hess = 0.5 * (hess + hess.T)
        try:
            d = np.linalg.solve(hess, -g)
        except np.linalg.LinAlgError:
            return u
        fn = fun(u + d)[0]
        if not math.isfinite(fn) or fn > f + 1e-12 * abs(f):
            d *= 0.25
        u = u + d
    return u


def minimize_length(g, theta, seeds=10, rng=None, gtol=1e-9, max_iter=400, tol=None):
    """The unique polygon minimizing the weighted length function.

    Multi-start quasi-Newton; all starts must agree to 1e-6 and the value
    trace is non-increasing along each run.
    """
    tol = resolve_tol(tol)
    rep = check_ads_conditions(g, theta, max(1e-9, tol))
    if not rep.ok:
        raise NotInCone(f"weights outside the cone: {rep.as_dict()}")
    tri, _added = g.marked_triangulation()
    th = _theta_on_tri(g, tri, theta)
    n = g.n
    k = n - 3

    def fun(u):
        if np.max(np.abs(u)) > 500.0:
            return math.inf, np.zeros(k)
        xs = _positions_from_u(u)
        if any(not math.isfinite(t) for t in xs[1:]) or \
                any(b <= a for a, b in zip(xs[1:], xs[2:])):
            return math.inf, np.zeros(k)
        p = IdealPolygon(xs)
        f = length_fn(th, p, tri)
        gx = length_fn_grad(th, p, tri)
        # chain rule through x_j = 1 + sum_{i<j} exp(u_i)
        gu = np.zeros(k)
        for c in range(k):
            acc = 0.0
            for jj in range(c, k):
                acc += gx[jj]
            gu[c] = acc * math.exp(u[c])
        return f, gu

    if rng is None:
        rng = np.random.default_rng(0)
    starts = [np.zeros(k)]
    starts += [rng.normal(scale=1.2, size=k) for _ in range(max(0, seeds - 1))]
    best = None
    sols = []
    for u0 in starts:
        if not math.isfinite(fun(np.asarray(u0, dtype=float))[0]):
            continue
        u, f, grad, path = _bfgs(fun, u0, gtol, max_iter)
        # polish well past the stopping tolerance: near the cone boundary the
        # objective flattens and position accuracy needs a tiny residual
        u = _newton_polish(fun, u, min(gtol, 1e-12))
        f, grad = fun(u)
        if any(b > a + 1e-9 * max(1.0, abs(a)) for a, b in zip(path, path[1:])):
            raise NoConvergence("length value increased along the iteration")
        if np.max(np.abs(grad)) >= gtol:
            margin = min(abs(v) for v in theta.values())
            raise NoConvergence(
                f"no convergence; smallest angle margin of the weights is {margin}")
        sols.append(u)
        if best is None or f < best[1]:
            best = (u, f)
    for u in sols:
        if np.max(np.abs(u - best[0])) > 1e-6:
            raise NoConvergence("multi-start minima disagree; uniqueness violated")
    return IdealPolygon(_positions_from_u(best[0]))


def hp_from_angles(g, theta, rng=None, tol=None):
    """Construct the HP polyhedron with the prescribed dihedral angles."""
    tol = resolve_tol(tol)
    p = minimize_length(g, theta, rng=rng, tol=tol)
    tri, _added = g.marked_triangulation()
    th = _theta_on_tri(g, tri, theta)
    w = {e: ANGLE_ORIENTATION * v for e, v in th.items()}
    velocities, residual = infinitesimal_shear_field(p, tri, w)
    worst = max(abs(r) for r in residual.values())
    if worst > 1e-8:
        raise HPError(f"shear field is not tangent to the doubles: residual {worst}")
    P = HPPolyhedron(p, velocities)
    hull = hp_hull(P, merge_coplanar=True)
    if hull.edges != g.edges or hull.edge_sides() != g.edge_sides():
        P = HPPolyhedron(p, tuple(-t for t in velocities))
        hull = hp_hull(P, merge_coplanar=True)
        if hull.edges != g.edges or hull.edge_sides() != g.edge_sides():
            raise CombinatoricsMismatch("hull of the construction differs from the input graph")
    data = hp_angles(P, hull, tol)
    err = max(abs(data.theta[e] - theta[e]) for e in theta)
    if err > 1e-6:
        raise HPError(f"round trip failed: angle error {err}")
    return P


# ---------------------------------------------------------------------------
# fiber rotation of an infinitesimal isometry

def _uhp_to_matrix(z):
    x, y = float(z.real), float(z.imag)
    if y <= 0:
        raise HPError("point must lie in the upper half plane")
    return np.array([[x * x + y * y, x], [x, 1.0]]) / y


def _sqrt_spd2(m):
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    s = math.sqrt(det)
    t = math.sqrt(m[0, 0] + m[1, 1] + 2.0 * s)
    return (m + s * np.eye(2)) / t


def fiber_action(a, z):
    """Fiber translation rate of the infinitesimal isometry a at the point z.

    a is a traceless 2x2 matrix; z an upper half-plane point (complex)
    or the symmetric matrix representative.
    """
    a = np.asarray(a, dtype=float)
    if abs(a[0, 0] + a[1, 1]) > 1e-12:
        raise HPError("infinitesimal isometry must be traceless")
    x = z if isinstance(z, np.ndarray) else _uhp_to_matrix(complex(z))
    skew = 0.5 * (a - x.dot(a.T).dot(np.linalg.inv(x)))
    rt = _sqrt_spd2(x)
    m = np.linalg.inv(rt).dot(skew).dot(rt)
    return float(m[1, 0] - m[0, 1])


# ---------------------------------------------------------------------------
# vertical sections and the infinitesimal Gauss-Bonnet identity

@dataclass(frozen=True)
class HPSection:
    """Section of an HP polyhedron over a geodesic of the base plane.

    Both chains are graphs of piecewise (A cosh u + B sinh u) fiber
    functions over the arclength parameter of the base geodesic; the chains
    share their two endpoints on the equator.
    """

    breaks_top: tuple       # u_0 < ... < u_m
    coeffs_top: tuple       # (A, B) per interval
    breaks_bottom: tuple
    coeffs_bottom: tuple

    def _eval(self, breaks, coeffs, u):
        for t in range(len(coeffs)):
            if breaks[t] - 1e-12 <= u <= breaks[t + 1] + 1e-12:
                a, b = coeffs[t]
                return a * math.cosh(u) + b * math.sinh(u)
        raise ValueError("parameter outside the section")

    def top(self, u):
        return self._eval(self.breaks_top, self.coeffs_top, u)

    def bottom(self, u):
        return self._eval(self.breaks_bottom, self.coeffs_bottom, u)


def _gl20(f, a, b):
    xs, ws = np.polynomial.legendre.leggauss(20)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * sum(w * f(mid + half * x) for x, w in zip(xs, ws))


def hp2_area_and_angles(section, tol=None):
    """Area of the section and its exterior angles.

    The area integrates the fiber length over the base geodesic by
    quadrature; the angles are slope jumps of the chains.  Their equality is
    the degenerate-plane Gauss-Bonnet identity.
    """
    tol = resolve_tol(tol)
    bt, ct = section.breaks_top, section.coeffs_top
    bb, cb = section.breaks_bottom, section.coeffs_bottom
    if abs(bt[0] - bb[0]) > 1e-9 or abs(bt[-1] - bb[-1]) > 1e-9:
        raise DegenerateEdge("chains do not share their endpoints")
    for br in (bt, bb):
        for a, b in zip(br, br[1:]):
            if b - a < 1e-10:
                raise DegenerateEdge("section edge is vertical")
    grid = sorted(set(bt) | set(bb))
    area = 0.0
    for a, b in zip(grid, grid[1:]):
        area += _gl20(lambda u: section.top(u) - section.bottom(u), a, b)

    def slope(coeffs, t, u):
        a, b = coeffs[t]
        return a * math.sinh(u) + b * math.cosh(u)

    angles = []
    # left equator endpoint, then top chain, right endpoint, bottom chain
    angles.append(slope(cb, 0, bb[0]) - slope(ct, 0, bt[0]))
    for t in range(1, len(ct)):
        angles.append(slope(ct, t - 1, bt[t]) - slope(ct, t, bt[t]))
    angles.append(slope(ct, len(ct) - 1, bt[-1]) - slope(cb, len(cb) - 1, bb[-1]))
    for t in range(len(cb) - 1, 0, -1):
        angles.append(slope(cb, t, bb[t]) - slope(cb, t - 1, bb[t]))
    return float(area), [float(a) for a in angles]


def _null_vec(x):
    """Light-like vector (x1, x2, x4) of a boundary point of the base disk."""
    if math.isinf(x):
        return np.array([1.0, 0.0, 1.0])
    d = x * x + 1.0
    return np.array([(x * x - 1.0) / d, 2.0 * x / d, 1.0])


def _face_plane(points3, face):
    """Coefficients (a, b, c, d) of a*x1 + b*x2 + c*x3 + d = 0 through a face."""
    p0, p1, p2 = (np.asarray(points3[v - 1]) for v in face[:3])
    nrm = np.cross(p1 - p0, p2 - p0)
    d = -float(nrm.dot(p0))
    return float(nrm[0]), float(nrm[1]), float(nrm[2]), d


def section_of(P, g, xi1, xi2, tol=None):
    """Section of an HP polyhedron over the base geodesic (xi1, xi2)."""
    tol = resolve_tol(tol)
    p = P.polygon
    n = p.n
    pts3 = hp_embed(P)
    n1, n2 = _null_vec(xi1), _null_vec(xi2)
    ip = n1[0] * n2[0] + n1[1] * n2[1] - n1[2] * n2[2]
    if ip >= 0:
        raise DegenerateEdge("geodesic endpoints coincide")
    rho = math.sqrt(-2.0 * ip)

    def point(u):
        return (math.exp(u) * n1 + math.exp(-u) * n2) / rho

    def crossing_u(a, b):
        na, nb = _null_vec(p.pos(a)), _null_vec(p.pos(b))
        c = np.cross(na, nb)
        va, vb = float(n1.dot(c)), float(n2.dot(c))
        if va == 0 or vb == 0 or (vb / va) > 0:
            raise DegenerateEdge(f"geodesic does not cross edge ({a},{b})")
        return 0.5 * math.log(-vb / va)

    def crossed(a, b):
        xa, xb = p.pos(a), p.pos(b)
        return in_ccw_interval(xi1, xa, xb) != in_ccw_interval(xi2, xa, xb)

    sides = g.edge_sides()
    eq_hits = [e for e, s in sides.items() if s == "equator" and crossed(*e)]
    if len(eq_hits) != 2:
        raise DegenerateEdge("geodesic must enter and exit through the equator")

    def chain(which):
        faces = [f for f, s in zip(g.faces, g.face_side) if s == which]
        diag_hits = [e for e, s in sides.items() if s == which and crossed(*e)]
        crossings = [(crossing_u(*e), e) for e in eq_hits + diag_hits]
        crossings.sort()
        for (u1, _), (u2, _) in zip(crossings, crossings[1:]):
            if u2 - u1 < 1e-9:
                raise DegenerateEdge("section has a vertical edge")
        coeffs = []
        current = next(f for f in faces
                       if set(crossings[0][1]).issubset(set(f)))
        for t in range(len(crossings) - 1):
            a, b, c, d = _face_plane(pts3, current)
            if abs(c) < 1e-12:
                raise DegenerateEdge("face plane is vertical")
            aa = -(a * n1[0] + b * n1[1] + d * n1[2]) / (c * rho)
            bb = -(a * n2[0] + b * n2[1] + d * n2[2]) / (c * rho)
            coeffs.append((aa + bb, aa - bb))  # A cosh + B sinh
            nxt_edge = crossings[t + 1][1]
            if t + 1 < len(crossings) - 1:
                current = next(f for f in faces
                               if f != current and set(nxt_edge).issubset(set(f)))
        return tuple(u for u, _e in crossings), tuple(coeffs)

    bt, ct = chain("top")
    bb, cb = chain("bottom")
    return HPSection(bt, ct, bb, cb)

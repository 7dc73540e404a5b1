"""Anti-de Sitter ideal polyhedra.

A polyhedron is stored by the two boundary projections of its vertices: two
tuples of real ideal points in matching cyclic order, normalized so the
first three pairs are (inf, inf), (0, 0), (1, 1).  Measurement reads shear
and bending off generalized cross ratios; realization of prescribed angles
runs a continuation from the collapsed (half-pipe) limit.
"""

import math
from dataclasses import dataclass

import numpy as np

from .algebra import ProjPoint, embed_affine, join_lr
from .config import ANGLE_ORIENTATION, resolve_tol
from .conditions import EquatorGraph, NotInCone, check_ads_conditions
from .hp import (_assign_signs, _collapse_to_graph, _measure_raw,
                 _tagged_hull_graph, _theta_on_tri, hp_from_angles)
from .hull3d import DegenerateHull
from .polygon import IdealPolygon, circle_param, cr4, double_shears, earthquake

INF = math.inf


class AdSError(Exception):
    pass


class NormalizationFailed(AdSError):
    pass


class StepCollapse(AdSError):
    def __init__(self, msg, t_reached):
        super().__init__(msg)
        self.t_reached = t_reached


class CombinatoricsChanged(AdSError):
    def __init__(self, msg, t_reached):
        super().__init__(msg)
        self.t_reached = t_reached


@dataclass(frozen=True)
class AdSPolyhedron:
    """Vertex data as left/right boundary projections with common marking."""

    xs: tuple
    ys: tuple

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(float(t) for t in self.xs))
        object.__setattr__(self, "ys", tuple(float(t) for t in self.ys))
        if len(self.xs) != len(self.ys) or len(self.xs) < 4:
            raise AdSError("need matched projections of at least four vertices")

    @property
    def n(self):
        return len(self.xs)

    @staticmethod
    def from_pair(p_left, p_right):
        return AdSPolyhedron(p_left.vertices, p_right.vertices)

    def left(self):
        return IdealPolygon(self.xs)

    def right(self):
        return IdealPolygon(self.ys)


@dataclass
class AdSMeasurement:
    combinatorics: EquatorGraph
    theta: dict            # graph edges
    theta_tri: dict        # triangulation edges (refinement diagonals flat)
    s: dict
    s_left: dict
    s_right: dict
    relation_residual: float


def ads_point(x, y):
    """Boundary point with the given left/right projections."""
    ux, vx = (1.0, 0.0) if math.isinf(x) else (x, 1.0)
    uy, vy = (1.0, 0.0) if math.isinf(y) else (y, 1.0)
    return ProjPoint.of(join_lr(ux, uy), join_lr(vx, vy))


def _same_cyclic_order(xs, ys):
    tx = [circle_param(t) for t in xs]
    ty = [circle_param(t) for t in ys]
    n = len(xs)
    ox = sorted(range(n), key=lambda i: tx[i])
    oy = sorted(range(n), key=lambda i: ty[i])
    k = oy.index(ox[0])
    return all(ox[t] == oy[(k + t) % n] for t in range(n))


def validate(P, tol=None):
    """True when both projections are injective and in the same cyclic order."""
    tol = resolve_tol(tol)
    if len(set(P.xs)) != P.n or len(set(P.ys)) != P.n:
        return False
    return _same_cyclic_order(P.xs, P.ys)


def is_degenerate(P, tol=1e-12):
    return all((math.isinf(a) and math.isinf(b)) or abs(a - b) <= tol
               for a, b in zip(P.xs, P.ys))


def joined_points(P):
    return [ads_point(x, y) for x, y in zip(P.xs, P.ys)]


def ads_hull(P, gate=1e-9, merge_coplanar=False):
    """Hull combinatorics on the hyperboloid; future faces form the top."""
    if not validate(P):
        raise AdSError("projections are not in matching cyclic order")
    pts = []
    for q in joined_points(P):
        x4 = 0.5 * (q.u.sq_norm() + q.v.sq_norm())
        if x4 <= 1e-12:
            raise NormalizationFailed("vertex at the chart plane at infinity")
        pts.append(embed_affine(q))
    return _tagged_hull_graph(pts, P.n, gate, merge_coplanar)


def measure(P, g=None, tol=None):
    """Shears, dihedral angles and left/right shears of a polyhedron.

    The left and right shear vectors come independently from the projected
    polygons; the measurement asserts the earthquake relations
    s_right - s = theta = s - s_left on every triangulation edge.
    """
    tol = resolve_tol(tol)
    if g is None:
        g = ads_hull(P)
    tri, _added = g.marked_triangulation()
    raw = _measure_raw(joined_points(P), tri)
    theta_tri = _assign_signs(g, tri, raw, tol, "measure")
    svec = {e: s for e, (s, _t) in raw.items()}
    s_left = {e: -v for e, v in double_shears(P.left(), tri).items()}
    s_right = {e: -v for e, v in double_shears(P.right(), tri).items()}
    resid = max(max(abs(s_right[e] - svec[e] - theta_tri[e]) for e in tri.edges),
                max(abs(svec[e] - s_left[e] - theta_tri[e]) for e in tri.edges))
    if resid > 1e-9:
        raise AdSError(f"earthquake relations fail: residual {resid}")
    theta = _collapse_to_graph(g, tri, theta_tri, tol)
    rep = check_ads_conditions(g, theta, max(1e-9, tol))
    if not rep.ok:
        raise AdSError(f"measured angles violate the cone conditions: {rep.as_dict()}")
    return AdSMeasurement(g, theta, theta_tri, svec, s_left, s_right, resid)


def laminations_from_pair(p_left, p_right, tol=None):
    """Unique weighted diagonal systems shearing one polygon to the other.

    Returns (theta_plus, theta_minus, degenerate).  Weights are twice the
    top/bottom dihedral angles; the result is replayed through the
    earthquake map.
    """
    tol = resolve_tol(tol)
    P = AdSPolyhedron.from_pair(p_left.normalize(), p_right.normalize())
    if is_degenerate(P):
        return {}, {}, True
    m = measure(P, tol=tol)
    sides = m.combinatorics.edge_sides()
    plus = {e: 2.0 * v for e, v in m.theta.items() if sides[e] == "top"}
    minus = {e: 2.0 * v for e, v in m.theta.items() if sides[e] == "bottom"}
    fwd = earthquake(P.left(), plus)
    back = earthquake(P.right(), minus)
    if not (fwd.close_to(P.right(), 1e-8) and back.close_to(P.left(), 1e-8)):
        raise AdSError("earthquake replay failed to reproduce the pair")
    return plus, minus, False


# ---------------------------------------------------------------------------
# realization of prescribed angles by continuation from the collapsed limit

def _fast_theta(xs, ys, tri):
    """Signed angles on the triangulation from real cross ratios (fast path)."""
    out = {}
    for e in tri.edges:
        i, j, a3, a4, _m = tri.quad(e)
        cx = cr4(xs[i - 1], xs[j - 1], xs[a3 - 1], xs[a4 - 1])
        cy = cr4(ys[i - 1], ys[j - 1], ys[a3 - 1], ys[a4 - 1])
        if not (math.isfinite(cx) and math.isfinite(cy)) or cx * cy <= 0:
            raise AdSError("configuration left the space-like regime")
        out[e] = ANGLE_ORIENTATION * 0.5 * (math.log(abs(cy)) - math.log(abs(cx)))
    return out


def _pack(xs, ys):
    return np.array(list(xs[3:]) + list(ys[3:]))


def _unpack(vec, n):
    k = n - 3
    xs = (INF, 0.0, 1.0) + tuple(vec[:k])
    ys = (INF, 0.0, 1.0) + tuple(vec[k:])
    return xs, ys


def _valid_coords(vec, n):
    k = n - 3
    for half in (vec[:k], vec[k:]):
        prev = 1.0
        for t in half:
            if not (math.isfinite(t) and t > prev):
                return False
            prev = t
    return True


def _newton_correct(vec, n, tri, target, newton_tol=1e-10, max_iter=12):
    edges = tri.edges
    tvec = np.array([target[e] for e in edges])

    def residual(v):
        xs, ys = _unpack(v, n)
        th = _fast_theta(xs, ys, tri)
        return np.array([th[e] for e in edges]) - tvec

    v = vec.copy()
    r = residual(v)
    for _ in range(max_iter):
        if np.max(np.abs(r)) < newton_tol:
            return v, float(np.max(np.abs(r)))
        jac = np.zeros((len(edges), len(v)))
        for c in range(len(v)):
            h = 1e-6 * max(1.0, abs(v[c]))
            vp = v.copy()
            vp[c] += h
            vm = v.copy()
            vm[c] -= h
            if not (_valid_coords(vp, n) and _valid_coords(vm, n)):
                return None
            jac[:, c] = (residual(vp) - residual(vm)) / (2.0 * h)
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        lam = 1.0
        while lam > 1e-6:
            vn = v + lam * step
            if _valid_coords(vn, n):
                rn = residual(vn)
                if np.max(np.abs(rn)) < np.max(np.abs(r)):
                    v, r = vn, rn
                    break
            lam *= 0.5
        else:
            return None
    if np.max(np.abs(r)) < newton_tol:
        return v, float(np.max(np.abs(r)))
    return None


def _graphs_equal(g1, g2):
    return g1.edges == g2.edges and g1.edge_sides() == g2.edge_sides()


def ads_from_angles(g, theta, rng=None, tol=None, step0=0.1, step_floor=1e-8):
    """Polyhedron with the prescribed dihedral angles.

    Starts from the collapsed limit (the length-function minimizer and its
    shear field), then predictor-corrector continuation in the scale of the
    angles, tracking the hull combinatorics at every accepted step.
    """
    tol = resolve_tol(tol)
    rep = check_ads_conditions(g, theta, max(1e-9, tol))
    if not rep.ok:
        raise NotInCone(f"angles outside the cone: {rep.as_dict()}")
    hp = hp_from_angles(g, theta, rng=rng, tol=tol)
    p = hp.polygon
    vel = np.array(hp.velocity)
    tri, _added = g.marked_triangulation()
    th_tri = _theta_on_tri(g, tri, theta)
    n = g.n
    base = np.array(p.vertices[3:])

    accepted = []  # (t, coordinate vector)
    t, dt = 0.0, step0
    while t < 1.0 - 1e-15:
        tn = min(1.0, t + dt)
        if len(accepted) >= 2:
            (t1, v1), (t2, v2) = accepted[-2], accepted[-1]
            guess = v2 + (v2 - v1) * ((tn - t2) / (t2 - t1))
        elif accepted:
            t2, v2 = accepted[-1]
            guess = np.concatenate([base - tn * vel[3:], base + tn * vel[3:]]) \
                if t2 == 0 else v2
            guess = v2 + (guess - v2)
        else:
            guess = np.concatenate([base - tn * vel[3:], base + tn * vel[3:]])
        sol = None
        if _valid_coords(guess, n):
            sol = _newton_correct(guess, n, tri, {e: tn * v for e, v in th_tri.items()})
        if sol is None:
            dt *= 0.5
            if dt < step_floor:
                raise StepCollapse(f"continuation stalled at t = {t}", t)
            continue
        vec, _res = sol
        xs, ys = _unpack(vec, n)
        P = AdSPolyhedron(xs, ys)
        try:
            hull = ads_hull(P, merge_coplanar=True)
        except (DegenerateHull, AdSError) as exc:
            raise CombinatoricsChanged(f"hull failed at t = {tn}: {exc}", t) from exc
        if not _graphs_equal(hull, g):
            raise CombinatoricsChanged(f"hull combinatorics changed at t = {tn}", t)
        accepted.append((tn, vec))
        t = tn
        dt = min(0.25, dt * 1.4)
    P = AdSPolyhedron(*_unpack(accepted[-1][1], n))
    m = measure(P, g, tol=tol)
    err = max(abs(m.theta[e] - theta[e]) for e in theta)
    if err > 1e-8:
        raise AdSError(f"realized angles off target by {err}")
    return P


# ---------------------------------------------------------------------------
# small-N determinacy

def tetrahedron_from_vertex_angles(theta12, theta13, tol=1e-10):
    """Tetrahedron from two dihedral angles at edges through vertex 1.

    Reconstructs the unique normalized polyhedron with measured angles
    theta[(1,2)] = theta12 (equatorial) and theta[(1,3)] = theta13 (top).
    """
    from .polygon import MarkedTriangulation

    tri = MarkedTriangulation(4, ((1, 3),), ((2, 4),))
    target = np.array([theta12, theta13])

    def res(v):
        xs, ys = _unpack(v, 4)
        th = _fast_theta(xs, ys, tri)
        return np.array([th[(1, 2, "equator")], th[(1, 3, "top")]]) - target

    v = np.array([2.0, 3.0])
    for _ in range(60):
        r = res(v)
        if np.max(np.abs(r)) < tol:
            break
        jac = np.zeros((2, 2))
        for c in range(2):
            h = 1e-7 * max(1.0, abs(v[c]))
            vp, vm = v.copy(), v.copy()
            vp[c] += h
            vm[c] -= h
            jac[:, c] = (res(vp) - res(vm)) / (2 * h)
        v = v + np.linalg.solve(jac, -r)
    xs, ys = _unpack(v, 4)
    return AdSPolyhedron(xs, ys)

"""Ideal polygons in the hyperbolic plane and their doubled punctured spheres.

Vertices are real ideal points on the circle, stored as floats with math.inf
allowed; the normalized chart puts the first three vertices at (inf, 0, 1)
and the rest strictly increasing in (1, inf).  A MarkedTriangulation carries
the combinatorics of the doubled surface: the equator cycle plus a
triangulation of the top disk and one of the bottom disk.

Shear coordinates follow the cross-ratio convention calibrated in
config.py: the shear of a diagonal (i, j) with surrounding quad (i, a, j, b)
in counterclockwise order is log|(z_i, z_j; z_b, z_a)|, which is negative
log 2 on the quad (inf, 0, 1, 3) with diagonal (inf, 1).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .config import EARTHQUAKE_SHEAR_SIGN, resolve_tol

INF = math.inf


class PolygonError(Exception):
    pass


class NotCyclic(PolygonError):
    pass


class NotBalanced(PolygonError):
    pass


class OverlappingSupport(PolygonError):
    pass


class DegenerateQuad(PolygonError):
    pass


# ---------------------------------------------------------------------------
# real Mobius maps on RP^1 (floats plus math.inf)

def _std(p, q, r):
    """Coefficients (a, b, c, d) of the map sending (p, q, r) to (inf, 0, 1)."""
    if math.isinf(p):
        return (1.0, -q, 0.0, r - q)
    if math.isinf(q):
        return (0.0, r - p, 1.0, -p)
    if math.isinf(r):
        return (1.0, -q, 1.0, -p)
    return (r - p, -q * (r - p), r - q, -p * (r - q))


def _apply(m, x):
    a, b, c, d = m
    if math.isinf(x):
        return INF if c == 0.0 else a / c
    num = a * x + b
    den = c * x + d
    if den == 0.0:
        return INF
    return num / den


def _inv(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def cr4(z1, z2, z3, z4):
    """Real cross ratio (z1, z2; z3, z4); the image of z4 under _std."""
    return _apply(_std(z1, z2, z3), z4)


def reflect_across(b, i, j):
    """Reflection of the boundary point b across the geodesic (i, j)."""
    if math.isinf(i) or math.isinf(j):
        f = j if math.isinf(i) else i
        return INF if math.isinf(b) else 2.0 * f - b
    c = 0.5 * (i + j)
    r2 = 0.25 * (i - j) ** 2
    if math.isinf(b):
        return c
    if b == c:
        return INF
    return c + r2 / (b - c)


def circle_param(x):
    """Monotone parametrization of RP^1 by (-pi, pi]; inf maps to pi."""
    return math.pi if math.isinf(x) else 2.0 * math.atan(x)


def in_ccw_interval(x, u, v):
    """True when x lies in the open counterclockwise interval from u to v."""
    tu, tv, tx = circle_param(u), circle_param(v), circle_param(x)
    span = (tv - tu) % (2.0 * math.pi)
    off = (tx - tu) % (2.0 * math.pi)
    return 0.0 < off < span


# ---------------------------------------------------------------------------
# polygons

@dataclass(frozen=True)
class IdealPolygon:
    """Marked ideal polygon; labels 1..n run counterclockwise."""

    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(float(v) for v in self.vertices))
        if len(self.vertices) < 3:
            raise NotCyclic("need at least three vertices")

    @property
    def n(self):
        return len(self.vertices)

    def pos(self, label):
        return self.vertices[label - 1]

    def is_normalized(self, tol=None):
        tol = resolve_tol(tol)
        v = self.vertices
        if not (math.isinf(v[0]) and abs(v[1]) <= tol and abs(v[2] - 1.0) <= tol):
            return False
        tail = (1.0,) + v[3:]
        return all(tail[k + 1] > tail[k] for k in range(len(tail) - 1))

    def normalize(self):
        """Send (v1, v2, v3) to (inf, 0, 1); raises NotCyclic if the labels
        do not run counterclockwise."""
        m = _std(*self.vertices[:3])
        out = [_apply(m, x) for x in self.vertices]
        p = IdealPolygon(tuple(out))
        if not p.is_normalized():
            raise NotCyclic(f"vertices not in positive cyclic order: {out}")
        return p

    def close_to(self, other, tol=1e-9):
        if self.n != other.n:
            return False
        for a, b in zip(self.vertices, other.vertices):
            if math.isinf(a) or math.isinf(b):
                if not (math.isinf(a) and math.isinf(b)):
                    return False
            elif abs(a - b) > tol * max(1.0, abs(a), abs(b)):
                return False
        return True


def random_polygon(n, rng, spread=1.0):
    """Normalized random n-gon: log-normal gaps after (inf, 0, 1)."""
    gaps = np.exp(spread * rng.standard_normal(n - 3))
    xs = [INF, 0.0, 1.0]
    for g in gaps:
        xs.append(xs[-1] + float(g))
    return IdealPolygon(tuple(xs))


# ---------------------------------------------------------------------------
# marked triangulations of the double

def polygon_diagonals(n):
    """All diagonals (i, j), i < j, of the n-gon with equator (1..n)."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 2, n + 1)
            if not (i == 1 and j == n)]


def diagonals_cross(d1, d2, n):
    (i, j), (k, l) = d1, d2
    if len({i, j, k, l}) < 4:
        return False
    def interval(x, a, b):
        return 0 < (x - a) % n < (b - a) % n
    return interval(k, i, j) != interval(l, i, j)


def _faces_of(n, diagonals):
    """Triangles of the disk triangulation (equator arcs plus diagonals)."""
    edges = {(k, k + 1) for k in range(1, n)} | {(1, n)} | set(diagonals)
    faces = []
    verts = range(1, n + 1)
    for a in verts:
        for b in range(a + 1, n + 1):
            if (a, b) not in edges:
                continue
            for c in range(b + 1, n + 1):
                if (a, c) in edges and (b, c) in edges:
                    faces.append((a, b, c))
    return faces


def equator_edges(n):
    return [(k, k + 1) for k in range(1, n)] + [(1, n)]


@dataclass(frozen=True)
class MarkedTriangulation:
    """Equator cycle (1..n) plus top and bottom disk triangulations.

    Edges are keyed (i, j, side) with i < j and side in
    {"equator", "top", "bottom"}; the same diagonal may appear on both
    sides as two distinct edges.
    """

    n: int
    top: tuple
    bottom: tuple
    edges: tuple = field(init=False)
    _index: dict = field(init=False, repr=False)
    top_faces: tuple = field(init=False, repr=False)
    bottom_faces: tuple = field(init=False, repr=False)
    eps: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n
        top = tuple(sorted(tuple(sorted(d)) for d in self.top))
        bottom = tuple(sorted(tuple(sorted(d)) for d in self.bottom))
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "bottom", bottom)
        for side in (top, bottom):
            if len(side) != n - 3:
                raise PolygonError(f"need {n - 3} diagonals per side, got {len(side)}")
            for a in range(len(side)):
                for b in range(a + 1, len(side)):
                    if diagonals_cross(side[a], side[b], n):
                        raise OverlappingSupport(f"{side[a]} crosses {side[b]}")
        edges = [(i, j, "equator") for (i, j) in equator_edges(n)]
        edges += [(i, j, "top") for (i, j) in top]
        edges += [(i, j, "bottom") for (i, j) in bottom]
        if len(edges) != 3 * n - 6:
            raise PolygonError("edge count is not 3n - 6")
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "_index", {e: k for k, e in enumerate(edges)})
        object.__setattr__(self, "top_faces", tuple(_faces_of(n, top)))
        object.__setattr__(self, "bottom_faces", tuple(_faces_of(n, bottom)))
        object.__setattr__(self, "eps", self._build_eps())

    @staticmethod
    def fan(n, apex=1):
        diags = tuple((apex, j) for j in range(apex + 2, n + 1) if (apex, j) != (1, n))
        need = n - 3 - len(diags)
        if need:
            raise PolygonError("fan apex must be 1 for this helper")
        return MarkedTriangulation(n, diags, diags)

    def index(self, edge):
        return self._index[edge]

    def edge_vertices(self, edge):
        return edge[0], edge[1]

    def _oriented_faces(self):
        """Top faces counterclockwise, bottom faces clockwise (as drawn)."""
        out = []
        for (a, b, c) in self.top_faces:
            out.append(((a, b, c), "top"))
        for (a, b, c) in self.bottom_faces:
            out.append(((a, c, b), "bottom"))
        return out

    def _edge_of(self, pair, side):
        i, j = min(pair), max(pair)
        if (i, j) in set(equator_edges(self.n)):
            return (i, j, "equator")
        return (i, j, side)

    def _build_eps(self):
        m = len(self.edges)
        eps = np.zeros((m, m), dtype=int)
        for face, side in self._oriented_faces():
            p, q, r = face
            cyc = [(p, q), (q, r), (r, p)]
            idx = [self._index[self._edge_of(pair, side)] for pair in cyc]
            for k in range(3):
                x, y = idx[k], idx[(k + 1) % 3]
                eps[x][y] -= 1
                eps[y][x] += 1
        return eps

    def directed_apex(self, side):
        """Map (p, q) -> apex r over the oriented faces of one side."""
        out = {}
        for face, s in self._oriented_faces():
            if s != side:
                continue
            p, q, r = face
            out[(p, q)] = r
            out[(q, r)] = p
            out[(r, p)] = q
        return out

    def quad(self, edge):
        """Cross-ratio slots for an edge: (i, j, slot3, slot4, mirrored).

        slot3 is the apex of the oriented face containing the directed edge
        (i -> j); slot4 the apex of the face containing (j -> i).  For an
        equatorial edge slot4 lives on the bottom copy and must be developed
        by reflecting across the edge (mirrored = True).
        """
        i, j, side = edge
        if side == "equator":
            topmap = self.directed_apex("top")
            botmap = self.directed_apex("bottom")
            if (i, j) in topmap:
                return i, j, topmap[(i, j)], botmap[(j, i)], True
            return j, i, topmap[(j, i)], botmap[(i, j)], True
        amap = self.directed_apex(side)
        if (i, j) in amap:
            return i, j, amap[(i, j)], amap[(j, i)], False
        return j, i, amap[(j, i)], amap[(i, j)], False

    def vertex_edges(self, v):
        return [e for e in self.edges if v in (e[0], e[1])]


def refine_fan(n, diagonals):
    """Complete a non-crossing diagonal set to a full disk triangulation."""
    chosen = [tuple(sorted(d)) for d in diagonals]
    for a in range(len(chosen)):
        for b in range(a + 1, len(chosen)):
            if diagonals_cross(chosen[a], chosen[b], n):
                raise OverlappingSupport(f"{chosen[a]} crosses {chosen[b]}")
    for cand in polygon_diagonals(n):
        if len(chosen) == n - 3:
            break
        if cand in chosen:
            continue
        if all(not diagonals_cross(cand, d, n) for d in chosen):
            chosen.append(cand)
    return tuple(sorted(chosen))


# ---------------------------------------------------------------------------
# decorated lengths

@dataclass(frozen=True)
class DecoratedLengths:
    ell: dict
    decoration: tuple


def _edge_length(xi, xj, di, dj):
    if math.isinf(xi) or math.isinf(xj):
        return -math.log(di) - math.log(dj)
    return 2.0 * math.log(abs(xi - xj)) - math.log(di) - math.log(dj)


def lambda_lengths(p, decoration, tri):
    """Signed horocyclic lengths of all edges of the doubled surface.

    The decoration is one positive size per vertex; at the vertex placed at
    infinity the stored size is the reciprocal of the horocycle height, so
    the default all-ones decoration is the horizontal line at height one.
    """
    if len(decoration) != p.n:
        raise PolygonError("decoration size mismatch")
    if any(d <= 0 for d in decoration):
        raise PolygonError("decoration must be positive")
    ell = {}
    for e in tri.edges:
        i, j, _side = e
        ell[e] = _edge_length(p.pos(i), p.pos(j), decoration[i - 1], decoration[j - 1])
    return DecoratedLengths(ell, tuple(decoration))


def lengths_to_shears(lengths, tri):
    """Thurston's linear map: s_e = (1/2) sum_f eps[e, f] * ell_f."""
    vec = np.array([lengths.ell[e] for e in tri.edges])
    s = 0.5 * tri.eps.dot(vec)
    return {e: float(s[k]) for k, e in enumerate(tri.edges)}


def is_balanced(tri, w, tol=None):
    tol = resolve_tol(tol)
    scale = max([abs(x) for x in w.values()] + [1.0])
    for v in range(1, tri.n + 1):
        if abs(sum(w.get(e, 0.0) for e in tri.vertex_edges(v))) > tol * scale:
            return False
    return True


# ---------------------------------------------------------------------------
# cross-ratio shears of the double

def double_shears(p, tri):
    """Shear coordinates of the doubled polygon, computed from cross ratios.

    Top-side quads use the polygon positions directly; bottom-side quads see
    the mirrored copy; an equatorial quad takes its bottom apex reflected
    across the edge.
    """
    out = {}
    for e in tri.edges:
        out[e] = _shear_of_edge(p.vertices, e, tri)
    return out


def _slot_positions(vertices, edge, tri):
    i, j, a3, a4, mirrored = tri.quad(edge)
    xi, xj = vertices[i - 1], vertices[j - 1]
    x3 = vertices[a3 - 1]
    x4 = vertices[a4 - 1]
    if mirrored:
        x4 = reflect_across(x4, xi, xj)
    return (xi, xj, x3, x4), (i, j, a3, a4, mirrored)


def _shear_of_edge(vertices, edge, tri):
    (xi, xj, x3, x4), _meta = _slot_positions(vertices, edge, tri)
    cr = cr4(xi, xj, x3, x4)
    if not cr < 0.0:
        raise DegenerateQuad(f"edge {edge}: cross ratio {cr} is not negative")
    return math.log(-cr)


def shear_of_diagonal(p, i, j, a, b):
    """Shear of diagonal (i, j) inside the quad (i, a, j, b), given ccw."""
    cr = cr4(p.pos(i), p.pos(j), p.pos(b), p.pos(a))
    if not cr < 0.0:
        raise DegenerateQuad(f"quad ({i},{a},{j},{b}) not in convex position (cr={cr})")
    return math.log(-cr)


def polygon_shears(p, diagonals):
    """Shears of all diagonals of a disk triangulation of p."""
    n = p.n
    faces = _faces_of(n, diagonals)
    out = {}
    for d in diagonals:
        i, j = d
        adj = [f for f in faces if i in f and j in f]
        if len(adj) != 2:
            raise PolygonError(f"diagonal {d} is not interior to the triangulation")
        apexes = [next(v for v in f if v not in (i, j)) for f in adj]
        a = next(v for v in apexes if 0 < (v - i) % n < (j - i) % n)
        b = next(v for v in apexes if v != a)
        out[d] = shear_of_diagonal(p, i, j, a, b)
    return out


def polygon_from_shears(n, shears):
    """Develop the unique normalized n-gon with the given diagonal shears."""
    diagonals = sorted(shears)
    if len(diagonals) != n - 3:
        raise PolygonError("need shears on exactly n - 3 diagonals")
    faces = _faces_of(n, diagonals)
    if len(faces) != n - 2:
        raise PolygonError("diagonals do not triangulate the n-gon")
    # dual tree walk, rooted at the face containing the boundary edge (1, 2)
    root = next(f for f in faces if 1 in f and 2 in f)
    pos = {root[0]: INF, root[1]: 0.0, root[2]: 1.0}
    placed = {root}
    frontier = [root]
    while frontier:
        face = frontier.pop()
        for d in diagonals:
            i, j = d
            if i not in face or j not in face:
                continue
            other = next(f for f in faces if f != face and i in f and j in f)
            if other in placed:
                continue
            apex_old = next(v for v in face if v not in (i, j))
            apex_new = next(v for v in other if v not in (i, j))
            s = shears[d]
            inside = 0 < (apex_old - i) % n < (j - i) % n
            m = _inv(_std(pos[i], pos[j], pos[apex_old]))
            target = -math.exp(-s) if inside else -math.exp(s)
            pos[apex_new] = _apply(m, target)
            placed.add(other)
            frontier.append(other)
    if len(pos) != n:
        raise PolygonError("development did not reach every vertex")
    return IdealPolygon(tuple(pos[k] for k in range(1, n + 1))).normalize()


# ---------------------------------------------------------------------------
# earthquakes

def earthquake(p, lamination):
    """Shear p along disjoint diagonals; positive weights shear to the left.

    The left sign is the calibrated one: the cross-ratio shear of each
    supported diagonal changes by EARTHQUAKE_SHEAR_SIGN times its weight.
    """
    support = {tuple(sorted(d)): float(w) for d, w in lamination.items()}
    diags = list(support)
    for a in range(len(diags)):
        for b in range(a + 1, len(diags)):
            if diagonals_cross(diags[a], diags[b], p.n):
                raise OverlappingSupport(f"{diags[a]} crosses {diags[b]}")
    full = refine_fan(p.n, diags)
    shears = polygon_shears(p, full)
    for d, w in support.items():
        shears[d] += EARTHQUAKE_SHEAR_SIGN * w
    return polygon_from_shears(p.n, shears)


# ---------------------------------------------------------------------------
# derivatives: shear rates under vertex velocities

def _dlog_absdiff(a, b, da, db):
    if math.isinf(a) or math.isinf(b):
        return 0.0
    return (da - db) / (a - b)


def _reflect_deriv(b, i, j, db, di, dj):
    """Derivative of reflect_across(b, i, j) under endpoint velocities."""
    if math.isinf(i) or math.isinf(j):
        f, df = (j, dj) if math.isinf(i) else (i, di)
        if math.isinf(b):
            return 0.0
        return 2.0 * df - db
    c = 0.5 * (i + j)
    dc = 0.5 * (di + dj)
    r2 = 0.25 * (i - j) ** 2
    dr2 = 0.5 * (i - j) * (di - dj)
    if math.isinf(b):
        return dc
    u = b - c
    return dc + dr2 / u - r2 * (db - dc) / (u * u)


def shear_rates(p, tri, velocities):
    """d/dt of double_shears under the vertex velocity field (analytic)."""
    x = p.vertices
    v = tuple(velocities)
    if len(v) != p.n:
        raise PolygonError("velocity size mismatch")
    out = {}
    for e in tri.edges:
        i, j, a3, a4, mirrored = tri.quad(e)
        q = [x[i - 1], x[j - 1], x[a3 - 1], x[a4 - 1]]
        dq = [v[i - 1], v[j - 1], v[a3 - 1], v[a4 - 1]]
        if mirrored:
            q[3] = reflect_across(x[a4 - 1], x[i - 1], x[j - 1])
            dq[3] = _reflect_deriv(x[a4 - 1], x[i - 1], x[j - 1],
                                   v[a4 - 1], v[i - 1], v[j - 1])
        # log|cr| = log|q3-q1| + log|q4-q2| - log|q4-q1| - log|q3-q2|
        out[e] = (_dlog_absdiff(q[2], q[0], dq[2], dq[0])
                  + _dlog_absdiff(q[3], q[1], dq[3], dq[1])
                  - _dlog_absdiff(q[3], q[0], dq[3], dq[0])
                  - _dlog_absdiff(q[2], q[1], dq[2], dq[1]))
    return out


def infinitesimal_shear_field(p, tri, w, tol=None):
    """Vertex velocities whose shear rates match the balanced weights w.

    Solves the square system on the top diagonals (shears of the top copy
    are coordinates on the space of polygons) and reports, for every edge,
    the residual between the achieved rate and w.  For weights tangent to
    the space of doubles the residual vanishes.
    """
    if not is_balanced(tri, w, tol):
        raise NotBalanced("weights do not sum to zero at every vertex")
    n = p.n
    free = list(range(4, n + 1))
    tops = [e for e in tri.edges if e[2] == "top"]
    rows = len(tops)
    jac = np.zeros((rows, len(free)))
    for col, k in enumerate(free):
        vel = [0.0] * n
        vel[k - 1] = 1.0
        rates = shear_rates(p, tri, vel)
        for r, e in enumerate(tops):
            jac[r, col] = rates[e]
    rhs = np.array([w.get(e, 0.0) for e in tops])
    sol = np.linalg.solve(jac, rhs) if rows else np.zeros(0)
    velocities = [0.0, 0.0, 0.0] + [float(t) for t in sol]
    rates = shear_rates(p, tri, velocities)
    residual = {e: rates[e] - w.get(e, 0.0) for e in tri.edges}
    return tuple(velocities), residual


# ---------------------------------------------------------------------------
# weighted length functions

def length_fn(theta, p, tri, decoration=None):
    """l_theta = sum_e theta_e * ell_e on the double; needs balanced theta."""
    if not is_balanced(tri, theta):
        raise NotBalanced("theta is not balanced")
    deco = tuple(decoration) if decoration is not None else (1.0,) * p.n
    lengths = lambda_lengths(p, deco, tri)
    return sum(theta.get(e, 0.0) * lengths.ell[e] for e in tri.edges)


def length_fn_grad(theta, p, tri):
    """Gradient of l_theta in the free coordinates x4..xn (analytic)."""
    if not is_balanced(tri, theta):
        raise NotBalanced("theta is not balanced")
    x = p.vertices
    grad = [0.0] * (p.n - 3)
    for e in tri.edges:
        t = theta.get(e, 0.0)
        if t == 0.0:
            continue
        i, j, _side = e
        xi, xj = x[i - 1], x[j - 1]
        if math.isinf(xi) or math.isinf(xj):
            continue
        if i >= 4:
            grad[i - 4] += t * 2.0 / (xi - xj)
        if j >= 4:
            grad[j - 4] += t * 2.0 / (xj - xi)
    return tuple(grad)


def symplectic_form(tri, X, Y):
    """omega(X, Y) = (1/2) sum eps[i, j] X_i Y_j on length variations."""
    xv = np.array([X.get(e, 0.0) for e in tri.edges])
    yv = np.array([Y.get(e, 0.0) for e in tri.edges])
    return 0.5 * float(xv.dot(tri.eps.dot(yv)))


def symplectic_form_via_shears(tri, X, Y):
    """Same form written as sum_e X_e * ds_e(Y)."""
    yl = DecoratedLengths({e: Y.get(e, 0.0) for e in tri.edges}, ())
    sy = lengths_to_shears(yl, tri)
    return sum(X.get(e, 0.0) * sy[e] for e in tri.edges)


# ---------------------------------------------------------------------------
# crossing angles (used by the derivative formula along earthquake paths)

def crossing_angle(p, alpha, beta):
    """Angle in (0, pi) at which diagonal alpha crosses diagonal beta.

    Oriented so that along a left earthquake on beta the angle strictly
    decreases, and the derivative of a crossing edge's decorated length is
    cos of this angle.
    """
    if not diagonals_cross(tuple(sorted(alpha)), tuple(sorted(beta)), p.n):
        raise PolygonError(f"{alpha} does not cross {beta}")
    bi, bj = sorted(beta)
    b1, b2 = p.pos(bj), p.pos(bi)
    e1, e2 = p.pos(alpha[0]), p.pos(alpha[1])
    if in_ccw_interval(e1, b2, b1):
        a1, a2 = e1, e2
    else:
        a1, a2 = e2, e1
    chi = cr4(b2, b1, a2, a1)
    if not chi < 0.0:
        raise DegenerateQuad(f"geodesics do not cross transversally (chi={chi})")
    c = (1.0 + chi) / (1.0 - chi)
    return math.acos(max(-1.0, min(1.0, c)))

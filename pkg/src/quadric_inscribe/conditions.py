"""Planar embedded graphs with a Hamiltonian equator, the linear angle
conditions, conversions between the two condition systems, and exact
feasibility certificates.

An angle assignment is a dict from sorted edge pairs (i, j) to numbers.
Fraction values are checked exactly; float values with a tolerance.  For the
sphere-side system the exact representation is in units of pi, so that the
strict linear conditions are rational.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import resolve_tol
from . import simplex


class GraphError(Exception):
    pass


class NotPlanar(GraphError):
    pass


class NotThreeConnected(GraphError):
    pass


class TooLarge(GraphError):
    pass


class NotInCone(GraphError):
    pass


class RivinViolated(GraphError):
    pass


def edge_key(i, j):
    return (i, j) if i < j else (j, i)


def rotation_from_faces(faces):
    """Rotation system whose face tracing reproduces the oriented faces.

    Each face is a cyclic vertex tuple; at a vertex the rotation is the orbit
    of "came from x, continue to y" over the incident faces.
    """
    nxt = {}
    for face in faces:
        k = len(face)
        for t in range(k):
            prv, v, suc = face[t - 1], face[t], face[(t + 1) % k]
            nxt.setdefault(v, {})[prv] = suc
    rotation = {}
    for v, m in nxt.items():
        start = min(m)
        cyc = [start]
        while True:
            w = m[cyc[-1]]
            if w == start:
                break
            cyc.append(w)
            if len(cyc) > len(m):
                raise NotPlanar(f"face data inconsistent around vertex {v}")
        if len(cyc) != len(m):
            raise NotPlanar(f"neighbors of {v} do not form one rotation cycle")
        rotation[v] = tuple(cyc)
    return rotation


def _trace_faces(n, edges, rotation):
    darts = set()
    for (i, j) in edges:
        darts.add((i, j))
        darts.add((j, i))
    faces = []
    seen = set()
    for d0 in sorted(darts):
        if d0 in seen:
            continue
        face = []
        d = d0
        while True:
            seen.add(d)
            face.append(d[0])
            u, v = d
            rot = rotation[v]
            w = rot[(rot.index(u) + 1) % len(rot)]
            d = (v, w)
            if d == d0:
                break
            if len(face) > 2 * len(edges):
                raise NotPlanar("face tracing does not close up")
        faces.append(tuple(face))
    return faces


def _is_connected(n, adj, removed=()):
    alive = [v for v in range(1, n + 1) if v not in removed]
    if not alive:
        return True
    seen = {alive[0]}
    stack = [alive[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(alive)


@dataclass(frozen=True)
class EquatorGraph:
    """3-connected planar embedded graph whose equator is the cycle (1..n).

    The rotation system fixes the sphere embedding; faces are traced from it
    and must split into a top and a bottom disk along the equator.
    """

    n: int
    edges: frozenset
    rotation: dict
    top_hint: frozenset | None = None
    faces: tuple = field(init=False, repr=False)
    face_side: tuple = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n
        edges = frozenset(edge_key(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if n < 4:
            raise GraphError("need at least four vertices")
        verts = set(range(1, n + 1))
        if set(self.rotation) != verts:
            raise GraphError("rotation must cover vertices 1..n")
        adj = {v: set() for v in verts}
        for (i, j) in edges:
            if i == j or i not in verts or j not in verts:
                raise GraphError(f"bad edge {(i, j)}")
            adj[i].add(j)
            adj[j].add(i)
        for v in verts:
            if set(self.rotation[v]) != adj[v] or len(self.rotation[v]) != len(adj[v]):
                raise GraphError(f"rotation at {v} does not match its neighbors")
            if len(adj[v]) < 3:
                raise NotThreeConnected(f"vertex {v} has degree < 3")
        for e in _equator_pairs(n):
            if e not in edges:
                raise GraphError(f"equator edge {e} missing")
        if not _is_connected(n, adj):
            raise GraphError("graph is disconnected")
        for a in verts:
            for b in verts:
                if a < b and not _is_connected(n, adj, removed=(a, b)):
                    raise NotThreeConnected(f"removing {{{a},{b}}} disconnects the graph")
        faces = _trace_faces(n, edges, self.rotation)
        if n - len(edges) + len(faces) != 2:
            raise NotPlanar("Euler count fails for the rotation system")
        object.__setattr__(self, "faces", tuple(faces))
        object.__setattr__(self, "face_side", self._split_disks())

    def _split_disks(self):
        eq = set(_equator_pairs(self.n))
        # adjacency of faces across non-equator edges
        by_edge = {}
        for fi, face in enumerate(self.faces):
            k = len(face)
            for t in range(k):
                e = edge_key(face[t], face[(t + 1) % k])
                by_edge.setdefault(e, []).append(fi)
        for e, fs in by_edge.items():
            if len(fs) != 2:
                raise NotPlanar(f"edge {e} does not bound exactly two faces")
        comp = {}
        for root in range(len(self.faces)):
            if root in comp:
                continue
            label = len(set(comp.values()))
            stack = [root]
            comp[root] = label
            while stack:
                f = stack.pop()
                for e, fs in by_edge.items():
                    if e in eq or f not in fs:
                        continue
                    other = fs[0] if fs[1] == f else fs[1]
                    if other not in comp:
                        comp[other] = label
                        stack.append(other)
        labels = set(comp.values())
        if len(labels) != 2:
            raise GraphError("faces do not split into two disks along the equator")
        for e in eq:
            f1, f2 = by_edge[e]
            if comp[f1] == comp[f2]:
                raise GraphError("equator edge interior to one disk")
        if self.top_hint is not None:
            hint = {frozenset(f) for f in self.top_hint}
            top_label = next(comp[fi] for fi, f in enumerate(self.faces)
                             if frozenset(f) in hint)
        else:
            # default: the disk containing the face traced from the dart 1->2
            fi = next(i for i, f in enumerate(self.faces)
                      if any(f[t] == 1 and f[(t + 1) % len(f)] == 2 for t in range(len(f))))
            top_label = comp[fi]
        return tuple("top" if comp[i] == top_label else "bottom"
                     for i in range(len(self.faces)))

    # -- derived structure ---------------------------------------------------

    def sorted_edges(self):
        return sorted(self.edges)

    def edge_sides(self):
        eq = set(_equator_pairs(self.n))
        side = {}
        for fi, face in enumerate(self.faces):
            k = len(face)
            for t in range(k):
                e = edge_key(face[t], face[(t + 1) % k])
                if e in eq:
                    side[e] = "equator"
                else:
                    side.setdefault(e, self.face_side[fi])
                    if side[e] != self.face_side[fi]:
                        raise GraphError(f"edge {e} bounds both disks")
        return side

    def top_faces(self):
        return tuple(f for f, s in zip(self.faces, self.face_side) if s == "top")

    def bottom_faces(self):
        return tuple(f for f, s in zip(self.faces, self.face_side) if s == "bottom")

    def vertex_star(self, v):
        return frozenset(e for e in self.edges if v in e)

    def to_json_dict(self):
        return {
            "n": self.n,
            "edges": [list(e) for e in self.sorted_edges()],
            "rotation": {str(v): list(self.rotation[v]) for v in sorted(self.rotation)},
        }

    @staticmethod
    def from_json_dict(d):
        edges = frozenset(edge_key(int(i), int(j)) for i, j in d["edges"])
        rotation = {int(v): tuple(int(w) for w in nb) for v, nb in d["rotation"].items()}
        return EquatorGraph(int(d["n"]), edges, rotation)

    def marked_triangulation(self):
        """Fan-refine each disk face; returns (tri, added_diagonals)."""
        from .polygon import MarkedTriangulation

        sides = self.edge_sides()
        diag = {"top": set(), "bottom": set()}
        added = []
        for e, s in sides.items():
            if s != "equator":
                diag[s].add(e)
        for face, s in zip(self.faces, self.face_side):
            verts = list(face)
            if len(verts) <= 3:
                continue
            m = min(verts)
            t = verts.index(m)
            cyc = verts[t:] + verts[:t]
            for w in cyc[2:-1]:
                d = edge_key(m, w)
                diag[s].add(d)
                added.append((d[0], d[1], s))
        tri = MarkedTriangulation(self.n, tuple(sorted(diag["top"])),
                                  tuple(sorted(diag["bottom"])))
        return tri, tuple(sorted(set(added)))


def _equator_pairs(n):
    return [(k, k + 1) for k in range(1, n)] + [(1, n)]


def equator_graph_from_faces(n, oriented_faces, top_faces=None):
    edges = frozenset(edge_key(f[t], f[(t + 1) % len(f)])
                      for f in oriented_faces for t in range(len(f)))
    rotation = rotation_from_faces(oriented_faces)
    hint = frozenset(frozenset(f) for f in top_faces) if top_faces else None
    return EquatorGraph(n, edges, rotation, top_hint=hint)


# ---------------------------------------------------------------------------
# dual graph and circuits

@dataclass(frozen=True)
class DualGraph:
    graph: EquatorGraph
    adjacency: dict      # face index -> tuple of (face index, primal edge)
    equator_dual: frozenset

    @property
    def n_vertices(self):
        return len(self.graph.faces)

    def vertex_stars(self):
        return {v: self.graph.vertex_star(v) for v in range(1, self.graph.n + 1)}


def dual_graph(g):
    by_edge = {}
    for fi, face in enumerate(g.faces):
        k = len(face)
        for t in range(k):
            e = edge_key(face[t], face[(t + 1) % k])
            by_edge.setdefault(e, []).append(fi)
    adjacency = {fi: [] for fi in range(len(g.faces))}
    for e, (f1, f2) in by_edge.items():
        adjacency[f1].append((f2, e))
        adjacency[f2].append((f1, e))
    eq = frozenset(e for e in _equator_pairs(g.n))
    adjacency = {fi: tuple(sorted(v)) for fi, v in adjacency.items()}
    return DualGraph(g, adjacency, eq)


def simple_dual_circuits(dual, equator_quota=None, budget=10**7):
    """Simple cycles of the dual graph, as tuples of primal edges.

    With equator_quota = 2 only circuits using exactly two equator-dual
    edges are produced.  Raises TooLarge past the node budget.
    """
    adj = dual.adjacency
    eq = dual.equator_dual
    out = []
    visited = 0
    for root in sorted(adj):
        stack = [(root, [root], [], 0)]
        while stack:
            v, path, pedges, neq = stack.pop()
            visited += 1
            if visited > budget:
                raise TooLarge(f"circuit enumeration exceeded budget {budget}")
            for (w, e) in adj[v]:
                cnt = neq + (1 if e in eq else 0)
                if equator_quota is not None and cnt > equator_quota:
                    continue
                if w == root and len(path) >= 3:
                    if path[1] < path[-1]:  # kill the reflected copy
                        if equator_quota is None or cnt == equator_quota:
                            out.append(tuple(pedges + [e]))
                    continue
                if w <= root or w in path:
                    continue
                stack.append((w, path + [w], pedges + [e], cnt))
    return out


# ---------------------------------------------------------------------------
# condition checkers

@dataclass
class CheckReport:
    system: str
    ok: bool
    sign_violations: list
    vertex_violations: list
    circuit_violations: list
    n_circuits: int

    def as_dict(self):
        return {
            "system": self.system,
            "ok": self.ok,
            "sign_violations": [list(map(str, v)) for v in self.sign_violations],
            "vertex_violations": [[v, str(s)] for v, s in self.vertex_violations],
            "circuit_violations": [[list(map(list, c)), str(s)]
                                   for c, s in self.circuit_violations],
            "n_circuits": self.n_circuits,
        }


def _is_exact(theta):
    return all(isinstance(v, (Fraction, int)) for v in theta.values())


def check_ads_conditions(g, theta, tol=None, budget=10**7):
    """Sign, vertex-sum and circuit-positivity report for the cone system."""
    tol = resolve_tol(tol)
    exact = _is_exact(theta)
    eq = set(_equator_pairs(g.n))
    sign_v = []
    for e in g.sorted_edges():
        v = theta[e]
        if e in eq:
            if not v < 0:
                sign_v.append((e, v))
        else:
            if not v > 0:
                sign_v.append((e, v))
    scale = max([abs(float(v)) for v in theta.values()] + [1.0])
    vert_v = []
    for v in range(1, g.n + 1):
        s = sum(theta[e] for e in g.vertex_star(v))
        bad = (s != 0) if exact else (abs(s) > tol * scale)
        if bad:
            vert_v.append((v, s))
    circ_v = []
    stars = {frozenset(g.vertex_star(v)) for v in range(1, g.n + 1)}
    circuits = simple_dual_circuits(dual_graph(g), equator_quota=2, budget=budget)
    for c in circuits:
        if frozenset(c) in stars:
            continue
        s = sum(theta[e] for e in c)
        if not s > 0:
            circ_v.append((c, s))
    ok = not (sign_v or vert_v or circ_v)
    return CheckReport("ads", ok, sign_v, vert_v, circ_v, len(circuits))


def check_rivin_conditions(g, theta, tol=None, budget=10**7):
    """Sphere-side conditions; Fractions are read in units of pi."""
    tol = resolve_tol(tol)
    exact = _is_exact(theta)
    one = Fraction(1) if exact else math.pi
    two = Fraction(2) if exact else 2.0 * math.pi
    sign_v = []
    for e in g.sorted_edges():
        v = theta[e]
        if not (0 < v < one):
            sign_v.append((e, v))
    vert_v = []
    for v in range(1, g.n + 1):
        s = sum(theta[e] for e in g.vertex_star(v))
        bad = (s != two) if exact else (abs(s - two) > tol * max(1.0, float(two)))
        if bad:
            vert_v.append((v, s))
    circ_v = []
    stars = {frozenset(g.vertex_star(v)) for v in range(1, g.n + 1)}
    circuits = simple_dual_circuits(dual_graph(g), equator_quota=None, budget=budget)
    for c in circuits:
        if frozenset(c) in stars:
            continue
        s = sum(theta[e] for e in c)
        if not s > two:
            circ_v.append((c, s))
    ok = not (sign_v or vert_v or circ_v)
    return CheckReport("rivin", ok, sign_v, vert_v, circ_v, len(circuits))


# ---------------------------------------------------------------------------
# conversions between the two systems

def ads_to_rivin(g, theta, budget=10**7, tol=None):
    """Convert a cone point to a sphere-side assignment in units of pi.

    Returns (rho, theta_pi) where the radian scale factor is t = rho * pi and
    theta_pi[e] = rho*theta[e] + 1 on the equator, rho*theta[e] elsewhere.
    rho is half the largest admissible value.  Rational input is converted
    and validated exactly; float input with the float tolerance.
    """
    exact = _is_exact(theta)
    rep = check_ads_conditions(g, theta, tol=tol, budget=budget)
    if not rep.ok:
        raise NotInCone("input does not satisfy the cone conditions")
    th = {e: Fraction(v) for e, v in theta.items()}
    biggest = max(abs(v) for v in th.values())
    bound = Fraction(1) / biggest
    for c in simple_dual_circuits(dual_graph(g), equator_quota=None, budget=budget):
        s = sum(th[e] for e in c)
        if s < 0:
            bound = min(bound, Fraction(-1) / s)
    rho = bound / 2
    eq = set(_equator_pairs(g.n))
    out = {e: rho * th[e] + (1 if e in eq else 0) for e in th}
    if exact:
        rep2 = check_rivin_conditions(g, out, budget=budget)
    else:
        approx = {e: float(v) * math.pi for e, v in out.items()}
        rep2 = check_rivin_conditions(g, approx, tol=tol, budget=budget)
    if not rep2.ok:
        raise NotInCone("conversion failed to satisfy the sphere-side conditions")
    return rho, out


def rivin_to_ads(g, theta_pi, budget=10**7):
    """Subtract a straight angle on the equator; exact on Fractions."""
    exact = _is_exact(theta_pi)
    rep = check_rivin_conditions(g, theta_pi, budget=budget)
    if not rep.ok:
        raise RivinViolated("input does not satisfy the sphere-side conditions")
    eq = set(_equator_pairs(g.n))
    one = Fraction(1) if exact else math.pi
    return {e: v - one if e in eq else v for e, v in theta_pi.items()}


# ---------------------------------------------------------------------------
# exact linear algebra helpers

def _gauss_solve(a_rows, b):
    """Particular solution and null basis of A x = b over the rationals.

    Returns (x0, basis columns) or None when inconsistent.
    """
    rows = [[Fraction(x) for x in r] + [Fraction(t)] for r, t in zip(a_rows, b)]
    m = len(rows)
    ncol = len(a_rows[0]) if m else 0
    piv_cols = []
    r = 0
    for c in range(ncol):
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [t / pv for t in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][ncol] != 0:
            return None
    x0 = [Fraction(0)] * ncol
    for k, c in enumerate(piv_cols):
        x0[c] = rows[k][ncol]
    free = [c for c in range(ncol) if c not in piv_cols]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncol
        vec[fc] = Fraction(1)
        for k, c in enumerate(piv_cols):
            vec[c] = -rows[k][fc]
        basis.append(vec)
    return x0, basis


def exact_rank(a_rows):
    rows = [[Fraction(x) for x in r] for r in a_rows]
    m = len(rows)
    ncol = len(rows[0]) if m else 0
    r = 0
    for c in range(ncol):
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [t / pv for t in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return r


def vertex_incidence(g):
    edges = g.sorted_edges()
    return [[1 if v in e else 0 for e in edges] for v in range(1, g.n + 1)], edges


def cone_dimension(g):
    """Edge count minus the exact rank of the vertex-sum system."""
    a, edges = vertex_incidence(g)
    return len(edges) - exact_rank(a)


# ---------------------------------------------------------------------------
# feasibility with exact certificates

@dataclass
class FeasibilityCertificate:
    system: str
    feasible: bool
    witness: dict | None
    margin: Fraction
    violated: str | None = None
    units: str = "1"

    def replay(self, g, budget=10**7):
        if self.witness is None:
            return None
        if self.system == "rivin":
            return check_rivin_conditions(g, self.witness, budget=budget)
        return check_ads_conditions(g, self.witness, budget=budget)

    def as_dict(self):
        return {
            "system": self.system,
            "feasible": self.feasible,
            "margin": str(self.margin),
            "units": self.units,
            "violated": self.violated,
            "witness": None if self.witness is None
            else {f"{i}-{j}": str(v) for (i, j), v in sorted(self.witness.items())},
        }


def _feasibility_rows(g, system, budget):
    """Inequality rows a.y + coef*eps <= b in the equality-eliminated space."""
    a_inc, edges = vertex_incidence(g)
    target = [Fraction(2)] * g.n if system == "rivin" else [Fraction(0)] * g.n
    sol = _gauss_solve(a_inc, target)
    if sol is None:
        return None
    x0, basis = sol
    k = len(basis)
    eq = set(_equator_pairs(g.n))
    eidx = {e: i for i, e in enumerate(edges)}

    def theta_row(e):
        i = eidx[e]
        return [b[i] for b in basis], x0[i]

    rows = []  # (a_y list, eps coef, rhs, label)
    if system == "ads":
        for e in edges:
            a, c0 = theta_row(e)
            if e in eq:
                rows.append((a, Fraction(1), -c0, f"sign {e}"))
            else:
                rows.append(([-t for t in a], Fraction(1), c0, f"sign {e}"))
        norm_a = [Fraction(0)] * k
        norm_b = Fraction(1)
        for e in edges:
            a, c0 = theta_row(e)
            s = -1 if e in eq else 1
            norm_a = [u + s * t for u, t in zip(norm_a, a)]
            norm_b -= s * c0
        rows.append((norm_a, Fraction(0), norm_b, "normalization"))
        quota = 2
    else:
        for e in edges:
            a, c0 = theta_row(e)
            rows.append(([-t for t in a], Fraction(1), c0, f"lower {e}"))
            rows.append((a, Fraction(1), Fraction(1) - c0, f"upper {e}"))
        quota = None
    stars = {frozenset(g.vertex_star(v)) for v in range(1, g.n + 1)}
    circuit_rows = []
    for c in simple_dual_circuits(dual_graph(g), equator_quota=quota, budget=budget):
        if frozenset(c) in stars:
            continue
        a = [Fraction(0)] * k
        c0 = Fraction(0)
        for e in c:
            ea, e0 = theta_row(e)
            a = [u + t for u, t in zip(a, ea)]
            c0 += e0
        rhs = c0 - (Fraction(2) if system == "rivin" else Fraction(0))
        circuit_rows.append(([-t for t in a], Fraction(1), rhs, f"circuit {c}"))
    return x0, basis, edges, rows, circuit_rows


def feasibility(g, system="ads", budget=10**7, presolve=True):
    """Maximize the slack margin of the strict system; exact verdict.

    The strict inequalities are relaxed to margin eps, the equalities are
    eliminated exactly, and the system is feasible iff the optimal eps is
    positive.  A float presolve proposes a witness that is verified in exact
    arithmetic; the exact simplex is the fallback and the authority.
    """
    if system not in ("ads", "rivin"):
        raise ValueError("system must be 'ads' or 'rivin'")
    pieces = _feasibility_rows(g, system, budget)
    units = "pi" if system == "rivin" else "1"
    if pieces is None:
        return FeasibilityCertificate(system, False, None, Fraction(-1),
                                      violated="vertex equalities inconsistent",
                                      units=units)
    x0, basis, edges, base_rows, circuit_rows = pieces
    all_rows = base_rows + circuit_rows
    k = len(basis)

    def theta_from_y(y):
        out = {}
        for i, e in enumerate(edges):
            out[e] = x0[i] + sum(b[i] * y[j] for j, b in enumerate(basis))
        return out

    def exact_margin(y):
        """(min slack over margin rows, label), or None on hard violation."""
        m = None
        for a, ce, b, label in all_rows:
            slack = b - sum(t * u for t, u in zip(a, y))
            if ce == 0:
                if slack < 0:
                    return None
                continue
            if m is None or slack < m[0]:
                m = (slack, label)
        return m

    if presolve:
        cf = [0.0] * k + [1.0]
        aub = [[float(t) for t in a] + [float(ce)] for a, ce, _b, _l in all_rows]
        bub = [float(b) for _a, _ce, b, _l in all_rows]
        sol = simplex.presolve_float(cf, aub, bub)
        if sol is not None and sol[-1] > 1e-7:
            y = simplex.rationalize(sol[:k])
            m = exact_margin(y)
            if m is not None and m[0] > 0:
                witness = theta_from_y(y)
                return FeasibilityCertificate(system, True, witness, m[0], units=units)

    # exact phase with lazily added circuit rows: dropping rows only raises
    # the optimal margin, so a non-positive partial optimum is already final
    c = [Fraction(0)] * k + [Fraction(1)]
    active = list(base_rows)
    pending = list(circuit_rows)
    while True:
        aub = [list(a) + [ce] for a, ce, _b, _l in active]
        bub = [b for _a, _ce, b, _l in active]
        status, x, value = simplex.solve_exact(c, aub, bub)
        if status != "optimal":
            raise GraphError("margin LP unbounded; normalization row missing")
        y = x[:k]
        if value <= 0:
            tight = None
            for a, ce, b, label in active:
                if ce != 0 and b - sum(t * u for t, u in zip(a, y)) == value:
                    tight = label
                    break
            return FeasibilityCertificate(system, False, None, value,
                                          violated=tight, units=units)
        violated = [row for row in pending
                    if row[2] - sum(t * u for t, u in zip(row[0], y)) < value]
        if not violated:
            witness = theta_from_y(y)
            return FeasibilityCertificate(system, True, witness, value, units=units)
        active.extend(violated)
        pending = [row for row in pending if row not in violated]


def interior_cone_point(g, rng, budget=10**7):
    """Random interior point of the cone: LP witness plus a safe perturbation."""
    cert = feasibility(g, "ads", budget=budget)
    if not cert.feasible:
        raise NotInCone("graph has no interior cone point")
    x0, basis, edges, base_rows, circuit_rows = _feasibility_rows(g, "ads", budget)
    rows = base_rows + circuit_rows
    k = len(basis)
    # recover y for the witness: theta = x0 + B y with B columns independent
    bmat = np.array([[float(b[i]) for b in basis] for i in range(len(edges))])
    tvec = np.array([float(cert.witness[e]) for e in edges]) - np.array([float(t) for t in x0])
    y0, *_ = np.linalg.lstsq(bmat, tvec, rcond=None)
    delta = rng.standard_normal(k)
    delta /= max(1e-12, np.linalg.norm(delta))
    lam_max = math.inf
    for a, ce, b, _label in rows:
        if ce == 0:
            continue  # the scale row may sit at equality
        av = np.array([float(t) for t in a])
        slack = float(b) - float(av.dot(y0))
        slope = float(av.dot(delta))
        if slope > 1e-14:
            lam_max = min(lam_max, 0.5 * slack / slope)
    lam = float(rng.uniform(0.2, 0.9)) * (lam_max if math.isfinite(lam_max) else 1.0)
    y = y0 + lam * delta
    theta = {}
    for i, e in enumerate(edges):
        theta[e] = float(x0[i]) + float(bmat[i].dot(y))
    rep = check_ads_conditions(g, theta, budget=budget)
    if not rep.ok:
        theta = {e: float(v) for e, v in cert.witness.items()}
    return theta


# ---------------------------------------------------------------------------
# Hamiltonian cycles

def hamiltonian_cycles(g, budget=10**7):
    """All Hamiltonian cycles up to rotation and reflection, starting at 1."""
    adj = {v: sorted(w for w in range(1, g.n + 1) if edge_key(v, w) in g.edges)
           for v in range(1, g.n + 1)}
    out = []
    visited = 0
    n = g.n

    def rec(path, used):
        nonlocal visited
        visited += 1
        if visited > budget:
            raise TooLarge("Hamiltonian search exceeded its budget")
        v = path[-1]
        if len(path) == n:
            if 1 in adj[v] and path[1] < path[-1]:
                out.append(tuple(path))
            return
        for w in adj[v]:
            if w != 1 and not used[w]:
                used[w] = True
                path.append(w)
                rec(path, used)
                path.pop()
                used[w] = False

    used = [False] * (n + 1)
    used[1] = True
    rec([1], used)
    return sorted(out)

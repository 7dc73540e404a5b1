"""Exhaustive catalog of 3-connected planar graphs at desk scale.

Sphere triangulations are generated from the tetrahedron by vertex
splitting; general polyhedral graphs by deleting edges while 3-connectivity
survives.  Isomorphism is decided through a canonical form of the rotation
system over all roots and both chiralities, which for 3-connected planar
graphs is a complete invariant.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from .conditions import (EquatorGraph, GraphError, edge_key,
                         rotation_from_faces, _trace_faces, _is_connected)


@dataclass(frozen=True)
class PlainGraph:
    """Embedded planar graph without a marked equator."""

    n: int
    rotation: dict
    edges: frozenset = field(init=False)

    def __post_init__(self):
        edges = set()
        for v, nbrs in self.rotation.items():
            for w in nbrs:
                edges.add(edge_key(v, w))
        object.__setattr__(self, "edges", frozenset(edges))

    def faces(self):
        return _trace_faces(self.n, self.edges, self.rotation)

    def is_triangulation(self):
        return all(len(f) == 3 for f in self.faces())

    def degree(self, v):
        return len(self.rotation[v])


def canonical_form(rotation):
    """Canonical signature of an embedded graph, reflection included."""
    best = None
    for v0 in rotation:
        for w0 in rotation[v0]:
            for flip in (False, True):
                labels = {v0: 1}
                order = [v0]
                entry = {v0: w0}
                i = 0
                while i < len(order):
                    v = order[i]
                    i += 1
                    rot = tuple(reversed(rotation[v])) if flip else rotation[v]
                    k = rot.index(entry[v])
                    for w in rot[k:] + rot[:k]:
                        if w not in labels:
                            labels[w] = len(labels) + 1
                            order.append(w)
                            entry[w] = v
                sig = []
                for v in order:
                    rot = tuple(reversed(rotation[v])) if flip else rotation[v]
                    k = rot.index(entry[v])
                    sig.append(tuple(labels[w] for w in rot[k:] + rot[:k]))
                sig = tuple(sig)
                if best is None or sig < best:
                    best = sig
    return best


def _is_three_connected(n, edges):
    adj = {v: set() for v in range(1, n + 1)}
    for (i, j) in edges:
        adj[i].add(j)
        adj[j].add(i)
    if any(len(adj[v]) < 3 for v in adj):
        return False
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if not _is_connected(n, adj, removed=(a, b)):
                return False
    return True


def tetrahedron_plain():
    faces = [(1, 2, 3), (1, 3, 4), (1, 4, 2), (2, 4, 3)]
    return PlainGraph(4, rotation_from_faces(faces))


def _try_split(rotation, v, a, off):
    """Split vertex v along its rotation; returns new rotations or None."""
    rot = rotation[v]
    k = len(rot)
    if not 1 <= off <= k - 1:
        return None
    arc1 = [rot[(a + t) % k] for t in range(off + 1)]
    arc2 = [rot[(a + off + t) % k] for t in range(k - off + 1)]
    wa, wb = arc1[0], arc1[-1]
    new = max(rotation) + 1
    results = []
    for ins_a in (0, 1):
        for ins_b in (0, 1):
            r = {u: list(nb) for u, nb in rotation.items()}
            r[v] = arc1 + [new]
            r[new] = arc2 + [v]
            for u in arc2[1:-1]:
                r[u] = [new if x == v else x for x in r[u]]
            for u, pos in ((wa, ins_a), (wb, ins_b)):
                lst = r[u]
                t = lst.index(v)
                lst.insert(t + pos, new)
            cand = {u: tuple(nb) for u, nb in r.items()}
            edges = set()
            ok = True
            for u, nb in cand.items():
                if len(set(nb)) != len(nb):
                    ok = False
                    break
                for w in nb:
                    edges.add(edge_key(u, w))
            if not ok:
                continue
            try:
                faces = _trace_faces(len(cand), edges, cand)
            except Exception:
                continue
            if len(cand) - len(edges) + len(faces) != 2:
                continue
            if any(len(f) != 3 for f in faces):
                continue
            results.append(cand)
    return results


@lru_cache(maxsize=None)
def triangulations(n):
    """All sphere triangulations with n vertices, one per iso class."""
    if n < 4:
        raise GraphError("triangulations start at n = 4")
    if n == 4:
        return (tetrahedron_plain(),)
    out = {}
    for g in triangulations(n - 1):
        for v in g.rotation:
            k = len(g.rotation[v])
            for a in range(k):
                for off in range(1, k):
                    for cand in _try_split(g.rotation, v, a, off) or []:
                        pg = PlainGraph(n, cand)
                        key = canonical_form(pg.rotation)
                        if key not in out:
                            out[key] = pg
    return tuple(out[k] for k in sorted(out))


@lru_cache(maxsize=None)
def polyhedra(n):
    """All 3-connected planar graphs with n vertices, one per iso class."""
    seen = {}
    stack = []
    for t in triangulations(n):
        key = canonical_form(t.rotation)
        if key not in seen:
            seen[key] = t
            stack.append(t)
    while stack:
        g = stack.pop()
        for e in sorted(g.edges):
            i, j = e
            rot = {v: tuple(w for w in nb if not (v in e and w in e and {v, w} == {i, j}))
                   for v, nb in g.rotation.items()}
            rot = {v: tuple(w for w in nb if edge_key(v, w) != e) for v, nb in g.rotation.items()}
            if len(rot[i]) < 3 or len(rot[j]) < 3:
                continue
            edges = g.edges - {e}
            if not _is_three_connected(n, edges):
                continue
            child = PlainGraph(n, rot)
            key = canonical_form(rot)
            if key not in seen:
                seen[key] = child
                stack.append(child)
    return tuple(seen[k] for k in sorted(seen))


def random_triangulation(n, rng):
    """Random sphere triangulation grown from the tetrahedron by splits."""
    g = tetrahedron_plain()
    while g.n < n:
        for _attempt in range(200):
            v = int(rng.integers(1, g.n + 1))
            k = len(g.rotation[v])
            a = int(rng.integers(0, k))
            off = int(rng.integers(1, k))
            cands = _try_split(g.rotation, v, a, off) or []
            if cands:
                g = PlainGraph(g.n + 1, cands[0])
                break
        else:
            raise GraphError("random split walk stalled")
    return g


def relabel_with_equator(g, cycle):
    """Relabel a plain graph so the given Hamiltonian cycle becomes (1..n)."""
    if len(cycle) != g.n:
        raise GraphError("cycle must visit every vertex once")
    newlab = {v: k + 1 for k, v in enumerate(cycle)}
    rotation = {newlab[v]: tuple(newlab[w] for w in nb) for v, nb in g.rotation.items()}
    edges = frozenset(edge_key(newlab[i], newlab[j]) for (i, j) in g.edges)
    return EquatorGraph(g.n, edges, rotation)


# ---------------------------------------------------------------------------
# named fixtures

def k4_graph():
    from .polygon import MarkedTriangulation
    return triangulation_graph(MarkedTriangulation(4, ((1, 3),), ((2, 4),)))


def octahedron_graph():
    from .polygon import MarkedTriangulation
    tri = MarkedTriangulation(6, ((1, 3), (3, 5), (1, 5)), ((2, 4), (4, 6), (2, 6)))
    return triangulation_graph(tri)


def triangulation_graph(tri):
    """EquatorGraph of a marked triangulation of the doubled disk."""
    from .conditions import equator_graph_from_faces

    faces = [f for f, _side in tri._oriented_faces()]
    tops = [f for f, side in tri._oriented_faces() if side == "top"]
    return equator_graph_from_faces(tri.n, faces, top_faces=tops)


def cube_plain():
    faces = [(1, 4, 3, 2), (5, 6, 7, 8), (1, 2, 6, 5), (2, 3, 7, 6),
             (3, 4, 8, 7), (4, 1, 5, 8)]
    return PlainGraph(8, rotation_from_faces(faces))


def kleetope(g):
    """Stack a new vertex on every face of an embedded plain graph."""
    faces = g.faces()
    out = []
    nxt = g.n
    for f in faces:
        nxt += 1
        k = len(f)
        for t in range(k):
            out.append((f[t], f[(t + 1) % k], nxt))
    return PlainGraph(nxt, rotation_from_faces(out))


def triakis_tetrahedron():
    """Kleetope of the tetrahedron: the classical non-inscribable example."""
    return kleetope(tetrahedron_plain())


def goldner_harary():
    """Smallest non-Hamiltonian planar triangulation (11 vertices)."""
    bipyramid = PlainGraph(5, rotation_from_faces(
        [(1, 2, 4), (2, 3, 4), (3, 1, 4), (2, 1, 5), (3, 2, 5), (1, 3, 5)]))
    return kleetope(bipyramid)

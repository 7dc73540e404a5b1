import math

import numpy as np

from conftest import FIXTURE_THETA, random_valid_pair
from quadric_inscribe.ads import AdSPolyhedron, ads_hull, joined_points
from quadric_inscribe.algebra import GC, ProjPoint, cross_ratio
from quadric_inscribe.hp import hp_from_angles
from quadric_inscribe.hull3d import DegenerateHull
from quadric_inscribe.inscribe import (InscribedMesh, _solid_side, export,
                                       import_mesh, inscribe, quadric_value,
                                       verify_inscribed)
from quadric_inscribe.polygon import IdealPolygon

INF = math.inf


def fixture_mesh():
    P = AdSPolyhedron((INF, 0, 1, 2), (INF, 0, 1, 3))
    return inscribe(P)


def test_ads_fixture_mesh():
    mesh = fixture_mesh()
    assert mesh.quadric == "hyperboloid"
    assert len(mesh.vertices) == 4 and len(mesh.faces) == 4
    rep = verify_inscribed(mesh)
    assert rep.ok
    assert rep.quadric_residual < 1e-10
    assert rep.midpoint_margin > 0


def test_hp_fixture_mesh(k4, rng):
    P = hp_from_angles(k4, FIXTURE_THETA, rng=rng)
    mesh = inscribe(P, k4)
    assert mesh.quadric == "cylinder"
    rep = verify_inscribed(mesh)
    assert rep.ok


def test_sphere_passthrough(rng):
    vals = rng.normal(size=6) + 1j * rng.normal(size=6)
    pts = [ProjPoint.from_value(GC(v.real, v.imag, -1)) for v in vals]
    mesh = inscribe(pts)
    assert mesh.quadric == "sphere"
    rep = verify_inscribed(mesh)
    assert rep.ok
    assert {v for f in mesh.faces for v in f} == set(range(6))


def test_fault_injection_off_quadric():
    mesh = fixture_mesh()
    verts = [list(v) for v in mesh.vertices]
    verts[0][0] += 1e-3  # push (1, 0, 0) along the quadric normal
    bad = InscribedMesh(mesh.quadric, [tuple(v) for v in verts], mesh.faces)
    rep = verify_inscribed(bad)
    assert not rep.ok
    assert 1e-3 < rep.quadric_residual < 5e-3


def test_fault_injection_nonconvex():
    # a handcrafted non-convex mesh: one vertex pulled inside
    verts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -0.2, 0.1), (0, 0, 1)]
    faces = [(0, 2, 4), (2, 1, 4), (1, 3, 4), (3, 0, 4), (0, 3, 2), (2, 3, 1)]
    bad = InscribedMesh("sphere", verts, faces)
    rep = verify_inscribed(bad)
    assert not rep.ok


def test_export_import_round_trips():
    mesh = fixture_mesh()
    for fmt in ("obj", "json"):
        data = export(mesh, fmt)
        back = import_mesh(data, fmt)
        assert back.quadric == mesh.quadric
        assert back.faces == mesh.faces
        assert back.vertices == mesh.vertices  # bit-exact
        assert export(back, fmt) == data


def test_obj_line_counts():
    data = export(fixture_mesh(), "obj").decode()
    assert sum(1 for l in data.splitlines() if l.startswith("v ")) == 4
    assert sum(1 for l in data.splitlines() if l.startswith("f ")) == 4


def test_midpoint_criterion_matches_sampling(rng):
    # midpoint interiority iff 100 random interior points per chord/face stay
    # strictly inside the solid region
    mesh = fixture_mesh()
    verts = [np.asarray(v) for v in mesh.vertices]
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            mid_ok = quadric_value(mesh.quadric, 0.5 * (verts[i] + verts[j])) < 1.0
            inside = True
            for _ in range(100):
                t = rng.uniform(0.02, 0.98)
                p = t * verts[i] + (1 - t) * verts[j]
                if quadric_value(mesh.quadric, p) >= 1.0:
                    inside = False
            assert mid_ok == inside
    for f in mesh.faces:
        for _ in range(100):
            w = rng.dirichlet(np.ones(len(f)))
            p = sum(wi * verts[v] for wi, v in zip(w, f))
            assert quadric_value(mesh.quadric, p) < 1.0


def test_projective_equivalence(rng):
    # applying an isometry before inscribing preserves combinatorics and the
    # cross ratios of vertex quadruples on the quadric
    from quadric_inscribe.polygon import _apply as mob_apply
    P = AdSPolyhedron((INF, 0, 1, 2), (INF, 0, 1, 3))
    m = (1.3, 0.4, 0.2, 1.0)  # a real Mobius map, applied to both factors
    xs = tuple(mob_apply(m, x) for x in P.xs)
    ys = tuple(mob_apply(m, y) for y in P.ys)
    Q = AdSPolyhedron(IdealPolygon(xs).normalize().vertices,
                      IdealPolygon(ys).normalize().vertices)
    g1, g2 = ads_hull(P), ads_hull(Q)
    assert g1.edges == g2.edges and g1.edge_sides() == g2.edge_sides()
    z1 = cross_ratio(*joined_points(P))
    z2 = cross_ratio(*joined_points(Q))
    assert abs(z1.re - z2.re) < 1e-9 and abs(z1.im - z2.im) < 1e-9
    assert verify_inscribed(inscribe(Q)).ok


def test_solid_side_normalization():
    # a narrow-spread solid mesh involutes to a genuine outer-side mesh;
    # the normalization maps it back with all margins intact
    from quadric_inscribe.hull3d import convex_hull
    pts = []
    for a, z in zip((0.2, 0.9, 1.7, 2.6), (0.3, -0.2, 0.5, -0.4)):
        r = math.sqrt(1 + z * z)
        pts.append((r * math.cos(a), r * math.sin(a), z))
    faces = convex_hull(pts).faces
    solid = InscribedMesh("hyperboloid", pts, faces)
    assert verify_inscribed(solid).ok
    assert _solid_side(solid) is solid  # already on the solid side
    moved = [(x3 / x2, 1.0 / x2, x1 / x2) for (x1, x2, x3) in pts]
    outside = InscribedMesh("hyperboloid", moved, faces)
    assert quadric_value("hyperboloid", np.mean(np.asarray(moved), axis=0)) > 1.0
    for v in moved:
        assert abs(quadric_value("hyperboloid", v) - 1.0) < 1e-9
    fixed = _solid_side(outside)
    assert fixed.provenance.get("side_normalized")
    rep = verify_inscribed(fixed)
    assert rep.ok and rep.midpoint_margin > 0


def test_pipeline_property_random(rng):
    ok = 0
    for _ in range(30):
        n = int(rng.integers(4, 8))
        pl, pr = random_valid_pair(n, rng)
        try:
            P = AdSPolyhedron.from_pair(pl, pr)
            mesh = inscribe(P)
        except DegenerateHull:
            continue
        rep = verify_inscribed(mesh)
        assert rep.ok
        ok += 1
    assert ok > 20

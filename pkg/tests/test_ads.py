import math

import numpy as np
import pytest

from conftest import (FIXTURE_THETA, FIXTURE_X, FIXTURE_Y, random_interior_theta,
                      random_valid_pair)
from quadric_inscribe.ads import (AdSPolyhedron, StepCollapse,
                                  ads_from_angles, ads_hull, is_degenerate,
                                  joined_points, laminations_from_pair, measure,
                                  tetrahedron_from_vertex_angles, validate)
from quadric_inscribe.algebra import cross_ratio
from quadric_inscribe.conditions import check_ads_conditions
from quadric_inscribe.hull3d import DegenerateHull

INF = math.inf
LN2 = math.log(2.0)


def test_validate_examples():
    assert validate(AdSPolyhedron(FIXTURE_X, FIXTURE_X))
    assert is_degenerate(AdSPolyhedron(FIXTURE_X, FIXTURE_X))
    P = AdSPolyhedron(FIXTURE_X, FIXTURE_Y)
    assert validate(P) and not is_degenerate(P)
    assert not validate(AdSPolyhedron(FIXTURE_X, (INF, 0.0, 2.0, 1.0)))


def test_validate_matches_cross_ratio_criterion(rng):
    # cyclic-order validity is equivalent to every 4-subset having a
    # space-like cross ratio with space-like complement
    from quadric_inscribe.algebra import GC
    from itertools import combinations
    for _ in range(60):
        n = 5
        xs = list(rng.normal(size=n) * 2)
        ys = list(rng.normal(size=n) * 2)
        if min(abs(a - b) for i, a in enumerate(xs) for b in xs[i + 1:]) < 0.05:
            continue
        if min(abs(a - b) for i, a in enumerate(ys) for b in ys[i + 1:]) < 0.05:
            continue
        P = AdSPolyhedron(tuple(xs), tuple(ys))
        pts = joined_points(P)
        crit = True
        one = GC(1.0, 0.0, 1)
        for quad in combinations(range(n), 4):
            try:
                z = cross_ratio(*(pts[t] for t in quad))
            except Exception:
                crit = False
                break
            if not (z.sq_norm() > 0 and (one - z).sq_norm() > 0):
                crit = False
                break
        assert crit == validate(P)


def test_hull_fixture(fixture_polyhedron):
    g = ads_hull(fixture_polyhedron)
    sides = g.edge_sides()
    assert sides[(1, 3)] == "top" and sides[(2, 4)] == "bottom"


def test_hull_small_earthquake_pentagon(rng):
    from quadric_inscribe.polygon import earthquake, random_polygon
    # a single-diagonal pair is exactly flat over the complementary region
    # (the shear fixes the crease endpoints), so the hull refuses it
    p = random_polygon(5, rng)
    q = earthquake(p, {(2, 5): 0.05})
    with pytest.raises(DegenerateHull):
        ads_hull(AdSPolyhedron.from_pair(p, q.normalize()))
    # a lamination on two disjoint diagonals creases exactly those on top,
    # with the bottom triangulation forced by convexity
    q = earthquake(p, {(2, 5): 0.3, (3, 5): 0.05})
    P = AdSPolyhedron.from_pair(p, q.normalize())
    g = ads_hull(P)
    sides = g.edge_sides()
    assert sides[(2, 5)] == "top" and sides[(3, 5)] == "top"
    assert sum(1 for s in sides.values() if s == "bottom") == 2


def test_hull_flat_pair_degenerate():
    with pytest.raises(DegenerateHull):
        ads_hull(AdSPolyhedron(FIXTURE_X, FIXTURE_X))


def test_measure_fixture_exact(fixture_polyhedron):
    m = measure(fixture_polyhedron)
    for e, v in FIXTURE_THETA.items():
        assert abs(m.theta[e] - v) < 1e-12
    for v in range(1, 5):
        assert abs(sum(m.theta[e] for e in m.combinatorics.vertex_star(v))) < 1e-12
    assert m.relation_residual < 1e-12
    mags = {(1, 2): 0.5 * math.log(6.0), (1, 3): 0.5 * LN2, (1, 4): 0.5 * math.log(3.0)}
    for e, want in mags.items():
        key = next(k for k in m.s if (k[0], k[1]) == e)
        assert abs(abs(m.s[key]) - want) < 1e-12


def test_swap_projections_negates_angles(fixture_polyhedron):
    # time reversal: raw oriented angles negate, the disks trade places, and
    # the left and right shear vectors swap
    from quadric_inscribe.ads import _measure_raw
    m = measure(fixture_polyhedron)
    swapped = AdSPolyhedron(fixture_polyhedron.ys, fixture_polyhedron.xs)
    m2 = measure(swapped)
    tri, _ = m.combinatorics.marked_triangulation()
    raw1 = _measure_raw(joined_points(fixture_polyhedron), tri)
    raw2 = _measure_raw(joined_points(swapped), tri)
    for e in tri.edges:
        assert abs(raw2[e][1] + raw1[e][1]) < 1e-12
    sides1 = m.combinatorics.edge_sides()
    sides2 = m2.combinatorics.edge_sides()
    flip = {"top": "bottom", "bottom": "top", "equator": "equator"}
    assert sides2 == {e: flip[s] for e, s in sides1.items()}
    # under the mirror relabeling, left and right shears trade places and
    # every shear vector negates (the induced metric is mirrored)
    for (i, j, side) in m.s_left:
        k2 = (i, j, flip[side])
        assert abs(m2.s_left[k2] + m.s_right[(i, j, side)]) < 1e-12
        assert abs(m2.s_right[k2] + m.s_left[(i, j, side)]) < 1e-12
        assert abs(m2.s[k2] + m.s[(i, j, side)]) < 1e-12


def test_laminations_fixture(fixture_pair):
    plus, minus, deg = laminations_from_pair(*fixture_pair)
    assert not deg
    assert set(plus) == {(1, 3)} and abs(plus[(1, 3)] - LN2) < 1e-12
    assert set(minus) == {(2, 4)} and abs(minus[(2, 4)] - LN2) < 1e-12
    # swapping the pair exchanges the two laminations
    plus2, minus2, _ = laminations_from_pair(fixture_pair[1], fixture_pair[0])
    assert set(plus2) == {(2, 4)} and set(minus2) == {(1, 3)}


def test_laminations_degenerate_pair(fixture_pair):
    p = fixture_pair[0]
    plus, minus, deg = laminations_from_pair(p, p)
    assert deg and plus == {} and minus == {}


def test_measured_angles_pass_cone_monte_carlo(rng):
    for _ in range(60):
        n = int(rng.integers(4, 11))
        pl, pr = random_valid_pair(n, rng)
        try:
            m = measure(AdSPolyhedron.from_pair(pl, pr))
        except DegenerateHull:
            continue
        assert check_ads_conditions(m.combinatorics, m.theta, tol=1e-9).ok


def test_earthquake_relations_monte_carlo(rng):
    worst = 0.0
    for _ in range(60):
        n = int(rng.integers(4, 11))
        pl, pr = random_valid_pair(n, rng)
        try:
            m = measure(AdSPolyhedron.from_pair(pl, pr))
        except DegenerateHull:
            continue
        worst = max(worst, m.relation_residual)
    assert worst < 1e-9


def test_ads_from_angles_fixture(k4, rng):
    P = ads_from_angles(k4, FIXTURE_THETA, rng=rng)
    assert np.allclose(P.xs[1:], FIXTURE_X[1:], atol=1e-7)
    assert np.allclose(P.ys[1:], FIXTURE_Y[1:], atol=1e-7)


def test_ads_from_angles_scaling_collapse(k4, rng):
    ratios = []
    for c in (1.0, 0.5, 0.1):
        theta = {e: c * v for e, v in FIXTURE_THETA.items()}
        P = ads_from_angles(k4, theta, rng=rng)
        gap = max(abs(y - x) for x, y in zip(P.xs[3:], P.ys[3:]))
        ratios.append(gap / c)
    assert max(ratios) < 3.0 * min(ratios)  # gap shrinks linearly with the scale


def test_ads_round_trip_random(rng):
    for _ in range(12):
        n = int(rng.integers(4, 7))
        g, theta = random_interior_theta(n, rng)
        P = ads_from_angles(g, theta, rng=rng)
        m = measure(P, g)
        assert max(abs(m.theta[e] - theta[e]) for e in theta) < 1e-8


def test_symmetric_octahedron_realization(rng):
    # symmetric weights make non-face vertex quadruples exactly coplanar;
    # the strict hull must tolerate coplanarity on non-supporting planes
    from quadric_inscribe.catalog import octahedron_graph
    oc = octahedron_graph()
    sides = oc.edge_sides()
    theta = {e: -0.25 if sides[e] == "equator" else 0.25 for e in oc.sorted_edges()}
    P = ads_from_angles(oc, theta, rng=rng)
    m = measure(P)  # strict re-hull, no hint
    assert max(abs(m.theta[e] - theta[e]) for e in theta) < 1e-8


def test_ads_from_angles_rejects_outside_cone(k4, rng):
    from quadric_inscribe.conditions import NotInCone
    with pytest.raises(NotInCone):
        ads_from_angles(k4, {e: -v for e, v in FIXTURE_THETA.items()}, rng=rng)


def test_step_collapse_on_forced_failure(k4, rng):
    theta = {e: 40.0 * v for e, v in FIXTURE_THETA.items()}
    with pytest.raises(StepCollapse) as err:
        ads_from_angles(k4, theta, rng=rng, step_floor=0.2)
    assert err.value.t_reached < 1.0


def test_local_rigidity_jacobian(rng):
    # measured angles have full rank 2n-6 in the 2(n-3) vertex coordinates
    from quadric_inscribe.ads import _fast_theta, _pack, _unpack
    for P in (AdSPolyhedron(FIXTURE_X, FIXTURE_Y),
              AdSPolyhedron.from_pair(*random_valid_pair(5, rng)),
              AdSPolyhedron.from_pair(*random_valid_pair(6, rng))):
        n = P.n
        g = ads_hull(P)
        tri, _ = g.marked_triangulation()
        vec = _pack(P.xs, P.ys)
        edges = tri.edges

        def angles(v):
            xs, ys = _unpack(v, n)
            th = _fast_theta(xs, ys, tri)
            return np.array([th[e] for e in edges])

        jac = np.zeros((len(edges), len(vec)))
        h = 1e-6
        for c in range(len(vec)):
            vp, vm = vec.copy(), vec.copy()
            vp[c] += h
            vm[c] -= h
            jac[:, c] = (angles(vp) - angles(vm)) / (2 * h)
        sv = np.linalg.svd(jac, compute_uv=False)
        assert len(vec) == 2 * n - 6
        assert sv[len(vec) - 1] > 1e-6


def test_pseudo_holomorphic_differential(rng):
    # swapping and sign-flipping the left/right perturbation multiplies the
    # derivative of the logarithmic cross ratios by tau
    from quadric_inscribe.ads import _fast_theta, _unpack
    from quadric_inscribe.polygon import cr4
    P = AdSPolyhedron.from_pair(*random_valid_pair(5, rng))
    g = ads_hull(P)
    tri, _ = g.marked_triangulation()

    def logs(xs, ys):
        outx, outy = [], []
        for e in tri.edges:
            i, j, a3, a4, _m = tri.quad(e)
            outx.append(math.log(abs(cr4(xs[i - 1], xs[j - 1], xs[a3 - 1], xs[a4 - 1]))))
            outy.append(math.log(abs(cr4(ys[i - 1], ys[j - 1], ys[a3 - 1], ys[a4 - 1]))))
        return np.array(outx), np.array(outy)

    h = 1e-6
    for _ in range(20):
        vx = np.concatenate([[0, 0, 0], rng.normal(size=2)])
        vy = np.concatenate([[0, 0, 0], rng.normal(size=2)])

        def deriv(dx, dy):
            xp = [a + h * b for a, b in zip(P.xs, dx)]
            xm = [a - h * b for a, b in zip(P.xs, dx)]
            yp = [a + h * b for a, b in zip(P.ys, dy)]
            ym = [a - h * b for a, b in zip(P.ys, dy)]
            lxp, lyp = logs(xp, yp)
            lxm, lym = logs(xm, ym)
            return (lxp - lxm) / (2 * h), (lyp - lym) / (2 * h)

        dx1, dy1 = deriv(vx, vy)
        dx2, dy2 = deriv(-vx, vy)  # tau * V swaps the sign of the left part
        # tau * (a + b tau) = b + a tau: left part flips sign, right stays
        assert np.allclose(dx2, -dx1, atol=1e-5)
        assert np.allclose(dy2, dy1, atol=1e-5)


def test_tetrahedron_determined_by_two_vertex_angles():
    P = tetrahedron_from_vertex_angles(FIXTURE_THETA[(1, 2)], FIXTURE_THETA[(1, 3)])
    assert abs(P.xs[3] - 2.0) < 1e-10
    assert abs(P.ys[3] - 3.0) < 1e-10


def test_even_n_alternating_equator_deformation(k4, rng):
    # adding +-delta on alternating equator edges leaves the laminations of
    # the realized polyhedron unchanged
    delta = 0.05
    theta2 = dict(FIXTURE_THETA)
    theta2[(1, 2)] += delta
    theta2[(3, 4)] += delta
    theta2[(2, 3)] -= delta
    theta2[(1, 4)] -= delta
    assert check_ads_conditions(k4, theta2).ok
    P1 = ads_from_angles(k4, FIXTURE_THETA, rng=rng)
    P2 = ads_from_angles(k4, theta2, rng=rng)
    l1 = laminations_from_pair(P1.left(), P1.right())
    l2 = laminations_from_pair(P2.left(), P2.right())
    for a, b in zip(l1[:2], l2[:2]):
        assert set(a) == set(b)
        for e in a:
            assert abs(a[e] - b[e]) < 1e-7

"""Acceptance suite: one criterion per test, one pass/fail line each."""

import math
import time

import numpy as np
import pytest

from conftest import (FIXTURE_THETA, FIXTURE_X, FIXTURE_Y, random_interior_theta,
                      random_valid_pair)
from quadric_inscribe import catalog, conditions
from quadric_inscribe.ads import (AdSPolyhedron, ads_from_angles, measure)
from quadric_inscribe.algebra import GC, ProjPoint
from quadric_inscribe.conditions import (check_ads_conditions, exact_rank,
                                         feasibility, hamiltonian_cycles,
                                         vertex_incidence)
from quadric_inscribe.hp import (hp2_area_and_angles, hp_angles, hp_from_angles,
                                 hp_hull, section_of, DegenerateEdge)
from quadric_inscribe.hull3d import DegenerateHull
from quadric_inscribe.inscribe import inscribe, verify_inscribed
from quadric_inscribe.polygon import (double_shears, earthquake,
                                      crossing_angle, lambda_lengths, length_fn,
                                      lengths_to_shears, random_polygon,
                                      diagonals_cross)

SEED = 0x5EED


def report(num, ok, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="module")
def ads_sample(rng):
    """>= 1000 measured random polyhedra, N in 4..10, for criteria 2 and 3."""
    out = []
    while len(out) < 1000:
        n = int(rng.integers(4, 11))
        pl, pr = random_valid_pair(n, rng)
        try:
            out.append(measure(AdSPolyhedron.from_pair(pl, pr)))
        except DegenerateHull:
            continue
    return out


def test_criterion_1_tetrahedron_fixture():
    t0 = time.time()
    m = measure(AdSPolyhedron(FIXTURE_X, FIXTURE_Y))
    err = max(abs(m.theta[e] - v) for e, v in FIXTURE_THETA.items())
    vsum = max(abs(sum(m.theta[e] for e in m.combinatorics.vertex_star(v)))
               for v in range(1, 5))
    dt = time.time() - t0
    report(1, err < 1e-12 and vsum < 1e-12 and dt < 1.0,
           f"fixture angle error {err:.2e}, vertex sums {vsum:.2e}, {dt:.3f}s")


def test_criterion_2_earthquake_relations(ads_sample):
    t0 = time.time()
    worst = max(m.relation_residual for m in ads_sample)
    dt = time.time() - t0
    report(2, worst < 1e-9 and len(ads_sample) >= 1000,
           f"{len(ads_sample)} polyhedra, worst |s_R - s - theta| {worst:.2e}, "
           f"{dt:.1f}s after sampling")


def test_criterion_3_cone_membership(ads_sample):
    t0 = time.time()
    violations = 0
    circuits = 0
    for m in ads_sample:
        rep = check_ads_conditions(m.combinatorics, m.theta, tol=1e-9)
        circuits += rep.n_circuits
        if not rep.ok:
            violations += 1
    dt = time.time() - t0
    report(3, violations == 0,
           f"{len(ads_sample)} samples, {circuits} circuits enumerated, "
           f"{violations} violations, {dt:.1f}s")


def test_criterion_4_hp_round_trip(rng):
    t0 = time.time()
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(4, 9))
        g, theta = random_interior_theta(n, rng)
        P = hp_from_angles(g, theta, rng=rng)  # runs 10 agreeing starts
        got = hp_angles(P, g).theta
        worst = max(worst, max(abs(got[e] - theta[e]) for e in theta))
    dt = time.time() - t0
    report(4, worst < 1e-6 and dt < 300.0,
           f"200 round trips, worst angle error {worst:.2e}, {dt:.1f}s")


def test_criterion_5_ads_round_trip(rng):
    t0 = time.time()
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(4, 7))
        g, theta = random_interior_theta(n, rng)
        P = ads_from_angles(g, theta, rng=rng)
        m = measure(P, g)
        worst = max(worst, max(abs(m.theta[e] - theta[e]) for e in theta))
    dt = time.time() - t0
    report(5, worst < 1e-8 and dt < 600.0,
           f"100 continuations with hull tracking, worst residual {worst:.2e}, {dt:.1f}s")


def test_criterion_6_infinitesimal_gauss_bonnet(rng):
    t0 = time.time()
    worst = 0.0
    done = 0
    while done < 100:
        n = int(rng.integers(4, 8))
        g, theta = random_interior_theta(n, rng)
        P = hp_from_angles(g, theta, rng=rng)
        xs = P.polygon.vertices
        k = int(rng.integers(1, n))
        j = int(rng.integers(1, n))
        if k == j:
            continue
        xi1 = _interior_point(xs, k, rng)
        xi2 = _interior_point(xs, j, rng)
        try:
            S = section_of(P, hp_hull(P, merge_coplanar=True), xi1, xi2)
            area, angles = hp2_area_and_angles(S)
        except DegenerateEdge:
            continue
        worst = max(worst, abs(area - sum(angles)) / abs(area))
        done += 1
    dt = time.time() - t0
    report(6, worst < 1e-8, f"100 sections, worst |area - sum|/area {worst:.2e}, {dt:.1f}s")


def _interior_point(xs, k, rng):
    """Random boundary point inside the k-th equator interval."""
    t = float(rng.uniform(0.2, 0.8))
    a = xs[k - 1]
    b = xs[k % len(xs)]
    if math.isinf(a):
        return b + 1.0 / t
    if math.isinf(b):
        return a + 1.0 / t
    return a + t * (b - a)


def test_criterion_7_penner_transformation(rng):
    t0 = time.time()
    from test_polygon import random_tri
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(4, 9))
        tri = random_tri(n, rng)
        p = random_polygon(n, rng)
        deco = tuple(np.exp(rng.normal(size=n)))
        s_cr = double_shears(p, tri)
        s_pen = lengths_to_shears(lambda_lengths(p, deco, tri), tri)
        worst = max(worst, max(abs(s_cr[e] - s_pen[e]) / max(1.0, abs(s_cr[e]))
                               for e in tri.edges))
    dt = time.time() - t0
    report(7, worst < 1e-10,
           f"100 decorated polygons, worst shear mismatch {worst:.2e}, {dt:.1f}s")


def test_criterion_8_rank_of_vertex_system(rng):
    t0 = time.time()
    tested = 0
    for n in range(4, 9):
        for pg in catalog.triangulations(n):
            eg = catalog.relabel_with_equator(pg, hamiltonian_cycles(pg)[0])
            a, edges = vertex_incidence(eg)
            assert exact_rank(a) == n
            assert len(edges) - n == 2 * n - 6
            tested += 1
    for n in (9, 10, 11, 12):
        for _ in range(3):
            pg = catalog.random_triangulation(n, rng)
            eg = catalog.relabel_with_equator(pg, hamiltonian_cycles(pg)[0])
            a, _edges = vertex_incidence(eg)
            assert exact_rank(a) == n
            tested += 1
    dt = time.time() - t0
    report(8, True, f"{tested} triangulations with exact rank N, {dt:.1f}s")


def test_criterion_9_theorem_equivalence():
    t0 = time.time()
    checked = 0
    discrepancies = []
    for n in range(4, 9):
        for gid, pg in enumerate(catalog.polyhedra(n)):
            cycles = hamiltonian_cycles(pg)
            ads_any = False
            for cyc in cycles:
                eg = catalog.relabel_with_equator(pg, cyc)
                if feasibility(eg, "ads").feasible:
                    ads_any = True
                    break
            rivin_ok = False
            if cycles:
                eg = catalog.relabel_with_equator(pg, cycles[0])
                rivin_ok = feasibility(eg, "rivin").feasible
            if ads_any != (rivin_ok and bool(cycles)):
                discrepancies.append((n, gid))
            checked += 1
    dt = time.time() - t0
    report(9, not discrepancies and dt < 1800.0,
           f"{checked} graphs (N <= 8), discrepancies {discrepancies}, {dt:.1f}s")


def test_criterion_10_kerckhoff_wolpert_and_convexity(rng):
    from test_polygon import random_tri
    from quadric_inscribe.hp import _theta_on_tri
    t0 = time.time()
    worst_dev = 0.0
    min_second = math.inf
    for _ in range(50):
        n = int(rng.integers(5, 8))
        tri = random_tri(n, rng)
        while set(tri.top) & set(tri.bottom):
            tri = random_tri(n, rng)
        g = catalog.triangulation_graph(tri)
        theta = _theta_on_tri(g, tri, conditions.interior_cone_point(g, rng))
        p0 = random_polygon(n, rng)
        beta = tri.top[int(rng.integers(0, len(tri.top)))]
        crossers = [e for e in tri.edges
                    if diagonals_cross((e[0], e[1]), beta, n)]
        h = 1e-5
        consts = []
        for t in np.linspace(0.0, 1.0, 6):
            pt = earthquake(p0, {beta: float(t)})
            lp = length_fn(theta, earthquake(p0, {beta: float(t + h)}), tri)
            lm = length_fn(theta, earthquake(p0, {beta: float(t - h)}), tri)
            l0 = length_fn(theta, pt, tri)
            deriv = (lp - lm) / (2 * h)
            second = (lp - 2 * l0 + lm) / (h * h)
            min_second = min(min_second, second)
            angsum = sum(theta[e] * math.cos(crossing_angle(pt, (e[0], e[1]), beta))
                         for e in crossers)
            consts.append(deriv - angsum)
        worst_dev = max(worst_dev, max(consts) - min(consts))
    dt = time.time() - t0
    report(10, worst_dev < 1e-6 and min_second > 0,
           f"50 paths, derivative-identity drift {worst_dev:.2e}, "
           f"smallest second difference {min_second:.2e}, {dt:.1f}s")


def test_criterion_11_inscription_verification(rng):
    t0 = time.time()
    produced = 0
    for _ in range(40):
        n = int(rng.integers(4, 8))
        pl, pr = random_valid_pair(n, rng)
        try:
            mesh = inscribe(AdSPolyhedron.from_pair(pl, pr))
        except DegenerateHull:
            continue
        assert verify_inscribed(mesh).ok
        produced += 1
    for _ in range(20):
        n = int(rng.integers(4, 7))
        g, theta = random_interior_theta(n, rng)
        P = hp_from_angles(g, theta, rng=rng)
        mesh = inscribe(P, g)
        assert verify_inscribed(mesh).ok
        produced += 1
    for _ in range(10):
        vals = rng.normal(size=6) + 1j * rng.normal(size=6)
        pts = [ProjPoint.from_value(GC(v.real, v.imag, -1)) for v in vals]
        try:
            mesh = inscribe(pts)
        except DegenerateHull:
            continue
        assert verify_inscribed(mesh).ok
        produced += 1
    dt = time.time() - t0
    report(11, produced >= 60, f"{produced} meshes verified on all three "
                               f"inscription invariants, {dt:.1f}s")

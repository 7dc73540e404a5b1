import math

import numpy as np
import pytest

from quadric_inscribe import catalog, conditions
from quadric_inscribe.ads import AdSPolyhedron
from quadric_inscribe.polygon import IdealPolygon, random_polygon

INF = math.inf

FIXTURE_X = (INF, 0.0, 1.0, 2.0)
FIXTURE_Y = (INF, 0.0, 1.0, 3.0)

FIXTURE_THETA = {
    (1, 2): -0.5 * math.log(1.5),
    (3, 4): -0.5 * math.log(1.5),
    (2, 3): -0.5 * math.log(4.0 / 3.0),
    (1, 4): -0.5 * math.log(4.0 / 3.0),
    (1, 3): 0.5 * math.log(2.0),
    (2, 4): 0.5 * math.log(2.0),
}


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


@pytest.fixture
def k4():
    return catalog.k4_graph()


@pytest.fixture
def fixture_pair():
    return IdealPolygon(FIXTURE_X), IdealPolygon(FIXTURE_Y)


@pytest.fixture
def fixture_polyhedron():
    return AdSPolyhedron(FIXTURE_X, FIXTURE_Y)


def random_valid_pair(n, rng, spread=1.0):
    return random_polygon(n, rng, spread), random_polygon(n, rng, spread)


def random_equator_graph(n, rng):
    """Random catalog graph relabeled along a random Hamiltonian cycle."""
    graphs = catalog.polyhedra(n)
    pg = graphs[int(rng.integers(0, len(graphs)))]
    cycles = conditions.hamiltonian_cycles(pg)
    cyc = cycles[int(rng.integers(0, len(cycles)))]
    return catalog.relabel_with_equator(pg, cyc)


def random_interior_theta(n, rng):
    """Random graph with a random interior cone point; some catalog graphs
    (the non-inscribable ones) have empty cones and are resampled."""
    while True:
        g = random_equator_graph(n, rng)
        try:
            return g, conditions.interior_cone_point(g, rng)
        except conditions.NotInCone:
            continue

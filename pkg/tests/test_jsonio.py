import math
from fractions import Fraction

from conftest import FIXTURE_THETA
from quadric_inscribe import jsonio
from quadric_inscribe.ads import AdSPolyhedron
from quadric_inscribe.hp import HPPolyhedron
from quadric_inscribe.polygon import IdealPolygon, MarkedTriangulation

INF = math.inf


def test_polygon_round_trip():
    p = IdealPolygon((INF, 0.0, 1.0, 2.5))
    doc = jsonio.polygon_out(p)
    assert doc[0] == "inf"
    assert jsonio.polygon_in(doc).vertices == p.vertices


def test_angles_round_trip_floats_and_rationals():
    doc = jsonio.angles_out(FIXTURE_THETA)
    assert set(doc) == {"1-2", "1-3", "1-4", "2-3", "2-4", "3-4"}
    back = jsonio.angles_in(doc)
    assert back == FIXTURE_THETA
    exact = {(1, 2): Fraction(-3, 7), (1, 3): Fraction(5, 14)}
    doc = jsonio.angles_out(exact)
    assert doc["1-2"] == "-3/7"
    assert jsonio.angles_in(doc) == exact


def test_triangulation_round_trip():
    tri = MarkedTriangulation(5, ((1, 3), (1, 4)), ((2, 4), (2, 5)))
    back = jsonio.tri_in(jsonio.tri_out(tri))
    assert back.edges == tri.edges


def test_weights_round_trip():
    tri = MarkedTriangulation(4, ((1, 3),), ((2, 4),))
    w = {e: float(k) for k, e in enumerate(tri.edges)}
    assert jsonio.weights_in(jsonio.weights_out(w)) == w


def test_polyhedra_round_trips():
    P = AdSPolyhedron((INF, 0, 1, 2), (INF, 0, 1, 3))
    back = jsonio.ads_in(jsonio.ads_out(P))
    assert back.xs == P.xs and back.ys == P.ys
    H = HPPolyhedron(IdealPolygon((INF, 0.0, 1.0, 2.0)), (0, 0, 0, 0.7))
    back = jsonio.hp_in(jsonio.hp_out(H))
    assert back.polygon.vertices == H.polygon.vertices
    assert back.velocity == H.velocity


def test_graph_round_trip(k4):
    back = jsonio.graph_in(jsonio.graph_out(k4))
    assert back.edges == k4.edges and back.rotation == k4.rotation

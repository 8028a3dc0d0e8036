import math

import pytest
from hypothesis import given, settings, strategies as st

from discplan.geometry import (
    CCW,
    CW,
    EPS,
    Arc,
    CoincidentCircles,
    DegeneratePolygon,
    Point,
    Polygon,
    Segment,
    assemble_chains,
    chain_is_closed,
    chain_signed_area,
    dist_point_segment,
    intersect_circle_circle,
    intersect_circle_segment,
    intersect_segment_segment,
    min_dist_piece_point,
    min_dist_piece_segment,
    piece_intersections,
    point_in_chain,
    split_pieces,
)


def pts_close(got, want, eps=1e-7):
    assert len(got) == len(want)
    unmatched = list(want)
    for g in got:
        for w in unmatched:
            if g.dist(w) <= eps:
                unmatched.remove(w)
                break
        else:
            raise AssertionError(f"{g} not among {want}")


class TestSegmentSegment:
    def test_perpendicular_crossing(self):
        got = intersect_segment_segment(
            Segment(Point(0, 0), Point(2, 0)), Segment(Point(1, -1), Point(1, 1)))
        pts_close(got, [Point(1, 0)])

    def test_disjoint_collinear(self):
        got = intersect_segment_segment(
            Segment(Point(0, 0), Point(1, 0)), Segment(Point(2, 0), Point(3, 0)))
        assert got == []

    def test_collinear_overlap_reports_extremes(self):
        got = intersect_segment_segment(
            Segment(Point(0, 0), Point(2, 0)), Segment(Point(1, 0), Point(3, 0)))
        pts_close(got, [Point(1, 0), Point(2, 0)])


class TestCircleSegment:
    def test_secant(self):
        got = intersect_circle_segment(Point(0, 0), 2.0,
                                       Segment(Point(-3, 0), Point(3, 0)))
        pts_close(got, [Point(-2, 0), Point(2, 0)])

    def test_tangency_snaps_to_single_point(self):
        got = intersect_circle_segment(Point(0, 0), 2.0,
                                       Segment(Point(-3, 2), Point(3, 2)))
        pts_close(got, [Point(0, 2)])

    def test_miss(self):
        got = intersect_circle_segment(Point(0, 0), 1.0,
                                       Segment(Point(2, 0), Point(3, 0)))
        assert got == []


class TestCircleCircle:
    def test_external_tangency(self):
        got = intersect_circle_circle(Point(0, 0), 2, Point(4, 0), 2)
        pts_close(got, [Point(2, 0)])

    def test_disjoint(self):
        assert intersect_circle_circle(Point(0, 0), 2, Point(5, 0), 2) == []

    def test_two_point_crossing(self):
        # derived by solving x^2+y^2=4 and (x-2)^2+y^2=4 analytically
        got = intersect_circle_circle(Point(0, 0), 2, Point(2, 0), 2)
        pts_close(got, [Point(1, math.sqrt(3)), Point(1, -math.sqrt(3))])

    def test_coincident_raises(self):
        with pytest.raises(CoincidentCircles):
            intersect_circle_circle(Point(0, 0), 2, Point(0, 0), 2)


class TestDistances:
    def test_point_above_segment(self):
        assert dist_point_segment(Point(0, 1), Segment(Point(-1, 0), Point(1, 0))) == 1

    def test_point_beyond_endpoint(self):
        assert dist_point_segment(Point(3, 0), Segment(Point(-1, 0), Point(1, 0))) == 2

    def test_point_to_endpoint_diagonal(self):
        d = dist_point_segment(Point(2, 2), Segment(Point(0, 0), Point(1, 0)))
        assert abs(d - math.sqrt(5)) < 1e-12

    def test_segment_piece_min_dist(self):
        seg = Segment(Point(0, 0), Point(4, 0))
        assert min_dist_piece_point(seg, Point(2, 5)) == 5

    def test_full_circle_min_dist(self):
        circle = [Arc(Point(0, 0), 1.0, 0.0, math.pi, CCW),
                  Arc(Point(0, 0), 1.0, math.pi, 0.0, CCW)]
        d = min(min_dist_piece_point(a, Point(3, 0)) for a in circle)
        assert abs(d - 2.0) < 1e-12

    def test_quarter_arc_clamps_to_endpoint(self):
        # oracle: min over dense samples of |p - arc(t)|; the quarter arc
        # from angle 0 to pi/2 is closest to (-3,0) at its (0,2) endpoint
        arc = Arc(Point(0, 0), 2.0, 0.0, math.pi / 2, CCW)
        p = Point(-3, 0)
        sampled = min(arc.point_at(k / 5000).dist(p) for k in range(5001))
        got = min_dist_piece_point(arc, p)
        assert abs(sampled - math.sqrt(13)) < 1e-6
        assert got <= sampled
        assert got >= sampled - 1e-6
        assert abs(got - math.sqrt(13)) < 1e-12


coords = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
radii = st.floats(min_value=0.1, max_value=5, allow_nan=False)


@st.composite
def segments(draw):
    ax, ay = draw(coords), draw(coords)
    bx, by = draw(coords), draw(coords)
    if math.hypot(bx - ax, by - ay) < 1e-3:
        bx += 1.0
    return Segment(Point(ax, ay), Point(bx, by))


@given(c=st.tuples(coords, coords), r=radii, seg=segments())
@settings(max_examples=300, deadline=None)
def test_circle_segment_points_satisfy_both_equations(c, r, seg):
    center = Point(*c)
    for p in intersect_circle_segment(center, r, seg):
        assert abs(p.dist(center) - r) <= 10 * EPS * max(1.0, r)
        assert dist_point_segment(p, seg) <= 10 * EPS * max(1.0, seg.length())


@given(c1=st.tuples(coords, coords), r1=radii, c2=st.tuples(coords, coords), r2=radii)
@settings(max_examples=300, deadline=None)
def test_circle_circle_symmetric_and_on_both(c1, r1, c2, r2):
    p1, p2 = Point(*c1), Point(*c2)
    try:
        fwd = intersect_circle_circle(p1, r1, p2, r2)
        rev = intersect_circle_circle(p2, r2, p1, r1)
    except CoincidentCircles:
        return
    pts_close(fwd, rev, eps=1e-6)
    for p in fwd:
        assert abs(p.dist(p1) - r1) <= 1e-6
        assert abs(p.dist(p2) - r2) <= 1e-6


@given(s1=segments(), s2=segments())
@settings(max_examples=300, deadline=None)
def test_segment_segment_symmetric(s1, s2):
    fwd = intersect_segment_segment(s1, s2)
    rev = intersect_segment_segment(s2, s1)
    pts_close(fwd, rev, eps=1e-6)
    for p in fwd:
        assert dist_point_segment(p, s1) <= 1e-6
        assert dist_point_segment(p, s2) <= 1e-6


@given(c=st.tuples(coords, coords), r=radii,
       a0=st.floats(min_value=-math.pi, max_value=math.pi),
       sweep=st.floats(min_value=0.05, max_value=2 * math.pi - 0.05),
       p=st.tuples(coords, coords))
@settings(max_examples=300, deadline=None)
def test_arc_point_distance_matches_sampling(c, r, a0, sweep, p):
    arc = Arc(Point(*c), r, a0, a0 + sweep, CCW)
    q = Point(*p)
    got = min_dist_piece_point(arc, q)
    sampled = min(arc.point_at(k / 1000).dist(q) for k in range(1001))
    assert got <= sampled + EPS
    # distance is 1-Lipschitz along the arc, so the sampled minimum can
    # overshoot the true minimum by at most half a sample step
    assert got >= sampled - arc.length() / 2000 - EPS


@given(seg=segments(), other=segments())
@settings(max_examples=200, deadline=None)
def test_piece_segment_min_dist_vs_sampling(seg, other):
    got = min_dist_piece_segment(seg, other)
    sampled = min(dist_point_segment(seg.point_at(k / 300), other) for k in range(301))
    assert got <= sampled + EPS
    assert got >= sampled - 0.2


class TestPolygon:
    def test_centroid_of_unit_square_inside(self):
        sq = Polygon((Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)))
        assert sq.contains(Point(0.5, 0.5)) == "inside"

    def test_vertex_on_boundary(self):
        sq = Polygon((Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)))
        assert sq.contains(Point(0, 0)) == "boundary"

    def test_far_point_outside(self):
        sq = Polygon((Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)))
        assert sq.contains(Point(5, 5)) == "outside"

    def test_cw_input_normalized_to_ccw(self):
        sq = Polygon((Point(0, 0), Point(0, 1), Point(1, 1), Point(1, 0)))
        assert sq.signed_area() > 0

    def test_self_intersecting_rejected(self):
        with pytest.raises(DegeneratePolygon):
            Polygon((Point(0, 0), Point(2, 2), Point(2, 0), Point(0, 2)))

    def test_collinear_vertex_merged(self):
        sq = Polygon((Point(0, 0), Point(1, 0), Point(2, 0), Point(2, 2), Point(0, 2)))
        assert sq.n == 4


class TestChains:
    def test_split_cross(self):
        pieces = [Segment(Point(-1, 0), Point(1, 0)), Segment(Point(0, -1), Point(0, 1))]
        parts = split_pieces(pieces)
        assert len(parts) == 4

    def test_assemble_square(self):
        pieces = [
            Segment(Point(0, 0), Point(1, 0)),
            Segment(Point(1, 1), Point(1, 0)),  # deliberately flipped
            Segment(Point(1, 1), Point(0, 1)),
            Segment(Point(0, 1), Point(0, 0)),
        ]
        chains = assemble_chains(pieces)
        assert len(chains) == 1
        chain = [p for p, _ in chains[0]]
        assert chain_is_closed(chain)
        assert abs(abs(chain_signed_area(chain)) - 1.0) < 1e-9

    def test_chain_area_with_arcs(self):
        # full unit circle built from two half arcs
        top = Arc(Point(0, 0), 1.0, 0.0, math.pi, CCW)
        bot = Arc(Point(0, 0), 1.0, math.pi, 0.0, CCW)
        assert abs(chain_signed_area([top, bot]) - math.pi) < 1e-12

    def test_point_in_chain(self):
        square = [
            Segment(Point(0, 0), Point(2, 0)),
            Segment(Point(2, 0), Point(2, 2)),
            Segment(Point(2, 2), Point(0, 2)),
            Segment(Point(0, 2), Point(0, 0)),
        ]
        assert point_in_chain(Point(1, 1), square)
        assert not point_in_chain(Point(3, 3), square)
        assert not point_in_chain(Point(-0.5, 1), square)

    def test_arc_segment_intersections_have_params(self):
        arc = Arc(Point(0, 0), 2.0, 0, math.pi, CCW)
        seg = Segment(Point(-3, 1), Point(3, 1))
        hits = piece_intersections(seg, arc)
        assert len(hits) == 2
        for t_seg, t_arc, pt in hits:
            assert seg.point_at(t_seg).dist(pt) < 1e-7
            assert arc.point_at(t_arc).dist(pt) < 1e-7

    def test_arc_reversed_roundtrip(self):
        arc = Arc(Point(1, 2), 2.0, 0.3, 2.2, CCW)
        rev = arc.reversed()
        assert rev.orientation == CW
        assert rev.start.approx(arc.end)
        assert rev.end.approx(arc.start)
        assert abs(rev.sweep - arc.sweep) < 1e-12

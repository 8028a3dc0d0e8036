import math
import random

import pytest

from discplan.freespace import (
    BOUNDARY,
    FLOATING,
    classify_position,
    collision_region,
    compute_free_space,
    contact_interval,
    puncture,
)
from discplan.geometry import (
    Arc,
    Point,
    Segment,
    chain_is_closed,
    chain_signed_area,
    point_in_chain,
)
from discplan.validator import grid_free_space_oracle, grid_disc_region_components

from conftest import dumbbell, square


class TestErosion:
    def test_square_erodes_to_square(self, square6):
        fs = compute_free_space(square6)
        assert len(fs.components) == 1
        comp = fs.components[0]
        assert all(isinstance(p, Segment) for p in comp.boundary)
        assert len(comp.boundary) == 4
        assert abs(comp.area - 16.0) < 1e-9
        assert comp.bbox == pytest.approx((1.0, 1.0, 5.0, 5.0))

    def test_chains_closed_and_ccw(self, square6, lshape):
        for poly in (square6, lshape):
            for comp in compute_free_space(poly).components:
                assert chain_is_closed(comp.boundary)
                assert chain_signed_area(comp.boundary) > 0

    def test_lshape_has_single_reflex_arc(self, lshape):
        fs = compute_free_space(lshape)
        assert len(fs.components) == 1
        arcs = [p for p in fs.components[0].boundary if isinstance(p, Arc)]
        assert len(arcs) == 1
        assert arcs[0].center.approx(Point(6, 4))
        assert abs(arcs[0].radius - 1.0) < 1e-12

    def test_narrow_corridor_splits_components(self, dumbbell_narrow):
        fs = compute_free_space(dumbbell_narrow)
        assert len(fs.components) == 2
        oracle = grid_free_space_oracle(dumbbell_narrow, 0.02)
        assert oracle.n_components == 2

    def test_wide_corridor_stays_connected(self, dumbbell_wide):
        fs = compute_free_space(dumbbell_wide)
        assert len(fs.components) == 1
        oracle = grid_free_space_oracle(dumbbell_wide, 0.02)
        assert oracle.n_components == 1

    def test_too_thin_polygon_has_empty_free_space(self):
        fs = compute_free_space(square(1.9))
        assert fs.components == ()


class TestLocate:
    def test_center_of_square(self, square6):
        fs = compute_free_space(square6)
        assert fs.locate(Point(3, 3)) == 0

    def test_point_too_close_to_wall(self, square6):
        fs = compute_free_space(square6)
        assert fs.locate(Point(3, 0.5)) is None

    def test_exactly_unit_clearance_counts_as_inside(self, square6):
        fs = compute_free_space(square6)
        assert fs.locate(Point(3, 1.0)) == 0

    def test_agreement_with_brute_force(self, lshape):
        fs = compute_free_space(lshape)
        rng = random.Random(7)
        edges = lshape.edges()
        checked = 0
        for _ in range(2000):
            p = Point(rng.uniform(-1, 11), rng.uniform(-1, 11))
            clearance = min(e.dist_to_point(p) for e in edges)
            if abs(clearance - 1.0) < 1e-6:
                continue  # boundary band
            want_free = lshape.contains(p) == "inside" and clearance >= 1.0
            got = fs.locate(p)
            assert (got is not None) == want_free, p
            checked += 1
        assert checked > 1500

    def test_dumbbell_components_are_distinguished(self, dumbbell_narrow):
        fs = compute_free_space(dumbbell_narrow)
        left = fs.locate(Point(3, 3))
        right = fs.locate(Point(13, 3))
        assert left is not None and right is not None
        assert left != right
        assert fs.locate(Point(8, 3)) is None  # inside the impassable corridor


class TestCollisionRegion:
    def test_floating_disc_is_full_circle(self):
        big = square(12.0)
        fs = compute_free_space(big)
        region = collision_region(fs, Point(6, 6))
        assert all(isinstance(p, Arc) for p in region.boundary)
        total = sum(p.sweep for p in region.boundary)
        assert abs(total - 2 * math.pi) < 1e-9
        assert abs(chain_signed_area(region.boundary) - math.pi * 4) < 1e-9

    def test_clipped_disc_still_one_chain(self, square6):
        fs = compute_free_space(square6)
        x = Point(2.0, 2.0)  # within 2 of the eroded boundary
        region = collision_region(fs, x)
        assert chain_is_closed(region.boundary)
        kinds = {type(p) for p in region.boundary}
        assert kinds == {Arc, Segment}
        oracle = grid_free_space_oracle(square6, 0.02)
        label = oracle.label_at(x)
        assert grid_disc_region_components(square6, x, label, oracle) == 1

    def test_corridor_region_is_connected(self):
        poly = dumbbell(2.5)
        fs = compute_free_space(poly)
        x = Point(8.0, 3.0)  # inside the width-2.5 corridor
        region = collision_region(fs, x)
        assert chain_is_closed(region.boundary)
        oracle = grid_free_space_oracle(poly, 0.02)
        assert grid_disc_region_components(poly, x, oracle.label_at(x), oracle) == 1

    def test_outside_raises(self, square6):
        from discplan.freespace import OutsideFreeSpace
        fs = compute_free_space(square6)
        with pytest.raises(OutsideFreeSpace):
            collision_region(fs, Point(0.2, 0.2))


class TestPuncture:
    def test_two_far_positions_share_one_subregion(self):
        big = square(16.0)
        fs = compute_free_space(big)
        positions = [Point(4, 4), Point(12, 12)]
        pc = puncture(fs, 0, positions)
        assert len(pc.subregions) == 1
        sub = pc.subregions[0]
        assert sub.adjacent_owners() == [0, 1]

    def test_floating_positions_become_holes(self):
        big = square(16.0)
        fs = compute_free_space(big)
        positions = [Point(8, 8), Point(2.5, 2.5)]
        pc = puncture(fs, 0, positions)
        assert pc.position_class[0] == FLOATING
        assert pc.position_class[1] == BOUNDARY
        holes = [owner for sub in pc.subregions for owner, _ in sub.holes]
        assert holes == [0]

    def test_spanning_disc_splits_region(self):
        # a corridor position whose disc spans the eroded band cuts the
        # component into two subregions
        poly = dumbbell(3.0, bulb=8.0, corridor_len=6.0)
        fs = compute_free_space(poly)
        assert len(fs.components) == 1
        mid = Point(11.0, 4.0)  # corridor center
        pc = puncture(fs, 0, [mid])
        assert len(pc.subregions) == 2
        for sub in pc.subregions:
            assert sub.adjacent_owners() == [0]

    def test_contact_interval_is_single_span(self):
        poly = dumbbell(3.0, bulb=8.0, corridor_len=6.0)
        fs = compute_free_space(poly)
        mid = Point(11.0, 4.0)
        pc = puncture(fs, 0, [mid])
        for sub in pc.subregions:
            start, sweep = contact_interval(sub, 0, pc.positions)
            assert 0 < sweep < 2 * math.pi

    def test_subregion_complexity_stays_linear(self):
        big = square(30.0)
        fs = compute_free_space(big)
        rng = random.Random(3)
        positions = []
        while len(positions) < 8:
            p = Point(rng.uniform(3, 27), rng.uniform(3, 27))
            if all(p.dist(q) >= 4.2 for q in positions):
                positions.append(p)
        pc = puncture(fs, 0, positions)
        n_pieces = sum(len(s.outer) + sum(len(h) for _, h in s.holes)
                       for s in pc.subregions)
        n, m = 4, len(positions)
        assert n_pieces <= 8 * (n + m)

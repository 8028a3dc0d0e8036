import pytest

from discplan.freespace import compute_free_space
from discplan.geometry import Point
from discplan.interference import (
    InterferenceRecord,
    NotAForest,
    build_forest,
    execution_order,
    find_interferences,
)
from discplan.model import START, TARGET

from conftest import slot_scene_polygon


class TestFindInterferences:
    def test_far_components_do_not_interfere(self, dumbbell_narrow):
        fs = compute_free_space(dumbbell_narrow)
        # both positions sit deep inside their bulbs, far from the corridor
        records = find_interferences(fs, [Point(3, 3)], [Point(13, 3)])
        assert records == []

    def test_disc_reaches_through_slot(self):
        poly = slot_scene_polygon()
        fs = compute_free_space(poly)
        assert len(fs.components) == 2
        s = Point(-0.67, 0.0)
        t = Point(5.0, 0.0)
        assert fs.locate(s) is not None
        records = find_interferences(fs, [s], [t])
        assert len(records) == 1
        rec = records[0]
        assert rec.config == s
        assert rec.kind == START
        assert rec.home == fs.locate(s)
        assert rec.affected == fs.locate(Point(5, 0))

    def test_interference_is_mutual_only_once(self):
        # the slot fixture admits at most one parked config in the mutual
        # interference set; a deep target on the other side adds nothing
        poly = slot_scene_polygon()
        fs = compute_free_space(poly)
        records = find_interferences(fs, [Point(-0.67, 0.0)], [Point(1.55, 0.0)])
        pairs = {(min(r.home, r.affected), max(r.home, r.affected)) for r in records}
        assert all(
            sum(1 for r in records
                if {r.home, r.affected} == {a, b}) <= 2 for a, b in pairs)


def rec(x, home, affected, kind):
    return InterferenceRecord(Point(*x), home, affected, kind)


class TestBuildForest:
    def test_no_records_no_edges(self):
        forest = build_forest([0, 1, 2], [])
        assert forest.edges == ()

    def test_start_rule(self):
        forest = build_forest([1, 2], [rec((0, 0), 1, 2, START)])
        assert forest.edges == ((1, 2),)

    def test_target_rule(self):
        # a target parked in component 2 that reaches into 1 forces 1 first
        forest = build_forest([1, 2], [rec((0, 0), 2, 1, TARGET)])
        assert forest.edges == ((1, 2),)

    def test_antiparallel_rejected(self):
        with pytest.raises(NotAForest):
            build_forest([1, 2], [rec((0, 0), 1, 2, START),
                                  rec((9, 9), 2, 1, START)])

    def test_undirected_cycle_rejected(self):
        with pytest.raises(NotAForest):
            build_forest([1, 2, 3], [rec((0, 0), 1, 2, START),
                                     rec((4, 0), 2, 3, START),
                                     rec((8, 0), 1, 3, START)])


class TestExecutionOrder:
    def test_no_edges_ascending_ids(self):
        forest = build_forest([1, 2, 3], [])
        assert execution_order(forest) == (1, 2, 3)

    def test_two_before_one(self):
        forest = build_forest([1, 2, 3], [rec((0, 0), 2, 1, START),
                                          rec((6, 0), 3, 1, START)])
        assert execution_order(forest) == (2, 3, 1)

    def test_chain_order(self):
        forest = build_forest([1, 2, 3], [rec((0, 0), 3, 2, START),
                                          rec((6, 0), 2, 1, START)])
        assert execution_order(forest) == (3, 2, 1)

    def test_edges_respected_generally(self):
        forest = build_forest([0, 1, 2, 3],
                              [rec((0, 0), 2, 0, START), rec((5, 0), 3, 1, START)])
        order = execution_order(forest)
        for i, j in forest.edges:
            assert order.index(i) < order.index(j)

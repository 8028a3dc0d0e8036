"""Cross-component interference and the execution order it dictates.

A configuration parked in one free-space component can block motion in a
neighboring component when its collision disc reaches into it.  Collecting
those facts over the start and target sets yields a directed graph over
components that, for well-separated inputs, is always a forest; its
topological order is a safe execution order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .geometry import EPS, Point, min_dist_piece_point
from .freespace import COLLISION_RADIUS, FreeSpace
from .model import START, TARGET


class NotAForest(RuntimeError):
    """Interference edges form a cycle or an antiparallel pair.

    On separation >= 4 inputs this cannot happen; seeing it means the
    instance violates the method's separation precondition (or a geometry
    bug), not that the instance is unsolvable.
    """


@dataclass(frozen=True)
class InterferenceRecord:
    config: Point
    home: int
    affected: int
    kind: str  # start or target


@dataclass(frozen=True)
class InterferenceForest:
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    witnesses: tuple[InterferenceRecord, ...]


def find_interferences(fs: FreeSpace, starts: list[Point],
                       targets: list[Point]) -> list[InterferenceRecord]:
    """All (configuration, home, affected) triples where the configuration's
    collision disc reaches a foreign component.

    Reaching is decided by exact distance from the configuration to the
    foreign component's boundary pieces; a component that lies entirely
    inside the disc is caught too, since then its whole boundary does.
    """
    records: list[InterferenceRecord] = []
    tagged = [(p, START) for p in starts] + [(p, TARGET) for p in targets]
    for config, kind in tagged:
        home = fs.locate(config)
        if home is None:
            raise ValueError(f"{config} is not inside the free space")
        for comp in fs.components:
            if comp.id == home:
                continue
            x0, y0, x1, y1 = comp.bbox
            r = COLLISION_RADIUS
            if (config.x < x0 - r or config.x > x1 + r
                    or config.y < y0 - r or config.y > y1 + r):
                continue
            reach = min(min_dist_piece_point(piece, config)
                        for piece in comp.boundary)
            if reach < COLLISION_RADIUS - EPS:
                records.append(InterferenceRecord(config, home, comp.id, kind))
    return records


def build_forest(component_ids: list[int],
                 records: list[InterferenceRecord]) -> InterferenceForest:
    """Directed edges per the ordering rule: a start parked in i that reaches
    j, or a target in j that reaches i, both force i to act before j."""
    edges: dict[tuple[int, int], InterferenceRecord] = {}
    for rec in records:
        if rec.kind == START:
            edge = (rec.home, rec.affected)
        else:
            edge = (rec.affected, rec.home)
        edges.setdefault(edge, rec)
    for i, j in edges:
        if (j, i) in edges:
            raise NotAForest(f"antiparallel interference between {i} and {j}")
    _reject_undirected_cycles(component_ids, list(edges))
    ordered = sorted(edges)
    return InterferenceForest(tuple(sorted(component_ids)), tuple(ordered),
                              tuple(edges[e] for e in ordered))


def _reject_undirected_cycles(nodes: list[int],
                              edges: list[tuple[int, int]]) -> None:
    parent = {v: v for v in nodes}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            raise NotAForest(f"interference cycle through components {i}, {j}")
        parent[ri] = rj


def execution_order(forest: InterferenceForest) -> tuple[int, ...]:
    """Topological order of the components, lowest id first among ties."""
    indeg = {v: 0 for v in forest.nodes}
    out: dict[int, list[int]] = {v: [] for v in forest.nodes}
    for i, j in forest.edges:
        indeg[j] += 1
        out[i].append(j)
    heap = [v for v, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != len(forest.nodes):
        raise NotAForest("cycle survived into ordering")
    return tuple(order)

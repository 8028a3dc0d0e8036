"""Unlabeled pebble motion on a graph.

Pebbles start on the start vertices and must end up covering the target
vertices, moving one pebble at a time along edges, never sharing a vertex.
With |S| = |T| on a connected graph this is always solvable; the solver
works phase by phase on a spanning tree, retiring one leaf per phase, and
emits at most 2|S|^2 single-edge steps in total.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass


class Infeasible(ValueError):
    pass


@dataclass(frozen=True)
class IllegalMove(Exception):
    index: int
    reason: str

    def __str__(self) -> str:
        return f"move {self.index}: {self.reason}"


@dataclass(frozen=True)
class PebbleProblem:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    starts: frozenset[int]
    targets: frozenset[int]

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.n_vertices)}
        for u, v in self.edges:
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        return {v: sorted(nb) for v, nb in adj.items()}


@dataclass(frozen=True)
class PebbleMove:
    """One pebble travels ``via`` from its first to its last vertex; the
    intermediate vertices must be unoccupied while it does."""

    via: tuple[int, ...]

    @property
    def source(self) -> int:
        return self.via[0]

    @property
    def dest(self) -> int:
        return self.via[-1]

    @property
    def step_count(self) -> int:
        return len(self.via) - 1


@dataclass(frozen=True)
class PebblePlan:
    moves: tuple[PebbleMove, ...]
    phases: int

    @property
    def total_steps(self) -> int:
        return sum(m.step_count for m in self.moves)


def _spanning_tree(adj: dict[int, list[int]]) -> dict[int, list[int]]:
    """BFS tree rooted at the lowest vertex id, neighbors in ascending order."""
    root = min(adj)
    tree: dict[int, set[int]] = {v: set() for v in adj}
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                tree[u].add(v)
                tree[v].add(u)
                queue.append(v)
    if len(seen) != len(adj):
        raise Infeasible("graph is disconnected")
    return {v: sorted(nb) for v, nb in tree.items()}


def _tree_path_to_nearest(tree: dict[int, list[int]], alive: set[int],
                          source: int, accept) -> list[int] | None:
    """Shortest alive-tree path from source to the nearest vertex satisfying
    ``accept``; ties broken by vertex id through the sorted BFS order."""
    parent = {source: source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if accept(u):
            path = [u]
            while path[-1] != source:
                path.append(parent[path[-1]])
            path.reverse()
            return path
        for v in tree[u]:
            if v in alive and v not in parent:
                parent[v] = u
                queue.append(v)
    return None


def solve(problem: PebbleProblem) -> PebblePlan:
    """Phase algorithm on a spanning tree.

    Each phase removes one leaf.  A target leaf is filled first (pulling the
    nearest pebble along the tree path, which is pebble-free by choice of
    nearest) and retired with its pebble.  Otherwise a start leaf is
    evacuated by cascading every pebble on the path to the nearest free
    vertex one step toward it, nearest-first.
    """
    if len(problem.starts) != len(problem.targets):
        raise Infeasible("|starts| != |targets|")
    adj = problem.adjacency()
    if not adj:
        return PebblePlan((), 0)
    tree = _spanning_tree(adj)
    alive = set(adj)
    degree = {v: len(tree[v]) for v in alive}
    pebbles = set(problem.starts)
    moves: list[PebbleMove] = []
    phases = 0

    def remove_leaf(v: int) -> None:
        alive.discard(v)
        for u in tree[v]:
            if u in alive:
                degree[u] -= 1
        degree.pop(v, None)

    while alive:
        phases += 1
        leaves = sorted(v for v in alive if degree.get(v, 0) <= 1)
        target_leaves = [v for v in leaves if v in problem.targets]
        if target_leaves:
            v = target_leaves[0]
            if v not in pebbles:
                path = _tree_path_to_nearest(tree, alive, v,
                                             lambda u: u in pebbles)
                if path is None:
                    raise Infeasible("no pebble reachable for a target leaf")
                pull = list(reversed(path))  # pebble walks toward the leaf
                moves.append(PebbleMove(tuple(pull)))
                pebbles.discard(pull[0])
                pebbles.add(v)
            remove_leaf(v)
            pebbles.discard(v)  # retired in place on its target
            continue
        v = leaves[0]
        if v in pebbles:
            path = _tree_path_to_nearest(tree, alive, v,
                                         lambda u: u not in pebbles)
            if path is None:
                raise Infeasible("no free vertex to evacuate into")
            # all path vertices before the free one hold pebbles; cascade
            # them one step toward it, nearest-first
            for i in range(len(path) - 1, 0, -1):
                moves.append(PebbleMove((path[i - 1], path[i])))
            pebbles.discard(path[0])
            pebbles.add(path[-1])
        remove_leaf(v)
    return PebblePlan(tuple(moves), phases)


def replay(problem: PebbleProblem, plan: PebblePlan) -> frozenset[int]:
    """Apply the plan move by move, enforcing the motion conditions.

    Raises IllegalMove at the first violation; otherwise returns the final
    occupancy, which callers compare against the target set.
    """
    adj = problem.adjacency()
    occupied = set(problem.starts)
    for idx, move in enumerate(plan.moves):
        if move.source not in occupied:
            raise IllegalMove(idx, "no-pebble-at-source")
        for a, b in zip(move.via, move.via[1:]):
            if b not in adj.get(a, []):
                raise IllegalMove(idx, "non-edge")
        for v in move.via[1:-1]:
            if v in occupied:
                raise IllegalMove(idx, "occupied-intermediate")
        if move.dest in occupied and move.dest != move.source:
            raise IllegalMove(idx, "occupied-destination")
        occupied.discard(move.source)
        occupied.add(move.dest)
    return frozenset(occupied)

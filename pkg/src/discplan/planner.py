"""End-to-end planning: feasibility, per-component plans, safe ordering.

Robots are anonymous; each emitted move identifies the moving robot by its
current parked position.  One robot moves at a time, so the discrete
pebble conditions translate literally: every single graph-edge traversal
becomes one disc move executed while all other robots sit on start or
target positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import EPS, Point, chain_length
from .freespace import FreeSpace, compute_free_space
from .interference import build_forest, execution_order, find_interferences
from .model import (
    COUNT_MISMATCH,
    FEASIBLE,
    MIN_SEPARATION,
    OUTSIDE_FREE_SPACE,
    SEPARATION_VIOLATION,
    START,
    TARGET,
    ComponentCount,
    DiscMove,
    FeasibilityReport,
    MotionPlan,
    PlanStatistics,
    Scene,
)
from .motiongraph import build_motion_graph
from . import pebbles


class Infeasible(ValueError):
    def __init__(self, report: FeasibilityReport):
        super().__init__(f"instance is not solvable by this method: {report.verdict}")
        self.report = report


class InternalAssertion(RuntimeError):
    """A structural guarantee the construction relies on was violated."""


def check_feasibility(scene: Scene, fs: FreeSpace | None = None) -> FeasibilityReport:
    """Classify the instance: balanced per-component counts, all positions
    inside the free space, pairwise separation at least four."""
    if fs is None:
        fs = compute_free_space(scene.polygon)
    everything = list(scene.starts) + list(scene.targets)
    min_sep = math.inf
    for i in range(len(everything)):
        for j in range(i + 1, len(everything)):
            min_sep = min(min_sep, everything[i].dist(everything[j]))
    separation_ok = min_sep >= MIN_SEPARATION - EPS

    outside: list[Point] = []
    touching: list[Point] = []
    located: dict[int, list[str]] = {}
    for p, kind in ([(p, START) for p in scene.starts]
                    + [(p, TARGET) for p in scene.targets]):
        cid = fs.locate(p)
        if cid is None:
            outside.append(p)
            continue
        if abs(fs.clearance(p) - 1.0) <= 1e-9:
            touching.append(p)
        located.setdefault(cid, []).append(kind)

    counts = tuple(
        ComponentCount(cid, located.get(cid, []).count(START),
                       located.get(cid, []).count(TARGET))
        for cid in sorted(set(located) | {c.id for c in fs.components}))
    mismatch = (len(scene.starts) != len(scene.targets)
                or any(c.n_starts != c.n_targets for c in counts))

    if mismatch and not outside:
        verdict = COUNT_MISMATCH
    elif outside:
        verdict = OUTSIDE_FREE_SPACE if not mismatch else COUNT_MISMATCH
    elif not separation_ok:
        verdict = SEPARATION_VIOLATION
    else:
        verdict = FEASIBLE
    return FeasibilityReport(verdict, counts, separation_ok,
                             min_sep if everything else math.inf,
                             tuple(outside), tuple(touching))


def solve(scene: Scene) -> MotionPlan:
    """Produce a collision-free motion plan for a feasible scene.

    Per component, the pebble plan on the motion graph is expanded into one
    disc move per graph-edge traversal; components execute in interference
    order, so parked robots elsewhere never block a move.
    """
    fs = compute_free_space(scene.polygon)
    report = check_feasibility(scene, fs)
    if not report.feasible:
        raise Infeasible(report)

    moves_by_component: dict[int, list[DiscMove]] = {}
    for comp in fs.components:
        tagged = [(p, START) for p in scene.starts if fs.locate(p) == comp.id]
        tagged += [(p, TARGET) for p in scene.targets if fs.locate(p) == comp.id]
        if not tagged:
            continue
        tagged.sort(key=lambda pk: (pk[0].x, pk[0].y))
        positions = [p for p, _ in tagged]
        kinds = [k for _, k in tagged]
        graph = build_motion_graph(fs, comp.id, positions, kinds)
        problem = pebbles.PebbleProblem(
            len(positions),
            tuple(sorted((min(e.u, e.v), max(e.u, e.v)) for e in graph.edges)),
            frozenset(i for i, k in enumerate(kinds) if k == START),
            frozenset(i for i, k in enumerate(kinds) if k == TARGET))
        try:
            pplan = pebbles.solve(problem)
        except pebbles.Infeasible as exc:
            raise InternalAssertion(f"pebble stage failed: {exc}") from exc
        occupancy = pebbles.replay(problem, pplan)
        if occupancy != problem.targets:
            raise InternalAssertion("pebble replay missed the target set")
        out: list[DiscMove] = []
        for move in pplan.moves:
            for a, b in zip(move.via, move.via[1:]):
                out.append(DiscMove(positions[a], positions[b],
                                    graph.path_for(a, b)))
        moves_by_component[comp.id] = out

    records = find_interferences(fs, list(scene.starts), list(scene.targets))
    forest = build_forest([c.id for c in fs.components], records)
    order = execution_order(forest)
    moves: list[DiscMove] = []
    for cid in order:
        moves.extend(moves_by_component.get(cid, []))
    return MotionPlan(tuple(moves), order)


def plan_statistics(plan: MotionPlan) -> PlanStatistics:
    return PlanStatistics(
        move_count=len(plan.moves),
        total_path_length=sum(chain_length(m.path) for m in plan.moves),
        piece_count=sum(len(m.path) for m in plan.moves))

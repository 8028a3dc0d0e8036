"""Independent plan verification and the brute-force oracles used in tests.

This module deliberately reasons from the continuous problem definition
only: a plan is valid when every path point keeps the robot disc inside the
workspace and no two robot discs overlap.  It shares the geometry kernel
with the planner but none of its decomposition structures, so it can serve
as an oracle for them.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .geometry import (
    EPS,
    Arc,
    Piece,
    Point,
    Polygon,
    Segment,
    min_dist_piece_point,
    min_dist_piece_segment,
)
from .model import DiscMove, MotionPlan, Scene

VAL_EPS = 1e-6

OBSTACLE_CLEARANCE = "ObstacleClearance"
ROBOT_CLEARANCE = "RobotClearance"
DISCONTINUITY = "Discontinuity"
WRONG_FINAL_OCCUPANCY = "WrongFinalOccupancy"
SIMULTANEOUS_MOTION = "SimultaneousMotion"


class MalformedPlan(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    move_index: int
    kind: str
    worst_value: float


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    min_obstacle_clearance: float
    min_robot_clearance: float

    @property
    def ok(self) -> bool:
        return not self.violations


def _piece_obstacle_clearance(piece: Piece, edges: list[Segment]) -> float:
    return min(min_dist_piece_segment(piece, e) for e in edges)


def validate(scene: Scene, plan: MotionPlan, eps_val: float = VAL_EPS,
             samples_per_piece: int = 0) -> ValidationReport:
    """Check a motion plan against the continuous problem definition.

    Checks, per move: the path is continuous from the move's source to its
    destination, stays at clearance >= 1 from the workspace boundary, and
    keeps the moving robot's center at distance >= 2 from every parked
    robot.  Across moves: each source must match a currently parked robot
    and the final occupancy must equal the target set.  Clearances are
    exact per-piece minima; ``samples_per_piece`` adds a sampled audit.
    """
    if not isinstance(plan, MotionPlan):
        raise MalformedPlan("plan must be a MotionPlan")
    edges = scene.polygon.edges()
    parked = list(scene.starts)
    violations: list[Violation] = []
    min_obs = math.inf
    min_rob = math.inf

    for idx, move in enumerate(plan.moves):
        if not isinstance(move, DiscMove) or not move.path:
            raise MalformedPlan(f"move {idx} is empty or malformed")
        src = _pop_matching(parked, move.robot_from)
        if src is None:
            violations.append(Violation(idx, SIMULTANEOUS_MOTION, math.inf))
            parked.append(move.robot_to)
            continue

        prev = move.robot_from
        broken = 0.0
        for piece in move.path:
            gap = piece.start.dist(prev)
            broken = max(broken, gap)
            prev = piece.end
        broken = max(broken, prev.dist(move.robot_to))
        if broken > 1e-6:
            violations.append(Violation(idx, DISCONTINUITY, broken))

        if scene.polygon.contains(move.robot_from) == "outside":
            violations.append(Violation(idx, OBSTACLE_CLEARANCE, 0.0))

        worst_obs = math.inf
        worst_rob = math.inf
        for piece in move.path:
            worst_obs = min(worst_obs, _piece_obstacle_clearance(piece, edges))
            for other in parked:
                worst_rob = min(worst_rob, min_dist_piece_point(piece, other))
            if samples_per_piece:
                for k in range(samples_per_piece + 1):
                    p = piece.point_at(k / samples_per_piece)
                    worst_obs = min(worst_obs,
                                    min(e.dist_to_point(p) for e in edges))
        min_obs = min(min_obs, worst_obs)
        min_rob = min(min_rob, worst_rob)
        if worst_obs < 1.0 - eps_val:
            violations.append(Violation(idx, OBSTACLE_CLEARANCE, worst_obs))
        if worst_rob < 2.0 - eps_val:
            violations.append(Violation(idx, ROBOT_CLEARANCE, worst_rob))
        parked.append(move.robot_to)

    leftover = list(scene.targets)
    unmatched = sum(1 for p in parked if _pop_matching(leftover, p) is None)
    if unmatched or leftover:
        violations.append(Violation(len(plan.moves), WRONG_FINAL_OCCUPANCY,
                                    float(unmatched + len(leftover))))

    return ValidationReport(tuple(violations), min_obs, min_rob)


def _pop_matching(points: list[Point], p: Point, eps: float = 1e-7) -> Point | None:
    for i, q in enumerate(points):
        if q.dist(p) <= eps:
            return points.pop(i)
    return None


# ---------------------------------------------------------------------------
# grid oracle for the free space


@dataclass(frozen=True)
class GridOracle:
    """Brute-force rasterization of the free space.

    Each grid point is classified by the definition directly: inside the
    polygon with distance >= 1 to its boundary.  Connected components are
    labeled by flood fill.
    """

    xs: np.ndarray
    ys: np.ndarray
    labels: np.ndarray  # 0 = not free, 1..n = component label
    n_components: int
    resolution: float

    def label_at(self, p: Point) -> int:
        i = int(round((p.x - self.xs[0]) / self.resolution))
        j = int(round((p.y - self.ys[0]) / self.resolution))
        if 0 <= j < self.labels.shape[0] and 0 <= i < self.labels.shape[1]:
            return int(self.labels[j, i])
        return 0

    def free_area(self, label: int | None = None) -> float:
        cell = self.resolution ** 2
        if label is None:
            return float(np.count_nonzero(self.labels)) * cell
        return float(np.count_nonzero(self.labels == label)) * cell

    def dist_to_nearest_label_change(self, p: Point, radius: float) -> float:
        """Distance from p to the closest grid cell with a different label
        (searched within ``radius``); used to exclude boundary bands."""
        own = self.label_at(p)
        r = int(math.ceil(radius / self.resolution))
        i = int(round((p.x - self.xs[0]) / self.resolution))
        j = int(round((p.y - self.ys[0]) / self.resolution))
        best = math.inf
        for dj in range(-r, r + 1):
            for di in range(-r, r + 1):
                jj, ii = j + dj, i + di
                if not (0 <= jj < self.labels.shape[0] and 0 <= ii < self.labels.shape[1]):
                    continue
                if int(self.labels[jj, ii]) != own:
                    d = math.hypot(di, dj) * self.resolution
                    best = min(best, d)
        return best


def _grid_free_mask(poly: Polygon, xs: np.ndarray, ys: np.ndarray,
                    radius: float = 1.0) -> np.ndarray:
    gx, gy = np.meshgrid(xs, ys)
    px = gx.ravel()
    py = gy.ravel()
    verts = poly.vertices
    n = len(verts)
    inside = np.zeros(px.shape, dtype=bool)
    dist2 = np.full(px.shape, np.inf)
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        crosses = (a.y > py) != (b.y > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y)
        inside ^= crosses & (xi > px)
        ex, ey = b.x - a.x, b.y - a.y
        ll = ex * ex + ey * ey
        t = ((px - a.x) * ex + (py - a.y) * ey) / ll
        np.clip(t, 0.0, 1.0, out=t)
        dx = px - (a.x + t * ex)
        dy = py - (a.y + t * ey)
        np.minimum(dist2, dx * dx + dy * dy, out=dist2)
    free = inside & (dist2 >= radius * radius)
    return free.reshape(gy.shape)


def grid_free_space_oracle(poly: Polygon, resolution: float = 0.02) -> GridOracle:
    if resolution > 0.05:
        raise ValueError("oracle resolution must be <= 0.05")
    x0, y0, x1, y1 = poly.aabb()
    xs = np.arange(x0 - resolution, x1 + 2 * resolution, resolution)
    ys = np.arange(y0 - resolution, y1 + 2 * resolution, resolution)
    free = _grid_free_mask(poly, xs, ys)
    labels, n = ndimage.label(free)
    return GridOracle(xs, ys, labels, int(n), resolution)


def grid_disc_region_components(poly: Polygon, x: Point, component_label: int,
                                oracle: GridOracle,
                                radius: float = 2.0) -> int:
    """Number of grid-connected pieces of (free component) ∩ (disc around x).

    Flood fill runs on a window around the disc with 8-connectivity; when
    more than one piece shows up, the window is re-rasterized at four times
    the resolution before believing it (thin necks alias at coarse grids).
    """
    res = oracle.resolution
    count = _disc_window_components(oracle.labels, oracle.xs, oracle.ys,
                                    res, x, radius, component_label)
    if count <= 1:
        return count
    fine = res / 4
    xs = np.arange(x.x - radius - 4 * fine, x.x + radius + 4 * fine, fine)
    ys = np.arange(x.y - radius - 4 * fine, x.y + radius + 4 * fine, fine)
    free = _grid_free_mask(poly, xs, ys)
    labels, _ = ndimage.label(free, structure=np.ones((3, 3), dtype=int))
    i = int(round((x.x - xs[0]) / fine))
    j = int(round((x.y - ys[0]) / fine))
    if not (0 <= j < labels.shape[0] and 0 <= i < labels.shape[1]) or labels[j, i] == 0:
        return count
    own = labels[j, i]
    return _disc_window_components(labels, xs, ys, fine, x, radius, int(own))


def _disc_window_components(labels: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                            res: float, x: Point, radius: float,
                            component_label: int) -> int:
    gx, gy = np.meshgrid(xs, ys)
    in_disc = (gx - x.x) ** 2 + (gy - x.y) ** 2 < radius * radius
    mask = in_disc & (labels == component_label)
    if not mask.any():
        return 0
    _, n = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    return int(n)


# ---------------------------------------------------------------------------
# exhaustive oracle for the discrete pebble problem


def pebble_bfs_oracle(n_vertices: int, edges: list[tuple[int, int]],
                      starts: frozenset[int], targets: frozenset[int]):
    """Breadth-first search over pebble occupancies.

    Returns (solvable, number_of_single_edge_steps or None).  State space is
    all vertex subsets of size |starts|, so inputs are capped hard.
    """
    if n_vertices > 16 or len(starts) > 6:
        raise TooLarge("oracle limited to 16 vertices / 6 pebbles")
    adj: dict[int, set[int]] = {v: set() for v in range(n_vertices)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    start = frozenset(starts)
    goal = frozenset(targets)
    if len(start) != len(goal):
        return False, None
    if start == goal:
        return True, 0
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        state, depth = queue.popleft()
        for u in state:
            for v in adj[u]:
                if v in state:
                    continue
                nxt = (state - {u}) | {v}
                if nxt in seen:
                    continue
                if nxt == goal:
                    return True, depth + 1
                seen.add(nxt)
                queue.append((nxt, depth + 1))
    return False, None

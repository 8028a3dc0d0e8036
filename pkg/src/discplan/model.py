"""Plain data carried between the planner, the validator, and file I/O.

Nothing in here computes geometry; the validator stays independent of the
planner by sharing only these records and the geometry kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import Piece, Point, Polygon

START = "start"
TARGET = "target"

FEASIBLE = "Feasible"
COUNT_MISMATCH = "CountMismatch"
SEPARATION_VIOLATION = "SeparationViolation"
OUTSIDE_FREE_SPACE = "OutsideFreeSpace"

MIN_SEPARATION = 4.0


@dataclass(frozen=True)
class Scene:
    polygon: Polygon
    starts: tuple[Point, ...]
    targets: tuple[Point, ...]
    name: str = ""

    @property
    def m(self) -> int:
        return len(self.starts)


@dataclass(frozen=True)
class DiscMove:
    """One robot slides from ``robot_from`` to ``robot_to`` while every other
    robot is parked on a start or target position."""

    robot_from: Point
    robot_to: Point
    path: tuple[Piece, ...]


@dataclass(frozen=True)
class MotionPlan:
    moves: tuple[DiscMove, ...]
    component_order: tuple[int, ...]


@dataclass(frozen=True)
class ComponentCount:
    component_id: int
    n_starts: int
    n_targets: int


@dataclass(frozen=True)
class FeasibilityReport:
    verdict: str
    counts: tuple[ComponentCount, ...]
    separation_ok: bool
    min_separation: float
    outside: tuple[Point, ...]
    boundary_touching: tuple[Point, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.verdict == FEASIBLE


@dataclass(frozen=True)
class PlanStatistics:
    move_count: int
    total_path_length: float
    piece_count: int

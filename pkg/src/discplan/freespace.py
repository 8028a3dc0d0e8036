"""Unit-disc free space of a simple polygon.

The free space is the erosion of the workspace by the robot disc: every
configuration whose unit disc stays inside the polygon.  Its boundary mixes
inward-offset copies of the polygon edges with radius-1 arcs centered at
reflex vertices.  Components are simply connected (the workspace has no
holes), so each one is described by a single closed boundary chain.

Construction builds the candidate offset curves, splits them at all mutual
intersections, keeps the sub-pieces that lie at clearance exactly one, and
stitches the survivors into closed chains.  A sub-piece survives iff its
midpoint is inside the polygon with clearance >= 1: any piece of the true
erosion boundary passes both tests, and every transition point between kept
and dropped stretches is an intersection of two candidate curves, so pieces
never straddle a transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import (
    CCW,
    CW,
    EPS,
    Arc,
    DegeneratePolygon,
    Piece,
    Point,
    Polygon,
    Segment,
    chain_aabb,
    chain_is_closed,
    chain_signed_area,
    point_in_chain,
    split_pieces,
    assemble_chains,
)

ROBOT_RADIUS = 1.0
COLLISION_RADIUS = 2.0  # two robot centers closer than this collide

KEEP_EPS = 1e-7     # clearance slack when deciding boundary membership
AREA_EPS = 1e-8     # components thinner than this are floating-point slivers


class OutsideFreeSpace(ValueError):
    """A configuration expected inside the free space is not."""


class FreeSpaceError(RuntimeError):
    """A structural guarantee of the decomposition failed."""


@dataclass(frozen=True)
class FreeComponent:
    """One connected component of the free space.

    The boundary is a single closed CCW chain; simply connected components
    never carry hole chains.
    """

    id: int
    boundary: tuple[Piece, ...]
    bbox: tuple[float, float, float, float]
    area: float


@dataclass(frozen=True)
class FreeSpace:
    polygon: Polygon
    components: tuple[FreeComponent, ...]

    def clearance(self, p: Point) -> float:
        return self.polygon.boundary_dist(p)

    def locate(self, p: Point) -> int | None:
        """Component id containing p, or None when the disc does not fit.

        The free space is treated as closed: clearance exactly one counts
        as inside.
        """
        if self.polygon.contains(p) == "outside":
            return None
        if self.clearance(p) < ROBOT_RADIUS - EPS:
            return None
        # boundary-touching configurations are assigned to the component
        # whose chain they sit on
        for comp in self.components:
            x0, y0, x1, y1 = comp.bbox
            if not (x0 - 1e-6 <= p.x <= x1 + 1e-6 and y0 - 1e-6 <= p.y <= y1 + 1e-6):
                continue
            if any(piece.dist_to_point(p) <= 10 * EPS for piece in comp.boundary):
                return comp.id
        for comp in self.components:
            x0, y0, x1, y1 = comp.bbox
            if not (x0 <= p.x <= x1 and y0 <= p.y <= y1):
                continue
            if point_in_chain(p, comp.boundary):
                return comp.id
        return None

    def component(self, cid: int) -> FreeComponent:
        return self.components[cid]


def _offset_candidates(poly: Polygon) -> list[Piece]:
    """Inward edge offsets plus radius-1 arcs at reflex vertices.

    Offsets are emitted full length; trimming falls out of the keep test.
    Arc endpoints reuse the exact offset endpoints so chains stitch without
    gaps.  Convex vertices contribute no arc (zero sweep).
    """
    verts = poly.vertices
    n = len(verts)
    normals = []
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        normals.append((b - a).unit().perp_left())
    candidates: list[Piece] = []
    offset_ends: list[tuple[Point, Point]] = []
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        nh = normals[i]
        p0 = a + nh.scaled(ROBOT_RADIUS)
        p1 = b + nh.scaled(ROBOT_RADIUS)
        offset_ends.append((p0, p1))
        candidates.append(Segment(p0, p1))
    for i in range(n):
        prev = (i - 1) % n
        u, v, w = verts[prev], verts[i], verts[(i + 1) % n]
        turn = (v - u).cross(w - v)
        if turn >= -EPS:
            continue  # convex or straight: no vertex arc
        start = (offset_ends[prev][1] - v).angle()
        end = (offset_ends[i][0] - v).angle()
        candidates.append(Arc(v, ROBOT_RADIUS, start, end, CW))
    return candidates


def compute_free_space(poly: Polygon) -> FreeSpace:
    """Erode the workspace polygon by the unit robot disc."""
    if poly.n < 3:
        raise DegeneratePolygon("polygon needs at least 3 vertices")
    candidates = _offset_candidates(poly)
    edges = poly.edges()

    def clearance(p: Point) -> float:
        return min(e.dist_to_point(p) for e in edges)

    kept: list[Piece] = []
    for _, piece in split_pieces(candidates):
        mid = piece.point_at(0.5)
        if poly.contains(mid) != "inside":
            continue
        if clearance(mid) < ROBOT_RADIUS - KEEP_EPS:
            continue
        kept.append(piece)
    if not kept:
        return FreeSpace(poly, ())
    chains = assemble_chains(kept)
    components = []
    for chain in chains:
        pieces = [p for p, _ in chain]
        area = chain_signed_area(pieces)
        if abs(area) < AREA_EPS:
            continue
        if area < 0:
            pieces = [p.reversed() for p in reversed(pieces)]
            area = -area
        if not chain_is_closed(pieces):
            raise FreeSpaceError("free-space chain failed to close")
        components.append((pieces, area))
    components.sort(key=lambda ca: chain_aabb(ca[0]))
    comps = tuple(
        FreeComponent(i, tuple(pieces), chain_aabb(pieces), area)
        for i, (pieces, area) in enumerate(components)
    )
    return FreeSpace(poly, comps)


# ---------------------------------------------------------------------------
# collision regions and the punctured decomposition


def _disc_halves(center: Point, radius: float) -> list[Arc]:
    return [Arc(center, radius, 0.0, math.pi, CCW),
            Arc(center, radius, math.pi, 0.0, CCW)]


@dataclass(frozen=True)
class CollisionRegion:
    """Part of a configuration's collision disc inside its own component."""

    owner: Point
    component_id: int
    boundary: tuple[Piece, ...]


def collision_region(fs: FreeSpace, x: Point) -> CollisionRegion:
    cid = fs.locate(x)
    if cid is None:
        raise OutsideFreeSpace(f"{x} is not a free configuration")
    comp = fs.component(cid)
    pieces: list[Piece] = list(comp.boundary) + _disc_halves(x, COLLISION_RADIUS)
    n_boundary = len(comp.boundary)
    kept: list[Piece] = []
    for src, piece in split_pieces(pieces):
        mid = piece.point_at(0.5)
        if src < n_boundary:
            if mid.dist(x) <= COLLISION_RADIUS - EPS:
                kept.append(piece)
        else:
            if fs.clearance(mid) < ROBOT_RADIUS - EPS:
                continue
            if point_in_chain(mid, comp.boundary):
                kept.append(piece)
    if not kept:
        raise FreeSpaceError("collision region produced no boundary")
    chains = assemble_chains(kept)
    if len(chains) != 1:
        raise FreeSpaceError(
            f"collision region of {x} split into {len(chains)} chains")
    out = [p for p, _ in chains[0]]
    if chain_signed_area(out) < 0:
        out = [p.reversed() for p in reversed(out)]
    return CollisionRegion(x, cid, tuple(out))


@dataclass(frozen=True)
class Subregion:
    """A connected piece of a component after removing all collision regions.

    ``outer`` is the CCW outer boundary; ``outer_owners`` tags each piece
    with the index of the position whose disc contributed it (None for
    workspace boundary).  Floating discs appear as circular holes.
    """

    id: int
    outer: tuple[Piece, ...]
    outer_owners: tuple[int | None, ...]
    holes: tuple[tuple[int, tuple[Piece, ...]], ...]

    def adjacent_owners(self) -> list[int]:
        owners = {o for o in self.outer_owners if o is not None}
        owners.update(owner for owner, _ in self.holes)
        return sorted(owners)


BOUNDARY = "boundary"
FLOATING = "floating"


@dataclass(frozen=True)
class PuncturedComponent:
    component_id: int
    positions: tuple[Point, ...]
    position_class: tuple[str, ...]
    subregions: tuple[Subregion, ...]


def classify_position(fs: FreeSpace, cid: int, x: Point) -> str:
    """'boundary' when the collision disc reaches the component boundary,
    'floating' when the whole circle stays inside the component."""
    comp = fs.component(cid)
    for arc in _disc_halves(x, COLLISION_RADIUS):
        for piece in comp.boundary:
            from .geometry import piece_intersections
            if piece_intersections(arc, piece):
                return BOUNDARY
    top = Point(x.x, x.y + COLLISION_RADIUS)
    if fs.locate(top) == cid:
        return FLOATING
    return BOUNDARY


def puncture(fs: FreeSpace, cid: int, positions: list[Point]) -> PuncturedComponent:
    """Remove every position's collision region from the component.

    The remainder splits into subregions; each reports which positions'
    discs touch it.  Total boundary complexity stays linear in the component
    and the position count: every disc contributes a bounded number of arcs.
    """
    comp = fs.component(cid)
    classes = tuple(classify_position(fs, cid, x) for x in positions)
    pieces: list[Piece] = list(comp.boundary)
    owner_of: list[int | None] = [None] * len(comp.boundary)
    for k, x in enumerate(positions):
        pieces.extend(_disc_halves(x, COLLISION_RADIUS))
        owner_of.extend([k, k])

    kept: list[Piece] = []
    kept_owner: list[int | None] = []
    for src, piece in split_pieces(pieces):
        mid = piece.point_at(0.5)
        owner = owner_of[src]
        if owner is None:
            if all(mid.dist(x) >= COLLISION_RADIUS - EPS for x in positions):
                kept.append(piece)
                kept_owner.append(None)
        else:
            if fs.clearance(mid) < ROBOT_RADIUS - EPS:
                continue
            if any(mid.dist(y) < COLLISION_RADIUS - EPS
                   for j, y in enumerate(positions) if j != owner):
                continue
            if point_in_chain(mid, comp.boundary):
                kept.append(piece)
                kept_owner.append(owner)

    if not kept:
        if positions:
            raise FreeSpaceError(
                f"component {cid} vanished after removing collision regions")
        return PuncturedComponent(cid, tuple(positions), classes, ())

    chains = assemble_chains(kept, kept_owner)
    outers = []
    holes = []
    for chain in chains:
        chain_pieces = [p for p, _ in chain]
        owners = [t for _, t in chain]
        if _is_full_circle(chain_pieces, owners):
            holes.append((owners[0], chain_pieces))
            continue
        if chain_signed_area(chain_pieces) < 0:
            chain_pieces = [p.reversed() for p in reversed(chain_pieces)]
            owners = list(reversed(owners))
        outers.append((chain_pieces, owners))
    outers.sort(key=lambda co: chain_aabb(co[0]))

    sub_holes: list[list[tuple[int, tuple[Piece, ...]]]] = [[] for _ in outers]
    for owner, hole_pieces in holes:
        center = positions[owner]
        for i, (outer_pieces, _) in enumerate(outers):
            if point_in_chain(center, outer_pieces):
                sub_holes[i].append((owner, tuple(hole_pieces)))
                break
        else:
            raise FreeSpaceError(f"floating disc of position {owner} unhoused")

    subregions = tuple(
        Subregion(i, tuple(outer_pieces), tuple(owners), tuple(sorted(hs)))
        for i, ((outer_pieces, owners), hs) in enumerate(zip(outers, sub_holes))
    )
    pc = PuncturedComponent(cid, tuple(positions), classes, subregions)
    _audit_puncture(pc)
    return pc


def _is_full_circle(pieces: list[Piece], owners: list) -> bool:
    if not all(isinstance(p, Arc) for p in pieces):
        return False
    if len({o for o in owners}) != 1 or owners[0] is None:
        return False
    total = sum(p.sweep for p in pieces)
    return abs(total - 2 * math.pi) < 1e-6


def _audit_puncture(pc: PuncturedComponent) -> None:
    # floating positions appear as exactly one hole of exactly one subregion;
    # boundary positions never appear as holes
    hole_owners: list[int] = []
    for sub in pc.subregions:
        hole_owners.extend(owner for owner, _ in sub.holes)
    for k, cls in enumerate(pc.position_class):
        if cls == FLOATING:
            if hole_owners.count(k) != 1:
                raise FreeSpaceError(
                    f"floating position {k} appears in {hole_owners.count(k)} holes")
        else:
            if k in hole_owners:
                raise FreeSpaceError(f"boundary position {k} shows up as a hole")
    if pc.positions and not pc.subregions:
        raise FreeSpaceError("no subregion left next to the given positions")


def contact_interval(sub: Subregion, owner: int,
                     positions: tuple[Point, ...]) -> tuple[float, float]:
    """Angular interval of the owner's disc exposed to the subregion's outer
    boundary, as (start_angle, sweep).

    The pieces of one owner along one subregion always merge into a single
    interval; multiple intervals violate the decomposition's structure and
    raise.
    """
    center = positions[owner]
    spans = []
    for piece, tag in zip(sub.outer, sub.outer_owners):
        if tag != owner:
            continue
        assert isinstance(piece, Arc)
        a0 = piece.angle_at(0.0)
        sweep = piece.sweep
        if piece.orientation == CW:
            a0 = piece.angle_at(1.0)
        spans.append((math.fmod(a0, 2 * math.pi), sweep))
    if not spans:
        raise FreeSpaceError(f"position {owner} has no contact with subregion")
    return _merge_circular_intervals(spans, center)


def _merge_circular_intervals(spans: list[tuple[float, float]],
                              center: Point) -> tuple[float, float]:
    """Merge angular intervals on one circle; raise unless they form one."""
    if len(spans) == 1:
        return spans[0]
    total = sum(s for _, s in spans)
    if total >= 2 * math.pi - 1e-9:
        return (spans[0][0], 2 * math.pi)
    norm = []
    for a, s in spans:
        a = math.fmod(a, 2 * math.pi)
        if a < 0:
            a += 2 * math.pi
        norm.append((a, s))
    norm.sort()
    merged = [list(norm[0])]
    for a, s in norm[1:]:
        cur_end = merged[-1][0] + merged[-1][1]
        if a <= cur_end + 1e-7:
            merged[-1][1] = max(merged[-1][1], a + s - merged[-1][0])
        else:
            merged.append([a, s])
    # wrap-around join
    if len(merged) > 1:
        first_a, first_s = merged[0]
        last_a, last_s = merged[-1]
        if first_a + 2 * math.pi <= last_a + last_s + 1e-7:
            merged[0] = [last_a, first_a + first_s + 2 * math.pi - last_a]
            merged.pop()
    if len(merged) != 1:
        raise FreeSpaceError(
            f"disc at {center} exposes {len(merged)} separate boundary intervals")
    return (merged[0][0], merged[0][1])

"""Per-component motion graph over start and target configurations.

Vertices are the configurations parked in one free-space component; an edge
means a robot can slide between its endpoints while every other robot sits
parked on a start or target.  Edges come from the punctured decomposition:
positions whose discs touch a common subregion connect along that
subregion's outer boundary, floating positions hook in by shooting a
vertical ray upward.

Edge paths are exact piece chains.  Everything a path traverses lies on the
boundary of the moving robot's own collision region, on the subregion's
outer boundary, or on straight connectors proven to stay clear, so obstacle
clearance is exactly one and robot clearance exactly two in the worst case,
never less.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .geometry import (
    CCW,
    CW,
    EPS,
    Arc,
    Piece,
    Point,
    Segment,
    norm_angle,
    piece_intersections,
    ray_chain_hits,
)
from .freespace import (
    BOUNDARY,
    COLLISION_RADIUS,
    FLOATING,
    CollisionRegion,
    FreeSpace,
    PuncturedComponent,
    Subregion,
    collision_region,
    contact_interval,
    puncture,
)

ChainParam = tuple[int, float]

RAY_PERTURB = 1e-7  # radians added per retry when a vertical ray is degenerate


class NoBoundaryContact(RuntimeError):
    """A position classified as boundary-touching exposes no boundary arc."""


class NoHit(RuntimeError):
    """An upward ray escaped its subregion; impossible for valid input."""


class PathBlocked(RuntimeError):
    """A realized connector failed its exactness audit; signals a bug."""


class DisconnectedGraph(RuntimeError):
    """The motion graph of a single component must be connected."""


@dataclass(frozen=True)
class CyclicEntry:
    owner: int
    point: Point
    param: ChainParam


@dataclass(frozen=True)
class SubregionDecoration:
    """Everything needed to wire one subregion's share of the graph."""

    subregion_id: int
    boundary_positions: tuple[int, ...]
    floating_positions: tuple[int, ...]
    outer: tuple[Piece, ...]
    rep_points: dict[int, Point]
    cyclic_order: tuple[CyclicEntry, ...]  # clockwise along the outer chain
    hole_links: tuple[tuple[int, int, Point], ...]  # (from, to, ray hit)


@dataclass(frozen=True)
class GraphEdge:
    u: int
    v: int
    subregion_id: int
    kind: str  # HH / BB / HB
    pieces: tuple[Piece, ...]  # oriented u -> v
    connector_u: tuple[Piece, ...] = ()
    connector_v: tuple[Piece, ...] = ()


@dataclass(frozen=True)
class MotionGraph:
    component_id: int
    points: tuple[Point, ...]
    kinds: tuple[str, ...]
    classes: tuple[str, ...]
    edges: tuple[GraphEdge, ...]

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, set[int]] = {i: set() for i in range(len(self.points))}
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        return {v: sorted(nb) for v, nb in adj.items()}

    def path_for(self, u: int, v: int) -> tuple[Piece, ...]:
        for e in self.edges:
            if (e.u, e.v) == (u, v):
                return e.pieces
            if (e.u, e.v) == (v, u):
                return tuple(p.reversed() for p in reversed(e.pieces))
        raise KeyError(f"no edge between {u} and {v}")


# ---------------------------------------------------------------------------
# chain bookkeeping


def _param_le(a: ChainParam, b: ChainParam) -> bool:
    return a <= b


def chain_portion_ccw(chain: tuple[Piece, ...], a: ChainParam,
                      b: ChainParam) -> list[Piece]:
    """Pieces from parameter a to parameter b walking the chain forward."""
    ai, at = a
    bi, bt = b
    out: list[Piece] = []

    def eps_t(i: int) -> float:
        return EPS / max(chain[i].length(), EPS)

    if ai == bi and bt > at + eps_t(ai):
        return [chain[ai].subpiece(at, bt)]
    if at < 1 - eps_t(ai):
        out.append(chain[ai].subpiece(at, 1.0))
    i = (ai + 1) % len(chain)
    while i != bi:
        out.append(chain[i])
        i = (i + 1) % len(chain)
    if bt > eps_t(bi):
        out.append(chain[bi].subpiece(0.0, bt))
    return out


def chain_portion_cw(chain: tuple[Piece, ...], a: ChainParam,
                     b: ChainParam) -> list[Piece]:
    fwd = chain_portion_ccw(chain, b, a)
    return [p.reversed() for p in reversed(fwd)]


def _param_on_owner_arcs(sub: Subregion, owner: int, theta: float) -> ChainParam:
    best: tuple[float, ChainParam] | None = None
    for idx, (piece, tag) in enumerate(zip(sub.outer, sub.outer_owners)):
        if tag != owner or not isinstance(piece, Arc):
            continue
        if piece.contains_angle(theta, slack=1e-9):
            return (idx, min(max(piece.param_of_angle(theta), 0.0), 1.0))
        # fall back to the angularly nearest arc end
        for t_end in (0.0, 1.0):
            gap = abs(norm_angle(piece.angle_at(t_end) - theta))
            if best is None or gap < best[0]:
                best = (gap, (idx, t_end))
    if best is None:
        raise NoBoundaryContact(f"position {owner} owns no arc on subregion")
    return best[1]


# ---------------------------------------------------------------------------
# connector curves


def connector_curve(x: Point, beta: Point,
                    region: CollisionRegion) -> list[Piece]:
    """Simple curve from a configuration to a point on its collision-region
    boundary, staying inside the region.

    The straight segment is used whenever it does not cross the region
    boundary.  Otherwise the curve runs straight to the first boundary hit
    and follows the boundary to the destination (shorter way around); every
    piece then lies on the region boundary, which is exact.
    """
    seg = Segment(x, beta)
    hits: list[tuple[float, int, float]] = []
    for idx, piece in enumerate(region.boundary):
        for t_seg, t_pc, pt in piece_intersections(seg, piece):
            if pt.dist(beta) <= 1e-7 or pt.dist(x) <= 1e-7:
                continue
            hits.append((t_seg, idx, t_pc))
    if not hits:
        return [seg]
    hits.sort()
    _, hit_idx, hit_t = hits[0]
    hit_pt = region.boundary[hit_idx].point_at(hit_t)
    beta_param = _locate_on_chain(region.boundary, beta)
    fwd = chain_portion_ccw(region.boundary, (hit_idx, hit_t), beta_param)
    bwd = chain_portion_cw(region.boundary, (hit_idx, hit_t), beta_param)
    walk = fwd if sum(p.length() for p in fwd) <= sum(p.length() for p in bwd) else bwd
    out: list[Piece] = []
    if x.dist(hit_pt) > EPS:
        out.append(Segment(x, hit_pt))
    out.extend(walk)
    return out


def _locate_on_chain(chain: tuple[Piece, ...], p: Point) -> ChainParam:
    best: tuple[float, ChainParam] | None = None
    for idx, piece in enumerate(chain):
        d = piece.dist_to_point(p)
        if best is None or d < best[0]:
            if isinstance(piece, Segment):
                t = min(max(piece.param_of(p), 0.0), 1.0)
            else:
                t = min(max(piece.param_of_angle((p - piece.center).angle()), 0.0), 1.0)
            best = (d, (idx, t))
    assert best is not None and best[0] <= 1e-6, "point is not on the chain"
    return best[1]


# ---------------------------------------------------------------------------
# vertical ray shooting


def ray_shoot_up(x: Point, pieces: list[tuple[Piece, object]]):
    """First hit of an upward ray from x over tagged pieces.

    Near-degenerate hits (piece endpoints, tangencies) retry with the ray
    angle nudged by 1e-7 radians per attempt.  Returns (hit point, tag).
    """
    bare = [p for p, _ in pieces]
    for attempt in range(200):
        ang = math.pi / 2 + RAY_PERTURB * attempt * (1 if attempt % 2 else -1)
        direction = Point(math.cos(ang), math.sin(ang))
        hits = [h for h in ray_chain_hits(x, direction, bare) if h.t > EPS]
        if not hits:
            continue
        first = hits[0]
        ambiguous = len(hits) > 1 and hits[1].t - first.t <= 1e-9
        if first.clean and not ambiguous:
            return first.point, pieces[first.piece_index][1], first
    raise NoHit(f"upward ray from {x} found no clean boundary hit")


# ---------------------------------------------------------------------------
# decorations and graph assembly


def classify_positions(fs: FreeSpace, pc: PuncturedComponent) -> list[SubregionDecoration]:
    """Split each subregion's adjacent positions into boundary-contact and
    floating sets and wire up representative points and ray links."""
    decorations = []
    for sub in pc.subregions:
        boundary_pos = []
        floating_pos = []
        for owner in sub.adjacent_owners():
            if pc.position_class[owner] == BOUNDARY:
                boundary_pos.append(owner)
            else:
                floating_pos.append(owner)
        entries: list[CyclicEntry] = []
        rep_points: dict[int, Point] = {}
        for owner in boundary_pos:
            start, sweep = contact_interval(sub, owner, pc.positions)
            theta = start + sweep / 2.0
            beta = Point(pc.positions[owner].x + COLLISION_RADIUS * math.cos(theta),
                         pc.positions[owner].y + COLLISION_RADIUS * math.sin(theta))
            param = _param_on_owner_arcs(sub, owner, theta)
            rep_points[owner] = beta
            entries.append(CyclicEntry(owner, beta, param))
        hole_links: list[tuple[int, int, Point]] = []
        hole_of = {owner: chain for owner, chain in sub.holes}
        for owner in floating_pos:
            x = pc.positions[owner]
            tagged: list[tuple[Piece, object]] = []
            for idx, piece in enumerate(sub.outer):
                tagged.append((piece, ("outer", idx)))
            for other, chain in sub.holes:
                if other == owner:
                    continue
                for piece in chain:
                    tagged.append((piece, ("hole", other)))
            c, tag, hit = ray_shoot_up(x, tagged)
            if tag[0] == "hole":
                hole_links.append((owner, tag[1], c))
            else:
                rep_points[owner] = c
                entries.append(CyclicEntry(owner, c, (tag[1], hit.piece_param)))
        entries.sort(key=lambda e: e.param, reverse=True)  # clockwise
        decorations.append(SubregionDecoration(
            sub.id, tuple(boundary_pos), tuple(floating_pos), sub.outer,
            rep_points, tuple(entries), tuple(hole_links)))
    return decorations


def representative_point(deco: SubregionDecoration, owner: int) -> Point:
    if owner not in deco.rep_points:
        raise NoBoundaryContact(f"position {owner} has no representative point")
    return deco.rep_points[owner]


def _edge_kind(cls_u: str, cls_v: str) -> str:
    tag = {BOUNDARY: "B", FLOATING: "H"}
    pair = tag[cls_u] + tag[cls_v]
    return pair if pair != "HB" else "HB"


def realize_edge(deco: SubregionDecoration, pc: PuncturedComponent,
                 regions: dict[int, CollisionRegion],
                 a: CyclicEntry, b: CyclicEntry) -> GraphEdge:
    """Path for an edge between cyclically consecutive entries: connector of
    a, the clockwise outer-boundary portion from a's point to b's, and the
    reversed connector of b."""
    def connector(entry: CyclicEntry) -> list[Piece]:
        pos = pc.positions[entry.owner]
        if pc.position_class[entry.owner] == BOUNDARY:
            return connector_curve(pos, entry.point, regions[entry.owner])
        return [Segment(pos, entry.point)]

    conn_a = connector(a)
    conn_b = connector(b)
    portion = chain_portion_cw(deco.outer, a.param, b.param)
    pieces = conn_a + portion + [p.reversed() for p in reversed(conn_b)]
    pieces = _fuse(pieces)
    _check_continuity(pieces, pc.positions[a.owner], pc.positions[b.owner])
    kind = _edge_kind(pc.position_class[a.owner], pc.position_class[b.owner])
    return GraphEdge(a.owner, b.owner, deco.subregion_id, kind, tuple(pieces),
                     tuple(conn_a), tuple(conn_b))


def _fuse(pieces: list[Piece]) -> list[Piece]:
    return [p for p in pieces if p.length() > EPS]


def _check_continuity(pieces: list[Piece], src: Point, dst: Point) -> None:
    if not pieces:
        raise PathBlocked("empty edge path")
    prev = src
    for p in pieces:
        if p.start.dist(prev) > 1e-6:
            raise PathBlocked(f"path gap of {p.start.dist(prev):.2e}")
        prev = p.end
    if prev.dist(dst) > 1e-6:
        raise PathBlocked("path does not end at its destination")


def build_motion_graph(fs: FreeSpace, cid: int, positions: list[Point],
                       kinds: list[str]) -> MotionGraph:
    pc = puncture(fs, cid, positions)
    regions = {k: collision_region(fs, positions[k])
               for k in range(len(positions))
               if pc.position_class[k] == BOUNDARY}
    decorations = classify_positions(fs, pc)
    edges: list[GraphEdge] = []
    seen: set[tuple[int, int]] = set()

    def add(edge: GraphEdge) -> None:
        key = (min(edge.u, edge.v), max(edge.u, edge.v))
        if edge.u == edge.v or key in seen:
            return
        seen.add(key)
        edges.append(edge)

    for deco in decorations:
        order = deco.cyclic_order
        n = len(order)
        if n >= 2:
            pairs = [(order[k], order[(k + 1) % n]) for k in range(n)]
            if n == 2:
                pairs = pairs[:1]
            for a, b in pairs:
                add(realize_edge(deco, pc, regions, a, b))
        for u, v, c in deco.hole_links:
            pu, pv = positions[u], positions[v]
            pieces = _fuse([Segment(pu, c), Segment(c, pv)])
            _check_continuity(pieces, pu, pv)
            add(GraphEdge(u, v, deco.subregion_id, "HH", tuple(pieces)))

    graph = MotionGraph(cid, tuple(positions), tuple(kinds),
                        pc.position_class, tuple(edges))
    _check_connected(graph)
    return graph


def _check_connected(graph: MotionGraph) -> None:
    n = len(graph.points)
    if n <= 1:
        return
    adj = graph.adjacency()
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    if len(seen) != n:
        raise DisconnectedGraph(
            f"motion graph of component {graph.component_id} is disconnected "
            f"({len(seen)}/{n} vertices reached)")

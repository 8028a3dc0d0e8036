"""Planar primitives shared by every other module: points, segments,
circular arcs, polygons, and piece chains.

All incidence decisions route through a single tolerance ``EPS``.  Inputs
are assumed to be in general position after snapping; near-tangencies are
snapped to exact tangency so arrangements do not grow hair-thin faces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

EPS = 1e-9
TWO_PI = 2.0 * math.pi

# Golden-angle increments give a deterministic, well-spread direction
# sequence for parity-ray retries.
_RAY_ANGLES = [0.5772156649 + k * 2.3999632297 for k in range(64)]


class GeometryError(ValueError):
    """Base class for geometric input problems."""


class CoincidentCircles(GeometryError):
    """Two circles coincide within tolerance; intersection is ill-defined."""


class DegeneratePolygon(GeometryError):
    """Polygon is self-intersecting or has near-zero features."""


class DegenerateChain(GeometryError):
    """Piece soup does not assemble into simple closed chains."""


def close(a: float, b: float, eps: float = EPS) -> bool:
    """The one comparison helper every tolerance decision goes through."""
    return abs(a - b) <= eps


def norm_angle(theta: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    t = math.fmod(theta, TWO_PI)
    if t <= -math.pi:
        t += TWO_PI
    elif t > math.pi:
        t -= TWO_PI
    return t


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __add__(self, o: "Point") -> "Point":
        return Point(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "Point") -> "Point":
        return Point(self.x - o.x, self.y - o.y)

    def scaled(self, k: float) -> "Point":
        return Point(k * self.x, k * self.y)

    def dot(self, o: "Point") -> float:
        return self.x * o.x + self.y * o.y

    def cross(self, o: "Point") -> float:
        return self.x * o.y - self.y * o.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, o: "Point") -> float:
        return math.hypot(self.x - o.x, self.y - o.y)

    def unit(self) -> "Point":
        n = self.norm()
        if n <= EPS:
            raise GeometryError("cannot normalize near-zero vector")
        return Point(self.x / n, self.y / n)

    def perp_left(self) -> "Point":
        return Point(-self.y, self.x)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def approx(self, o: "Point", eps: float = EPS) -> bool:
        return self.dist(o) <= eps


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a.dist(self.b) <= EPS:
            raise GeometryError(f"degenerate segment at {self.a}")

    @property
    def start(self) -> Point:
        return self.a

    @property
    def end(self) -> Point:
        return self.b

    def direction(self) -> Point:
        return (self.b - self.a).unit()

    def length(self) -> float:
        return self.a.dist(self.b)

    def point_at(self, t: float) -> Point:
        return Point(self.a.x + t * (self.b.x - self.a.x),
                     self.a.y + t * (self.b.y - self.a.y))

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def subpiece(self, t0: float, t1: float) -> "Segment":
        return Segment(self.point_at(t0), self.point_at(t1))

    def param_of(self, p: Point) -> float:
        d = self.b - self.a
        return (p - self.a).dot(d) / d.dot(d)

    def dist_to_point(self, p: Point) -> float:
        return dist_point_segment(p, self)

    def aabb(self) -> tuple[float, float, float, float]:
        return (min(self.a.x, self.b.x), min(self.a.y, self.b.y),
                max(self.a.x, self.b.x), max(self.a.y, self.b.y))


CCW = "ccw"
CW = "cw"


@dataclass(frozen=True)
class Arc:
    """Circular arc parameterized by angle, never by chord.

    ``theta_start``/``theta_end`` are absolute angles; the arc runs from
    start to end in the given orientation.  Sweep is always in (0, 2*pi).
    """

    center: Point
    radius: float
    theta_start: float
    theta_end: float
    orientation: str = CCW

    def __post_init__(self):
        if self.radius <= EPS:
            raise GeometryError("arc radius must be positive")
        if self.orientation not in (CCW, CW):
            raise GeometryError(f"bad orientation {self.orientation!r}")
        if self.sweep <= 1e-12:
            raise GeometryError("zero-sweep arc")

    @property
    def sweep(self) -> float:
        if self.orientation == CCW:
            s = math.fmod(self.theta_end - self.theta_start, TWO_PI)
        else:
            s = math.fmod(self.theta_start - self.theta_end, TWO_PI)
        if s < 0:
            s += TWO_PI
        if s == 0.0:
            # identical endpoint angles encode a full turn
            s = TWO_PI
        return s

    def angle_at(self, t: float) -> float:
        sgn = 1.0 if self.orientation == CCW else -1.0
        return self.theta_start + sgn * self.sweep * t

    def point_at_angle(self, theta: float) -> Point:
        return Point(self.center.x + self.radius * math.cos(theta),
                     self.center.y + self.radius * math.sin(theta))

    def point_at(self, t: float) -> Point:
        return self.point_at_angle(self.angle_at(t))

    @property
    def start(self) -> Point:
        return self.point_at_angle(self.theta_start)

    @property
    def end(self) -> Point:
        return self.point_at_angle(self.theta_end)

    def length(self) -> float:
        return self.radius * self.sweep

    def reversed(self) -> "Arc":
        flip = CW if self.orientation == CCW else CCW
        return Arc(self.center, self.radius, self.theta_end, self.theta_start, flip)

    def subpiece(self, t0: float, t1: float) -> "Arc":
        if not t1 > t0:
            raise GeometryError("empty subarc")
        return Arc(self.center, self.radius, self.angle_at(t0), self.angle_at(t1),
                   self.orientation)

    def contains_angle(self, theta: float, slack: float = EPS) -> bool:
        sgn = 1.0 if self.orientation == CCW else -1.0
        rel = math.fmod(sgn * (theta - self.theta_start), TWO_PI)
        if rel < 0:
            rel += TWO_PI
        return rel <= self.sweep + slack or rel >= TWO_PI - slack

    def param_of_angle(self, theta: float) -> float:
        sgn = 1.0 if self.orientation == CCW else -1.0
        rel = math.fmod(sgn * (theta - self.theta_start), TWO_PI)
        if rel < 0:
            rel += TWO_PI
        if rel > self.sweep:
            # clamp wrap-around noise to the nearer arc end
            rel = 0.0 if rel >= TWO_PI - (TWO_PI - self.sweep) / 2 else self.sweep
        return rel / self.sweep

    def dist_to_point(self, p: Point) -> float:
        v = p - self.center
        rho = v.norm()
        if rho <= EPS:
            return self.radius
        if self.contains_angle(v.angle()):
            return abs(rho - self.radius)
        return min(p.dist(self.start), p.dist(self.end))

    def aabb(self) -> tuple[float, float, float, float]:
        xs = [self.start.x, self.end.x]
        ys = [self.start.y, self.end.y]
        for k, (dx, dy) in enumerate([(1, 0), (0, 1), (-1, 0), (0, -1)]):
            theta = k * math.pi / 2
            if self.contains_angle(theta):
                xs.append(self.center.x + self.radius * dx)
                ys.append(self.center.y + self.radius * dy)
        return (min(xs), min(ys), max(xs), max(ys))


Piece = Segment | Arc


@dataclass(frozen=True)
class Polygon:
    """Simple polygon, normalized to CCW orientation.

    Consecutive collinear vertices are merged; self-intersecting or
    near-degenerate input raises ``DegeneratePolygon``.
    """

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = _normalize_vertices(self.vertices)
        object.__setattr__(self, "vertices", verts)
        _check_simple(verts)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[Segment]:
        v = self.vertices
        return [Segment(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def signed_area(self) -> float:
        v = self.vertices
        return 0.5 * sum(v[i].cross(v[(i + 1) % len(v)]) for i in range(len(v)))

    def aabb(self) -> tuple[float, float, float, float]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def boundary_dist(self, p: Point) -> float:
        return min(dist_point_segment(p, e) for e in self.edges())

    def contains(self, p: Point) -> str:
        """Classify a point as 'inside', 'boundary', or 'outside'."""
        if self.boundary_dist(p) <= EPS:
            return "boundary"
        inside = False
        x, y = p.x, p.y
        v = self.vertices
        n = len(v)
        for i in range(n):
            a, b = v[i], v[(i + 1) % n]
            if (a.y > y) != (b.y > y):
                xi = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y)
                if xi > x:
                    inside = not inside
        return "inside" if inside else "outside"


def _normalize_vertices(vertices: Sequence[Point]) -> tuple[Point, ...]:
    verts = [Point(float(p.x), float(p.y)) for p in vertices]
    for p in verts:
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise DegeneratePolygon("non-finite vertex coordinate")
    # drop repeated and collinear vertices
    out: list[Point] = []
    for p in verts:
        if out and p.approx(out[-1]):
            continue
        out.append(p)
    if len(out) > 1 and out[0].approx(out[-1]):
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        for i in range(len(out)):
            a = out[i - 1]
            b = out[i]
            c = out[(i + 1) % len(out)]
            if abs((b - a).cross(c - b)) <= EPS * max(1.0, (c - a).norm()):
                out.pop(i)
                changed = True
                break
    if len(out) < 3:
        raise DegeneratePolygon("fewer than 3 effective vertices")
    area = 0.5 * sum(out[i].cross(out[(i + 1) % len(out)]) for i in range(len(out)))
    if abs(area) <= EPS:
        raise DegeneratePolygon("near-zero polygon area")
    if area < 0:
        out.reverse()
    return tuple(out)


def _check_simple(verts: tuple[Point, ...]) -> None:
    n = len(verts)
    edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            a, b = edges[i]
            c, d = edges[j]
            pts = intersect_segment_segment(Segment(a, b), Segment(c, d))
            if not pts:
                continue
            if adjacent:
                shared = b if j == i + 1 else a
                if len(pts) > 1 or not pts[0].approx(shared, 10 * EPS):
                    raise DegeneratePolygon(
                        f"adjacent edges {i},{j} overlap beyond shared vertex")
            else:
                raise DegeneratePolygon(f"edges {i} and {j} intersect")


# ---------------------------------------------------------------------------
# intersection primitives


def intersect_segment_segment(s1: Segment, s2: Segment) -> list[Point]:
    """0, 1, or 2 points; a collinear overlap reports its two extreme points."""
    d1 = s1.b - s1.a
    d2 = s2.b - s2.a
    denom = d1.cross(d2)
    diff = s2.a - s1.a
    scale = max(d1.norm(), d2.norm(), 1.0)
    if abs(denom) <= EPS * scale:
        # parallel; collinear iff s2.a sits on s1's supporting line
        if abs(diff.cross(d1)) > EPS * scale:
            return []
        t0 = (s2.a - s1.a).dot(d1) / d1.dot(d1)
        t1 = (s2.b - s1.a).dot(d1) / d1.dot(d1)
        lo, hi = min(t0, t1), max(t0, t1)
        lo = max(lo, 0.0)
        hi = min(hi, 1.0)
        eps_t = EPS / max(d1.norm(), EPS)
        if lo > hi + eps_t:
            return []
        p_lo = s1.point_at(lo)
        p_hi = s1.point_at(hi)
        if p_lo.approx(p_hi):
            return [p_lo]
        return [p_lo, p_hi]
    t = diff.cross(d2) / denom
    u = diff.cross(d1) / denom
    eps_t = EPS / max(d1.norm(), EPS)
    eps_u = EPS / max(d2.norm(), EPS)
    if -eps_t <= t <= 1 + eps_t and -eps_u <= u <= 1 + eps_u:
        t = min(max(t, 0.0), 1.0)
        return [s1.point_at(t)]
    return []


def intersect_circle_segment(c: Point, r: float, s: Segment) -> list[Point]:
    """Points of a circle on a closed segment; near-tangency snaps to one point."""
    if r <= 0:
        raise GeometryError("radius must be positive")
    d = s.b - s.a
    length = d.norm()
    u = Point(d.x / length, d.y / length)
    w = c - s.a
    proj = w.dot(u)
    foot = Point(s.a.x + proj * u.x, s.a.y + proj * u.y)
    h = c.dist(foot)
    eps_t = EPS / length
    if close(h, r):
        t = proj / length
        if -eps_t <= t <= 1 + eps_t:
            return [s.point_at(min(max(t, 0.0), 1.0))]
        return []
    if h > r:
        return []
    half = math.sqrt(max(r * r - h * h, 0.0))
    out = []
    for sign in (-1.0, 1.0):
        t = (proj + sign * half) / length
        if -eps_t <= t <= 1 + eps_t:
            out.append(s.point_at(min(max(t, 0.0), 1.0)))
    return out


def intersect_circle_circle(c1: Point, r1: float, c2: Point, r2: float) -> list[Point]:
    if r1 <= 0 or r2 <= 0:
        raise GeometryError("radii must be positive")
    d = c1.dist(c2)
    if d <= EPS:
        if close(r1, r2):
            raise CoincidentCircles(f"coincident circles at {c1} r={r1}")
        return []
    u = (c2 - c1).scaled(1.0 / d)
    if close(d, r1 + r2):
        return [c1 + u.scaled(r1)]
    if d > r1 + r2:
        return []
    if close(d, abs(r1 - r2)):
        sign = 1.0 if r1 >= r2 else -1.0
        return [c1 + u.scaled(sign * r1)]
    if d < abs(r1 - r2):
        return []
    ell = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    h2 = r1 * r1 - ell * ell
    h = math.sqrt(max(h2, 0.0))
    mid = c1 + u.scaled(ell)
    v = u.perp_left().scaled(h)
    if h <= EPS:
        return [mid]
    return [mid + v, mid - v]


def dist_point_segment(p: Point, s: Segment) -> float:
    d = s.b - s.a
    t = (p - s.a).dot(d) / d.dot(d)
    t = min(max(t, 0.0), 1.0)
    return p.dist(s.point_at(t))


def min_dist_piece_point(piece: Piece, p: Point) -> float:
    """Exact minimum distance from a path piece to a point (never sampled)."""
    return piece.dist_to_point(p)


def min_dist_piece_segment(piece: Piece, s: Segment) -> float:
    """Exact minimum distance between a path piece and a segment."""
    if isinstance(piece, Segment):
        if intersect_segment_segment(piece, s):
            return 0.0
        return min(dist_point_segment(piece.a, s), dist_point_segment(piece.b, s),
                   dist_point_segment(s.a, piece), dist_point_segment(s.b, piece))
    arc = piece
    hits = intersect_circle_segment(arc.center, arc.radius, s)
    for h in hits:
        if arc.contains_angle((h - arc.center).angle()):
            return 0.0
    cands = [arc.dist_to_point(s.a), arc.dist_to_point(s.b),
             dist_point_segment(arc.start, s), dist_point_segment(arc.end, s)]
    # interior-interior critical point: foot of the arc center on the segment
    d = s.b - s.a
    t = (arc.center - s.a).dot(d) / d.dot(d)
    if 0.0 < t < 1.0:
        foot = s.point_at(t)
        v = foot - arc.center
        if v.norm() > EPS and arc.contains_angle(v.angle()):
            cands.append(abs(v.norm() - arc.radius))
    return min(cands)


# ---------------------------------------------------------------------------
# piece-piece intersections with parameters (for arrangement splitting)


def piece_intersections(p1: Piece, p2: Piece) -> list[tuple[float, float, Point]]:
    """Intersection points of two pieces as (t_on_p1, t_on_p2, point)."""
    out: list[tuple[float, float, Point]] = []
    if isinstance(p1, Segment) and isinstance(p2, Segment):
        for pt in intersect_segment_segment(p1, p2):
            out.append((_seg_param(p1, pt), _seg_param(p2, pt), pt))
    elif isinstance(p1, Segment) and isinstance(p2, Arc):
        for pt in intersect_circle_segment(p2.center, p2.radius, p1):
            theta = (pt - p2.center).angle()
            if p2.contains_angle(theta, slack=EPS / p2.radius):
                out.append((_seg_param(p1, pt), p2.param_of_angle(theta), pt))
    elif isinstance(p1, Arc) and isinstance(p2, Segment):
        for t2, t1, pt in piece_intersections(p2, p1):
            out.append((t1, t2, pt))
    else:
        assert isinstance(p1, Arc) and isinstance(p2, Arc)
        if p1.center.approx(p2.center) and close(p1.radius, p2.radius):
            # arcs of one circle meet only at shared endpoints in the
            # constructions used here; those are never split points
            return out
        for pt in intersect_circle_circle(p1.center, p1.radius, p2.center, p2.radius):
            th1 = (pt - p1.center).angle()
            th2 = (pt - p2.center).angle()
            if (p1.contains_angle(th1, slack=EPS / p1.radius)
                    and p2.contains_angle(th2, slack=EPS / p2.radius)):
                out.append((p1.param_of_angle(th1), p2.param_of_angle(th2), pt))
    return out


def _seg_param(s: Segment, p: Point) -> float:
    return min(max(s.param_of(p), 0.0), 1.0)


def split_pieces(pieces: Sequence[Piece]) -> list[tuple[int, Piece]]:
    """Split every piece at all mutual intersection points.

    Returns (source_index, subpiece) pairs; subpieces inherit the direction
    of their source piece and appear in source order.
    """
    cuts: list[list[float]] = [[] for _ in pieces]
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            for ti, tj, _ in piece_intersections(pieces[i], pieces[j]):
                cuts[i].append(ti)
                cuts[j].append(tj)
    out: list[tuple[int, Piece]] = []
    for idx, piece in enumerate(pieces):
        eps_t = EPS / max(piece.length(), EPS)
        params = sorted(t for t in cuts[idx] if eps_t < t < 1 - eps_t)
        merged: list[float] = []
        for t in params:
            if not merged or t - merged[-1] > eps_t:
                merged.append(t)
        bounds = [0.0] + merged + [1.0]
        for t0, t1 in zip(bounds, bounds[1:]):
            if t1 - t0 > eps_t:
                out.append((idx, piece.subpiece(t0, t1)))
    return out


# ---------------------------------------------------------------------------
# rays against pieces


@dataclass(frozen=True)
class RayHit:
    t: float
    point: Point
    piece_index: int
    piece_param: float
    clean: bool


def ray_piece_hits(origin: Point, direction: Point, piece: Piece,
                   piece_index: int = 0) -> list[RayHit]:
    """Hits of the ray origin + t*direction (t >= 0) on a piece.

    A hit is 'clean' when it is transversal and away from piece endpoints,
    so parity and first-hit logic can trust it.
    """
    hits: list[RayHit] = []
    if isinstance(piece, Segment):
        e = piece.b - piece.a
        denom = direction.cross(e)
        diff = piece.a - origin
        if abs(denom) <= EPS * max(e.norm(), 1.0):
            if abs(diff.cross(direction)) <= EPS * max(e.norm(), 1.0):
                # ray runs along the segment's supporting line; if any part
                # of the segment lies ahead, report an unclean hit so parity
                # logic retries with another direction
                t0 = (piece.a - origin).dot(direction)
                t1 = (piece.b - origin).dot(direction)
                if max(t0, t1) >= -EPS:
                    t = max(min(t0, t1), 0.0)
                    hits.append(RayHit(t, piece.point_at(0.5), piece_index, 0.5, False))
            return hits
        t = diff.cross(e) / denom
        s = diff.cross(direction) / denom
        eps_s = EPS / max(e.norm(), EPS)
        if t >= -EPS and -eps_s <= s <= 1 + eps_s:
            clean = t > EPS and 10 * eps_s < s < 1 - 10 * eps_s
            pt = piece.point_at(min(max(s, 0.0), 1.0))
            hits.append(RayHit(t, pt, piece_index, min(max(s, 0.0), 1.0), clean))
        return hits
    arc = piece
    oc = origin - arc.center
    b = direction.dot(oc)
    c = oc.dot(oc) - arc.radius * arc.radius
    disc = b * b - c
    if disc < -EPS:
        return []
    tangent = disc <= EPS
    roots = [-b] if tangent else [-b - math.sqrt(disc), -b + math.sqrt(disc)]
    for t in roots:
        if t < -EPS:
            continue
        pt = Point(origin.x + t * direction.x, origin.y + t * direction.y)
        theta = (pt - arc.center).angle()
        slack = EPS / arc.radius
        if not arc.contains_angle(theta, slack=slack):
            continue
        param = arc.param_of_angle(theta)
        interior = 10 * slack / arc.sweep < param < 1 - 10 * slack / arc.sweep
        clean = (not tangent) and t > EPS and interior
        hits.append(RayHit(t, pt, piece_index, param, clean))
    return hits


def ray_chain_hits(origin: Point, direction: Point,
                   pieces: Sequence[Piece]) -> list[RayHit]:
    hits: list[RayHit] = []
    for i, piece in enumerate(pieces):
        hits.extend(ray_piece_hits(origin, direction, piece, i))
    hits.sort(key=lambda h: h.t)
    return hits


def point_in_chain(p: Point, pieces: Sequence[Piece]) -> bool:
    """Parity test against a closed chain; retries directions on degeneracy."""
    for ang in _RAY_ANGLES:
        direction = Point(math.cos(ang), math.sin(ang))
        hits = ray_chain_hits(p, direction, pieces)
        if all(h.clean for h in hits):
            return len(hits) % 2 == 1
    raise DegenerateChain(f"no clean parity ray found for {p}")


def chain_signed_area(pieces: Sequence[Piece]) -> float:
    """Signed area of a closed piece chain (CCW positive)."""
    total = 0.0
    for piece in pieces:
        if isinstance(piece, Segment):
            total += 0.5 * piece.a.cross(piece.b)
        else:
            a = piece.angle_at(0.0)
            sweep = piece.sweep if piece.orientation == CCW else -piece.sweep
            b = a + sweep
            cx, cy, r = piece.center.x, piece.center.y, piece.radius
            total += 0.5 * (cx * r * (math.sin(b) - math.sin(a))
                            - cy * r * (math.cos(b) - math.cos(a))
                            + r * r * sweep)
    return total


def chain_length(pieces: Sequence[Piece]) -> float:
    return sum(p.length() for p in pieces)


def chain_aabb(pieces: Sequence[Piece]) -> tuple[float, float, float, float]:
    boxes = [p.aabb() for p in pieces]
    return (min(b[0] for b in boxes), min(b[1] for b in boxes),
            max(b[2] for b in boxes), max(b[3] for b in boxes))


def chain_is_closed(pieces: Sequence[Piece], eps: float = 1e-6) -> bool:
    if not pieces:
        return False
    for p, q in zip(pieces, pieces[1:]):
        if not p.end.approx(q.start, eps):
            return False
    return pieces[-1].end.approx(pieces[0].start, eps)


class _VertexIndex:
    """Snap-tolerant point index used while stitching chains together."""

    def __init__(self, snap: float = 1e-7):
        self.snap = snap
        self._buckets: dict[tuple[int, int], list[tuple[Point, int]]] = {}
        self._points: list[Point] = []

    def key_of(self, p: Point) -> int:
        bx = round(p.x / self.snap)
        by = round(p.y / self.snap)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for q, idx in self._buckets.get((bx + dx, by + dy), []):
                    if q.dist(p) <= self.snap:
                        return idx
        idx = len(self._points)
        self._points.append(p)
        self._buckets.setdefault((bx, by), []).append((p, idx))
        return idx


def assemble_chains(pieces: Sequence[Piece],
                    tags: Sequence | None = None,
                    snap: float = 1e-7):
    """Stitch undirected pieces into closed chains.

    Every stitch vertex must have exactly two incident pieces; anything else
    signals a degenerate arrangement.  Returns a list of chains, each a list
    of (piece, tag) with pieces oriented head-to-tail.
    """
    if tags is None:
        tags = [None] * len(pieces)
    index = _VertexIndex(snap)
    ends: list[tuple[int, int]] = []
    incident: dict[int, list[tuple[int, int]]] = {}
    for i, piece in enumerate(pieces):
        k0 = index.key_of(piece.start)
        k1 = index.key_of(piece.end)
        if k0 == k1:
            raise DegenerateChain(f"piece {i} closes on itself after snapping")
        ends.append((k0, k1))
        incident.setdefault(k0, []).append((i, 0))
        incident.setdefault(k1, []).append((i, 1))
    for vertex, inc in incident.items():
        if len(inc) != 2:
            raise DegenerateChain(
                f"vertex {vertex} has {len(inc)} incident pieces (want 2)")
    used = [False] * len(pieces)
    chains = []
    for start_idx in range(len(pieces)):
        if used[start_idx]:
            continue
        chain: list[tuple[Piece, object]] = []
        i = start_idx
        forward = True
        start_vertex = ends[i][0]
        while True:
            used[i] = True
            piece = pieces[i] if forward else pieces[i].reversed()
            chain.append((piece, tags[i]))
            tail = ends[i][1] if forward else ends[i][0]
            if tail == start_vertex:
                break
            nxt = [(j, e) for (j, e) in incident[tail] if j != i]
            if len(nxt) != 1:
                raise DegenerateChain("broken stitch while walking chain")
            i, end_at = nxt[0]
            forward = end_at == 0
        chains.append(chain)
    return chains

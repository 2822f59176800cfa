"""Planar vector/pose math and the geometric predicates behind the
velocity-cone construction.

All quantities are plain doubles. `Vec2` doubles as a position (m) and a
velocity (m/s); context decides the unit. Angles are radians, headings are
kept wrapped to (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EPS = 1e-9


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm_sq(self) -> float:
        return self.x * self.x + self.y * self.y

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def normalized(self) -> "Vec2":
        """Unit vector along self. Only defined for norm > EPS."""
        n = self.norm()
        if n <= EPS:
            raise ValueError(f"cannot normalize near-zero vector ({self.x}, {self.y})")
        return Vec2(self.x / n, self.y / n)

    def distance_to(self, other: "Vec2") -> float:
        return (self - other).norm()


ZERO = Vec2(0.0, 0.0)


def wrap_angle(theta: float) -> float:
    """Wrap an angle to (-pi, pi]. Idempotent: in-range values pass through
    bit-exactly."""
    if -math.pi < theta <= math.pi:
        return theta
    r = math.fmod(theta + math.pi, 2.0 * math.pi)
    if r <= 0.0:
        r += 2.0 * math.pi
    return r - math.pi


@dataclass(frozen=True)
class Pose2:
    position: Vec2
    heading: float

    def __post_init__(self):
        object.__setattr__(self, "heading", wrap_angle(self.heading))

    def forward(self) -> Vec2:
        return Vec2(math.cos(self.heading), math.sin(self.heading))


@dataclass(frozen=True)
class Segment2:
    a: Vec2
    b: Vec2

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("degenerate segment: endpoints coincide")


def ray_disc_intersects(origin: Vec2, direction: Vec2, center: Vec2, radius: float) -> bool:
    """True iff some point of the open ray origin + t*direction (t > 0) lies
    within `radius` of `center`.

    Tangency counts as intersecting (conservative for safety filtering). A
    near-zero direction degenerates to a point test on the origin itself.
    """
    w = origin - center
    a = direction.norm_sq()
    c = w.norm_sq() - radius * radius
    if a <= EPS * EPS:
        return c <= 0.0
    if c <= 0.0:
        # Origin already inside the disc: every t in (0, eps) qualifies.
        return True
    b = 2.0 * w.dot(direction)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return False
    # Intersection interval is [t_lo, t_hi]; some t > 0 exists iff t_hi > 0.
    t_hi = (-b + math.sqrt(disc)) / (2.0 * a)
    return t_hi > 0.0


def ray_disc_first_hit(origin: Vec2, direction: Vec2, center: Vec2, radius: float) -> float:
    """Smallest t >= 0 at which the ray enters the disc, or +inf if it never
    does. An origin already inside the disc hits at t = 0."""
    w = origin - center
    a = direction.norm_sq()
    c = w.norm_sq() - radius * radius
    if c <= 0.0:
        return 0.0
    if a <= EPS * EPS:
        return math.inf
    b = 2.0 * w.dot(direction)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return math.inf
    t_lo = (-b - math.sqrt(disc)) / (2.0 * a)
    return t_lo if t_lo > 0.0 else math.inf


def closest_point_on_segment(p: Vec2, seg: Segment2) -> Vec2:
    ab = seg.b - seg.a
    t = (p - seg.a).dot(ab) / ab.norm_sq()
    t = min(1.0, max(0.0, t))
    return seg.a + ab * t


def disc_segment_distance(center: Vec2, seg: Segment2) -> float:
    """Euclidean distance from a point to the closest point of a segment."""
    return center.distance_to(closest_point_on_segment(center, seg))

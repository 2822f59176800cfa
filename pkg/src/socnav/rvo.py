"""Socially-aware reciprocal velocity obstacles.

Builds one proxemics-inflated velocity cone per nearby pedestrian, prunes
control samples that would hit static geometry over a short horizon, and
selects the feasible sample minimizing a weighted sum of squared distances
to the operator's command, the previous selection and the goal velocity.

Candidate velocities live in the robot's control space (twists); cone
membership and the objective are evaluated on their planar images under the
chord bridge in `twist_to_planar_velocity`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .geometry import EPS, Segment2, Vec2, ray_disc_first_hit, ray_disc_intersects
from .pedestrians import PedestrianState
from .robot import (
    MotionLimits,
    RobotState,
    Twist,
    twist_to_planar_velocity,
)


@dataclass(frozen=True)
class VelocityCone:
    """Reciprocity-translated collision cone of one pedestrian in velocity
    space: a candidate v collides iff the ray from the robot's position along
    v - apex reaches the pedestrian's inflated disc.

    `contact_radius` is the smaller body-contact disc; the infeasible
    fallback ranks samples by time to physical contact, which stays
    informative even when the robot is already inside the proxemic
    inflation (where every inflated-disc hit time is zero and ranking by it
    would freeze the robot under an approaching pedestrian)."""

    apex: Vec2
    anchor: Vec2
    center: Vec2
    combined_radius: float
    contact_radius: float | None = None

    def __post_init__(self):
        if self.combined_radius <= 0.0:
            raise ValueError("combined_radius must be positive")
        if self.contact_radius is None:
            object.__setattr__(self, "contact_radius", self.combined_radius)

    def contains(self, v: Vec2) -> bool:
        return ray_disc_intersects(self.anchor, v - self.apex, self.center, self.combined_radius)

    def time_to_collision(self, v: Vec2) -> float:
        return ray_disc_first_hit(self.anchor, v - self.apex, self.center, self.contact_radius)


@dataclass(frozen=True)
class RvoWeights:
    """Objective weights: operator intent, smoothness across ticks, goal."""

    intent: float = 1.0
    smoothness: float = 0.3
    goal: float = 0.3

    def __post_init__(self):
        if min(self.intent, self.smoothness, self.goal) < 0.0:
            raise ValueError("weights must be non-negative")
        if self.intent + self.smoothness + self.goal <= 0.0:
            raise ValueError("at least one weight must be positive")


@dataclass(frozen=True)
class RvoContext:
    """Per-tick optimizer inputs threaded by the caller."""

    v_pref: Vec2
    v_prev_opt: Vec2
    v_goal: Vec2
    alpha: float = 0.5
    v_max: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.v_goal.norm() > self.v_max * (1.0 + 1e-12):
            raise ValueError("v_goal must not exceed v_max")


@dataclass(frozen=True)
class RvoParams:
    weights: RvoWeights = field(default_factory=RvoWeights)
    alpha: float = 0.5
    n_linear: int = 11
    n_angular: int = 21
    lookahead: float = 0.5
    sensing_range: float = 8.0
    static_margin: float = 0.05
    static_horizon: float = 1.5
    static_dt: float = 0.1
    include_reverse: bool = False


@dataclass(frozen=True)
class RvoDecision:
    twist: Twist
    planar: Vec2
    objective: float
    infeasible: bool


def build_cones(
    robot: RobotState,
    peds: list[PedestrianState],
    alpha: float,
    lookahead: float = 0.5,
    sensing_range: float = 8.0,
) -> list[VelocityCone]:
    """One cone per pedestrian within sensing range, apex split between the
    robot's and the pedestrian's current velocities by the reciprocity
    factor, radius inflated to the pedestrian's personal space."""
    v_robot = twist_to_planar_velocity(robot, robot.twist, lookahead)
    cones = []
    for ped in peds:
        if robot.position.distance_to(ped.position) > sensing_range:
            continue
        apex = v_robot * (1.0 - alpha) + ped.velocity * alpha
        cones.append(
            VelocityCone(
                apex=apex,
                anchor=robot.position,
                center=ped.position,
                combined_radius=robot.radius + ped.personal_radius,
                contact_radius=robot.radius + ped.body_radius,
            )
        )
    return cones


def in_any_cone(v: Vec2, cones: list[VelocityCone]) -> bool:
    return any(cone.contains(v) for cone in cones)


def sample_controls(
    limits: MotionLimits,
    n_linear: int = 11,
    n_angular: int = 21,
    operator_cmd: Twist | None = None,
    include_reverse: bool = False,
) -> list[Twist]:
    """Deterministic candidate twists: the clamped operator command and the
    stop twist first (so exact objective ties resolve toward the operator's
    intent, then toward stopping), followed by a row-major grid over
    [0, v_max] x [-omega_max, omega_max]. `include_reverse` mirrors the
    linear range to [-v_max, v_max] (same spacing), letting a cornered robot
    back out of a closing pocket.
    """
    if n_linear < 2 or n_angular < 3:
        raise ValueError("need n_linear >= 2 and n_angular >= 3")
    samples: list[Twist] = []
    if operator_cmd is not None:
        samples.append(operator_cmd)
    samples.append(Twist(0.0, 0.0))
    linear_steps = list(range(n_linear))
    if include_reverse:
        linear_steps = list(range(-(n_linear - 1), n_linear))
    for i in linear_steps:
        v = limits.v_max * i / (n_linear - 1)
        for j in range(n_angular):
            w = limits.omega_max * (2.0 * j / (n_angular - 1) - 1.0)
            samples.append(Twist(v, w))
    seen: set[tuple[float, float]] = set()
    unique = []
    for s in samples:
        key = (s.linear, s.angular)
        if key not in seen:
            seen.add(key)
            unique.append(s)
    return unique


def filter_static(
    samples: list[Twist],
    robot: RobotState,
    walls: list[Segment2],
    horizon: float = 1.5,
    dt: float = 0.1,
    margin: float = 0.05,
) -> list[Twist]:
    """Drop samples whose predicted arc comes within radius + margin of any
    wall at any point of the horizon. The stop twist always survives.

    Vectorized over (samples x horizon steps x walls); the arc poses are the
    same closed-form the unicycle integrator uses.
    """
    if horizon <= 0.0:
        raise ValueError("horizon must be positive")
    if not walls or not samples:
        return list(samples)
    n_steps = math.ceil(horizon / dt)
    t = dt * np.arange(1, n_steps + 1)  # (K,)
    v = np.fromiter((s.linear for s in samples), dtype=float, count=len(samples))
    w = np.fromiter((s.angular for s in samples), dtype=float, count=len(samples))
    x0, y0, theta = robot.position.x, robot.position.y, robot.heading

    # Midpoint form of the arc at each horizon step (same closed form the
    # unicycle integrator uses).
    half = 0.5 * w[:, None] * t[None, :]
    tiny = np.abs(half) < 1e-9
    sinc = np.where(tiny, 1.0, np.sin(np.where(tiny, 1.0, half)) / np.where(tiny, 1.0, half))
    chord = v[:, None] * t[None, :] * sinc
    xs = x0 + chord * np.cos(theta + half)
    ys = y0 + chord * np.sin(theta + half)
    pts = np.stack([xs, ys], axis=-1).reshape(-1, 1, 2)  # (S*K, 1, 2)

    a, ab, ab_len_sq = _wall_arrays(tuple(walls))
    frac = np.clip(np.einsum("pwd,wd->pw", pts - a, ab) / ab_len_sq, 0.0, 1.0)
    closest = a + frac[..., None] * ab
    delta = pts - closest
    dist_sq = np.einsum("pwd,pwd->pw", delta, delta)  # (S*K, W)
    clearance_sq = dist_sq.min(axis=1).reshape(len(samples), n_steps).min(axis=1)

    keep = clearance_sq > (robot.radius + margin) ** 2
    return [s for s, ok in zip(samples, keep) if ok or (s.linear == 0.0 and s.angular == 0.0)]


@lru_cache(maxsize=8)
def _wall_arrays(walls: tuple[Segment2, ...]):
    a = np.array([[seg.a.x, seg.a.y] for seg in walls])  # (W, 2)
    b = np.array([[seg.b.x, seg.b.y] for seg in walls])
    ab = b - a
    return a, ab, np.einsum("wd,wd->w", ab, ab)


def _blocked_mask(vx: np.ndarray, vy: np.ndarray, cones: list[VelocityCone]) -> np.ndarray:
    """Vectorized cone membership over candidate planar velocities.

    Evaluates the exact expression of `ray_disc_intersects` elementwise, so
    the mask equals looping `in_any_cone` sample by sample.
    """
    blocked = np.zeros(len(vx), dtype=bool)
    for cone in cones:
        dx = vx - cone.apex.x
        dy = vy - cone.apex.y
        wx = cone.anchor.x - cone.center.x
        wy = cone.anchor.y - cone.center.y
        a = dx * dx + dy * dy
        c = (wx * wx + wy * wy) - cone.combined_radius * cone.combined_radius
        if c <= 0.0:
            # Robot center already inside the inflated disc: every velocity
            # leads into it (already-intruding case).
            blocked[:] = True
            return blocked
        b = 2.0 * (wx * dx + wy * dy)
        disc = b * b - 4.0 * a * c
        live = (a > EPS * EPS) & (disc >= 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            t_hi = (-b + np.sqrt(np.where(live, disc, 0.0))) / (2.0 * a)
        blocked |= live & (t_hi > 0.0)
    return blocked


def optimal_velocity(
    samples: list[Twist],
    robot: RobotState,
    cones: list[VelocityCone],
    ctx: RvoContext,
    weights: RvoWeights,
    lookahead: float = 0.5,
) -> RvoDecision:
    """Weighted argmin over cone-free samples; exact ties keep the earlier
    sample. With every sample blocked, falls back to the sample maximizing
    the minimum time-to-collision over all cones (lower planar speed breaks
    fallback ties) and flags the tick infeasible.
    """
    if not samples:
        raise ValueError("sample list must be non-empty")
    planars = [twist_to_planar_velocity(robot, s, lookahead) for s in samples]
    vx = np.fromiter((p.x for p in planars), dtype=float, count=len(planars))
    vy = np.fromiter((p.y for p in planars), dtype=float, count=len(planars))
    blocked = _blocked_mask(vx, vy, cones) if cones else np.zeros(len(samples), dtype=bool)

    feasible = np.flatnonzero(~blocked)
    if feasible.size:
        dpx, dpy = vx - ctx.v_pref.x, vy - ctx.v_pref.y
        dqx, dqy = vx - ctx.v_prev_opt.x, vy - ctx.v_prev_opt.y
        dgx, dgy = vx - ctx.v_goal.x, vy - ctx.v_goal.y
        g = (
            weights.intent * (dpx * dpx + dpy * dpy)
            + weights.smoothness * (dqx * dqx + dqy * dqy)
            + weights.goal * (dgx * dgx + dgy * dgy)
        )
        best = int(feasible[np.argmin(g[feasible])])
        return RvoDecision(samples[best], planars[best], float(g[best]), infeasible=False)

    fallback: RvoDecision | None = None
    best_ttc = -math.inf
    best_speed = math.inf
    for sample, planar in zip(samples, planars):
        ttc = min(cone.time_to_collision(planar) for cone in cones)
        speed = planar.norm()
        if ttc > best_ttc or (ttc == best_ttc and speed < best_speed):
            best_ttc, best_speed = ttc, speed
            fallback = RvoDecision(sample, planar, math.inf, infeasible=True)
    assert fallback is not None
    return fallback

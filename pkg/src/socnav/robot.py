"""Differential-drive robot: input mapping, exact unicycle integration and
forward trajectory prediction.

The robot is kinematic: a commanded twist takes effect on the next tick
(optionally rate-limited). Integration uses the closed-form unicycle arc, so
single large steps and chains of small steps land on the same trajectory up
to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import Pose2, Vec2, wrap_angle

@dataclass(frozen=True)
class Twist:
    linear: float
    angular: float


@dataclass(frozen=True)
class StickInput:
    """Raw 2-axis operator input, both axes clamped to [-1, 1]."""

    axis_x: float
    axis_y: float

    def __post_init__(self):
        object.__setattr__(self, "axis_x", min(1.0, max(-1.0, self.axis_x)))
        object.__setattr__(self, "axis_y", min(1.0, max(-1.0, self.axis_y)))


@dataclass(frozen=True)
class MotionLimits:
    v_max: float = 1.0
    omega_max: float = 1.5


@dataclass(frozen=True)
class RobotState:
    pose: Pose2
    twist: Twist
    radius: float = 0.28

    @property
    def position(self) -> Vec2:
        return self.pose.position

    @property
    def heading(self) -> float:
        return self.pose.heading


def _shape(axis: float, deadzone: float) -> float:
    """Signed rescale of [deadzone, 1] onto [0, 1]; zero inside the deadzone."""
    mag = abs(axis)
    if mag <= deadzone:
        return 0.0
    return math.copysign((mag - deadzone) / (1.0 - deadzone), axis)


def map_input(stick: StickInput, limits: MotionLimits, deadzone: float = 0.0) -> Twist:
    """Position-velocity mapping of the 2-axis stick onto a twist.

    Pushing the stick forward (axis_y = +1) commands +v_max; pushing it left
    (axis_x = -1) commands +omega_max (counter-clockwise). A radial deadzone
    suppresses drift near center before per-axis shaping.
    """
    if not 0.0 <= deadzone < 1.0:
        raise ValueError(f"deadzone must be in [0, 1), got {deadzone}")
    if math.hypot(stick.axis_x, stick.axis_y) <= deadzone:
        return Twist(0.0, 0.0)
    return Twist(
        limits.v_max * _shape(stick.axis_y, deadzone),
        limits.omega_max * _shape(-stick.axis_x, deadzone),
    )


def stick_for_twist(twist: Twist, limits: MotionLimits, deadzone: float = 0.0) -> StickInput:
    """Stick position whose map_input reproduces `twist` (up to rounding)."""

    def unshape(value: float, scale: float) -> float:
        frac = value / scale
        if frac == 0.0:
            return 0.0
        return math.copysign(deadzone + abs(frac) * (1.0 - deadzone), frac)

    return StickInput(-unshape(twist.angular, limits.omega_max), unshape(twist.linear, limits.v_max))


def clamp_twist(cmd: Twist, limits: MotionLimits) -> Twist:
    return Twist(
        min(limits.v_max, max(-limits.v_max, cmd.linear)),
        min(limits.omega_max, max(-limits.omega_max, cmd.angular)),
    )


def _sinc(h: float) -> float:
    if abs(h) < 1e-9:
        return 1.0
    return math.sin(h) / h


def _advance(pose: Pose2, v: float, omega: float, dt: float) -> Pose2:
    # Midpoint form of the exact arc integral: identical to
    # (v/omega)*(sin(theta+omega*dt) - sin(theta)) but well conditioned for
    # omega -> 0, where it smoothly becomes the straight-line update.
    x, y, theta = pose.position.x, pose.position.y, pose.heading
    half = 0.5 * omega * dt
    chord = v * dt * _sinc(half)
    x += chord * math.cos(theta + half)
    y += chord * math.sin(theta + half)
    return Pose2(Vec2(x, y), wrap_angle(theta + omega * dt))


def step(
    state: RobotState,
    cmd: Twist,
    dt: float,
    accel_limit: float | None = None,
    ang_accel_limit: float | None = None,
) -> RobotState:
    """Advance one tick under `cmd` using the exact unicycle arc.

    The commanded twist is applied for the whole interval (first-order
    actuation); optional symmetric acceleration limits slew from the current
    twist instead of jumping.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    v, omega = cmd.linear, cmd.angular
    if accel_limit is not None:
        dv = max(-accel_limit * dt, min(accel_limit * dt, v - state.twist.linear))
        v = state.twist.linear + dv
    if ang_accel_limit is not None:
        dw = max(-ang_accel_limit * dt, min(ang_accel_limit * dt, omega - state.twist.angular))
        omega = state.twist.angular + dw
    return replace(state, pose=_advance(state.pose, v, omega, dt), twist=Twist(v, omega))


def predict_trajectory(state: RobotState, cmd: Twist, horizon: float, dt: float) -> list[Pose2]:
    """Poses at dt, 2*dt, ... out to `horizon` under a constant command."""
    if horizon <= 0.0 or dt <= 0.0 or dt > horizon:
        raise ValueError(f"need 0 < dt <= horizon, got dt={dt}, horizon={horizon}")
    n = math.ceil(horizon / dt)
    poses = []
    pose = state.pose
    for _ in range(n):
        pose = _advance(pose, cmd.linear, cmd.angular, dt)
        poses.append(pose)
    return poses


def twist_to_planar_velocity(state: RobotState, cmd: Twist, lookahead: float = 0.5) -> Vec2:
    """Bridge from the nonholonomic control space to the planar velocity
    space the cone construction operates in: the chord velocity of the arc
    the command would trace over `lookahead` seconds, i.e.
    (arc endpoint - current position) / lookahead.

    For omega = 0 this is exactly v * (cos theta, sin theta); rotation in
    place maps to the zero vector.
    """
    if lookahead <= 0.0:
        raise ValueError(f"lookahead must be positive, got {lookahead}")
    v, omega, theta = cmd.linear, cmd.angular, state.heading
    half = 0.5 * omega * lookahead
    speed = v * _sinc(half)
    return Vec2(speed * math.cos(theta + half), speed * math.sin(theta + half))

"""Guidance modalities built on top of the optimal-velocity output.

Six runtime conditions gate which channels are populated:

  MC    manual control: dynamics trace + speed readout only
  H     haptic force on the operator's input axes
  V_T   suggested-trajectory overlay
  V_B   steering-magnitude bars
  HV_T  haptic + trajectory
  HV_B  haptic + bars

The haptic force lives in operator twist coordinates (linear, angular) so
its direction matches the stick correction the operator should make; each
component is clamped to [-1, 1] for the device abstraction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .geometry import Pose2, Vec2
from .robot import MotionLimits, RobotState, Twist, predict_trajectory, twist_to_planar_velocity


class Condition(enum.Enum):
    MC = "mc"
    H = "h"
    V_T = "vt"
    V_B = "vb"
    HV_T = "hvt"
    HV_B = "hvb"

    @property
    def has_haptics(self) -> bool:
        return self in (Condition.H, Condition.HV_T, Condition.HV_B)

    @property
    def has_trajectory(self) -> bool:
        return self in (Condition.V_T, Condition.HV_T)

    @property
    def has_bars(self) -> bool:
        return self in (Condition.V_B, Condition.HV_B)

    @property
    def has_assistance(self) -> bool:
        return self is not Condition.MC


@dataclass(frozen=True)
class AssistParams:
    haptic_gain: float = 1.2
    display_threshold: float = 0.15
    hysteresis_band: float = 0.05
    bar_gain: float = 1.0
    guidance_horizon: float = 2.0
    guidance_dt: float = 0.1


@dataclass(frozen=True)
class AssistanceOutput:
    v_opt_twist: Twist | None
    v_opt_planar: Vec2 | None
    haptic_force: Vec2
    guidance_trajectory: tuple[Pose2, ...]
    predicted_trajectory: tuple[Pose2, ...]
    steering_bars: tuple[float, float]  # (left, right), each in [0, 1]
    speed_fraction: float
    infeasible: bool
    show_guidance: bool


def haptic_force(v_opt: Twist, v_pref: Twist, gain: float) -> Vec2:
    """Force proportional to the optimal-minus-operator command error, in the
    operator's (linear, angular) axes, clamped per axis to [-1, 1]."""
    if gain < 0.0:
        raise ValueError("haptic gain must be non-negative")
    fx = gain * (v_opt.linear - v_pref.linear)
    fy = gain * (v_opt.angular - v_pref.angular)
    return Vec2(min(1.0, max(-1.0, fx)), min(1.0, max(-1.0, fy)))


def _steering_bars(v_opt: Twist, v_pref: Twist, limits: MotionLimits, bar_gain: float) -> tuple[float, float]:
    # Bar side = direction the operator must steer; left stick is positive
    # angular, so a negative correction lights the right bar.
    d_omega = v_opt.angular - v_pref.angular
    scaled = d_omega / limits.omega_max * bar_gain
    left = min(1.0, max(0.0, scaled))
    right = min(1.0, max(0.0, -scaled))
    return (left, right)


def guidance_visuals(
    robot: RobotState,
    v_opt: Twist | None,
    v_pref: Twist,
    condition: Condition,
    limits: MotionLimits,
    params: AssistParams,
    prev_show: bool = False,
    infeasible: bool = False,
    v_opt_planar: Vec2 | None = None,
    v_pref_planar: Vec2 | None = None,
) -> AssistanceOutput:
    """Assemble the per-tick output for one condition.

    The dynamics trace (prediction under the operator's own command) and the
    speed readout are populated in every condition, MC included. Guidance
    channels are gated by the condition; the trajectory overlay additionally
    hides while the optimal and operator commands agree, with a hysteresis
    band around the display threshold so it cannot flicker. `prev_show` is
    last tick's show flag, owned by the caller.
    """
    predicted = tuple(predict_trajectory(robot, v_pref, params.guidance_horizon, params.guidance_dt))
    speed_fraction = min(1.0, abs(v_pref.linear) / limits.v_max)

    if v_opt is None or not condition.has_assistance:
        return AssistanceOutput(
            v_opt_twist=None if condition is Condition.MC else v_opt,
            v_opt_planar=None if condition is Condition.MC else v_opt_planar,
            haptic_force=Vec2(0.0, 0.0),
            guidance_trajectory=(),
            predicted_trajectory=predicted,
            steering_bars=(0.0, 0.0),
            speed_fraction=speed_fraction,
            infeasible=infeasible,
            show_guidance=False,
        )

    if v_opt_planar is None:
        v_opt_planar = twist_to_planar_velocity(robot, v_opt)
    if v_pref_planar is None:
        v_pref_planar = twist_to_planar_velocity(robot, v_pref)
    disagreement = (v_opt_planar - v_pref_planar).norm()
    if prev_show:
        show = disagreement > max(params.display_threshold - params.hysteresis_band, 0.0)
    else:
        show = disagreement > params.display_threshold + params.hysteresis_band

    force = Vec2(0.0, 0.0)
    if condition.has_haptics:
        force = haptic_force(v_opt, v_pref, params.haptic_gain)

    guidance: tuple[Pose2, ...] = ()
    if condition.has_trajectory and show:
        guidance = tuple(predict_trajectory(robot, v_opt, params.guidance_horizon, params.guidance_dt))

    bars = (0.0, 0.0)
    if condition.has_bars:
        bars = _steering_bars(v_opt, v_pref, limits, params.bar_gain)

    return AssistanceOutput(
        v_opt_twist=v_opt,
        v_opt_planar=v_opt_planar,
        haptic_force=force,
        guidance_trajectory=guidance,
        predicted_trajectory=predicted,
        steering_bars=bars,
        speed_fraction=speed_fraction,
        infeasible=infeasible,
        show_guidance=show,
    )

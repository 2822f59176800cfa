"""Social-force pedestrians.

Circular-specification Helbing-Molnar forces without the anisotropy factor:
a goal relaxation term plus exponential repulsions from other agents (the
robot counts as one) and from wall segments. Integration is semi-implicit
Euler with a hard speed cap, stable at the simulator's 20 Hz tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import Segment2, Vec2, closest_point_on_segment
from .robot import RobotState

SPEED_CAP_FACTOR = 1.3
GOAL_REACHED_DISTANCE = 0.3
COINCIDENT_EPS = 1e-6

ROBOT_AGENT_ID = -1


@dataclass(frozen=True)
class SfmParams:
    relaxation_time: float = 0.5
    social_strength: float = 2.1
    social_range: float = 0.3
    obstacle_strength: float = 10.0
    obstacle_range: float = 0.1

    def __post_init__(self):
        for name in ("relaxation_time", "social_strength", "social_range",
                     "obstacle_strength", "obstacle_range"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"SfmParams.{name} must be strictly positive")


@dataclass(frozen=True)
class PedestrianState:
    id: int
    position: Vec2
    velocity: Vec2
    goal: Vec2
    desired_speed: float = 1.2
    body_radius: float = 0.3
    personal_radius: float = 0.45
    # Optional waypoint loop; when the current goal is reached the pedestrian
    # advances to the next entry instead of stopping.
    route: tuple[Vec2, ...] = ()
    route_index: int = 0


def _separation_direction(id_a: int, id_b: int) -> Vec2:
    # Deterministic stand-in for the undefined unit vector between coincident
    # centers; any stable id-derived angle works.
    angle = ((id_a * 2654435761 + id_b * 40503) % 6283) / 1000.0
    return Vec2(math.cos(angle), math.sin(angle))


def _agent_repulsion(
    self_id: int,
    self_pos: Vec2,
    self_radius: float,
    other_id: int,
    other_pos: Vec2,
    other_radius: float,
    params: SfmParams,
) -> Vec2:
    offset = self_pos - other_pos
    d = offset.norm()
    if d < COINCIDENT_EPS:
        n = _separation_direction(self_id, other_id)
        d = 0.0
    else:
        n = offset * (1.0 / d)
    magnitude = params.social_strength * math.exp((self_radius + other_radius - d) / params.social_range)
    return n * magnitude


def sfm_force(
    self: PedestrianState,
    others: list[PedestrianState],
    robot: RobotState | None,
    walls: list[Segment2],
    params: SfmParams,
) -> Vec2:
    """Net force on one pedestrian from goal attraction, agent repulsion and
    wall repulsion. The robot is treated as one more agent with its radius."""
    to_goal = self.goal - self.position
    if to_goal.norm() > GOAL_REACHED_DISTANCE:
        desired = to_goal.normalized() * self.desired_speed
    else:
        desired = Vec2(0.0, 0.0)
    force = (desired - self.velocity) * (1.0 / params.relaxation_time)

    for other in others:
        if other.id == self.id:
            continue
        force = force + _agent_repulsion(
            self.id, self.position, self.body_radius,
            other.id, other.position, other.body_radius, params,
        )
    if robot is not None:
        force = force + _agent_repulsion(
            self.id, self.position, self.body_radius,
            ROBOT_AGENT_ID, robot.position, robot.radius, params,
        )

    for wall in walls:
        closest = closest_point_on_segment(self.position, wall)
        offset = self.position - closest
        d = offset.norm()
        if d < COINCIDENT_EPS:
            continue  # pedestrian center exactly on the wall line: no defined normal
        magnitude = params.obstacle_strength * math.exp((self.body_radius - d) / params.obstacle_range)
        force = force + offset * (magnitude / d)
    return force


def _advance_route(ped: PedestrianState) -> PedestrianState:
    if not ped.route:
        return ped
    if (ped.goal - ped.position).norm() > GOAL_REACHED_DISTANCE:
        return ped
    nxt = (ped.route_index + 1) % len(ped.route)
    return replace(ped, goal=ped.route[nxt], route_index=nxt)


def step_pedestrians(
    peds: list[PedestrianState],
    robot: RobotState | None,
    walls: list[Segment2],
    params: SfmParams,
    dt: float,
) -> list[PedestrianState]:
    """Semi-implicit update of every pedestrian from a snapshot of the world.

    Forces are computed against the pre-step state, velocities are capped at
    1.3x desired speed, and route waypoints advance on arrival. Pure
    function: returns a new list.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    forces = [sfm_force(p, peds, robot, walls, params) for p in peds]
    out = []
    for ped, force in zip(peds, forces):
        velocity = ped.velocity + force * dt
        cap = SPEED_CAP_FACTOR * ped.desired_speed
        speed = velocity.norm()
        if speed > cap:
            velocity = velocity * (cap / speed)
        position = ped.position + velocity * dt
        out.append(_advance_route(replace(ped, position=position, velocity=velocity)))
    return out

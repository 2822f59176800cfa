"""Seeded scenario construction: hall layouts, pedestrian configurations and
the full trial configuration record.

The seed is the only entropy source anywhere in the system; the generator is
PCG64 so identical configs rebuild identical worlds bit for bit on any
platform.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .assistance import AssistParams
from .geometry import Pose2, Segment2, Vec2, disc_segment_distance, wrap_angle
from .pedestrians import PedestrianState, SfmParams
from .robot import MotionLimits, RobotState, Twist
from .rvo import RvoParams

HALL_WIDTH = 15.0
HALL_HEIGHT = 10.0

MAX_SPAWN_ATTEMPTS = 10_000
WALL_CLEARANCE = 1.0
ROBOT_CLEARANCE = 1.5
PED_SPACING = 0.6
PATH_CLEARANCE = 0.45  # reject straight spawn-goal lines closer than this to a wall


class ConfigurationError(ValueError):
    """Raised for configs that cannot produce a valid world."""


class PedConfig(enum.Enum):
    APPROACH = "approach"
    CROSSING = "crossing"
    RANDOM = "random"


def _rect(x0: float, y0: float, x1: float, y1: float) -> list[Segment2]:
    c = [Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)]
    return [Segment2(c[i], c[(i + 1) % 4]) for i in range(4)]


def hall_walls(layout: str) -> tuple[Segment2, ...]:
    """Boundary plus table rectangles.

    Both layouts keep the center corridor (y = 5) drivable and leave the
    middle of the hall free of furniture so crossing traffic has room.
    """
    walls = _rect(0.0, 0.0, HALL_WIDTH, HALL_HEIGHT)
    if layout == "hall_a":
        walls += _rect(2.0, 3.4, 4.5, 4.2)
        walls += _rect(10.5, 5.8, 13.0, 6.6)
    elif layout == "hall_b":
        walls += _rect(2.5, 5.8, 4.5, 6.6)
        walls += _rect(2.5, 3.4, 4.5, 4.2)
        walls += _rect(10.5, 3.4, 12.5, 4.2)
    else:
        raise ConfigurationError(f"unknown layout {layout!r} (expected hall_a or hall_b)")
    return tuple(walls)


@dataclass(frozen=True)
class ScenarioConfig:
    layout: str = "hall_a"
    walls: tuple[Segment2, ...] = ()  # empty = derive from layout
    robot_start: Pose2 = field(default_factory=lambda: Pose2(Vec2(1.5, 5.0), 0.0))
    goal: Vec2 = field(default_factory=lambda: Vec2(13.5, 5.0))
    ped_config: PedConfig = PedConfig.CROSSING
    ped_count: int = 6
    seed: int = 0
    dt: float = 0.05
    max_duration: float = 120.0
    sfm: SfmParams = field(default_factory=SfmParams)
    limits: MotionLimits = field(default_factory=MotionLimits)
    rvo: RvoParams = field(default_factory=RvoParams)
    assist: AssistParams = field(default_factory=AssistParams)
    robot_radius: float = 0.28
    ped_body_radius: float = 0.3
    ped_personal_radius: float = 0.45
    ped_desired_speed: float = 1.2
    goal_threshold: float = 0.5
    deadzone: float = 0.0
    surface_clearance: bool = True

    def __post_init__(self):
        if not 0.0 < self.dt <= 0.1:
            raise ConfigurationError(f"dt must be in (0, 0.1], got {self.dt}")
        if self.ped_count < 0:
            raise ConfigurationError("ped_count must be non-negative")
        if self.max_duration <= 0.0:
            raise ConfigurationError("max_duration must be positive")

    def resolved_walls(self) -> tuple[Segment2, ...]:
        return self.walls if self.walls else hall_walls(self.layout)


@dataclass
class WorldState:
    robot: RobotState
    pedestrians: list[PedestrianState]
    walls: tuple[Segment2, ...]
    goal: Vec2
    t: float = 0.0


def _min_wall_distance(p: Vec2, walls: tuple[Segment2, ...]) -> float:
    return min(disc_segment_distance(p, w) for w in walls)


def _path_clear(a: Vec2, b: Vec2, walls: tuple[Segment2, ...], clearance: float) -> bool:
    """Straight-line walkability probe: no point of a-b comes within
    `clearance` of an interior wall. The hall boundary is exempt (paths may
    start near it)."""
    boundary = 4  # hall_walls puts the outer rectangle first
    interior = walls[boundary:]
    if not interior:
        return True
    length = a.distance_to(b)
    steps = max(2, math.ceil(length / 0.25))
    for k in range(steps + 1):
        p = a + (b - a) * (k / steps)
        if any(disc_segment_distance(p, w) < clearance for w in interior):
            return False
    return True


def _sample_point(
    rng: np.random.Generator,
    walls: tuple[Segment2, ...],
    robot_start: Vec2,
    taken: list[Vec2],
    x_range: tuple[float, float],
    y_range: tuple[float, float],
    accept=None,
) -> Vec2:
    for _ in range(MAX_SPAWN_ATTEMPTS):
        p = Vec2(rng.uniform(*x_range), rng.uniform(*y_range))
        if _min_wall_distance(p, walls) < WALL_CLEARANCE:
            continue
        if p.distance_to(robot_start) < ROBOT_CLEARANCE:
            continue
        if any(p.distance_to(q) < PED_SPACING for q in taken):
            continue
        if accept is not None and not accept(p):
            continue
        return p
    raise ConfigurationError(
        f"could not place a pedestrian after {MAX_SPAWN_ATTEMPTS} attempts (hall too crowded)"
    )


def _spawn_approach(config: ScenarioConfig, rng, walls) -> list[PedestrianState]:
    """Counter-flow: pedestrians start ahead of the robot and walk to goals
    behind its start, then stop."""
    start = config.robot_start.position
    peds = []
    spawned: list[Vec2] = []
    for i in range(config.ped_count):
        pos = _sample_point(rng, walls, start, spawned, (7.0, 13.5), (1.5, 8.5))
        goal = _sample_point(
            rng, walls, start, [],
            (1.0, 1.8), (1.5, 8.5),
            accept=lambda g, pos=pos: _path_clear(pos, g, walls, PATH_CLEARANCE),
        )
        spawned.append(pos)
        peds.append(_make_ped(config, i, pos, goal))
    return peds


def _spawn_crossing(config: ScenarioConfig, rng, walls) -> list[PedestrianState]:
    """Traffic perpendicular to the start-goal line: each pedestrian owns a
    near-vertical lane and ping-pongs between the two sides of the hall, so
    the crossing flow persists for the whole trial. Spawns are staggered
    along the lanes so arrivals at the robot's corridor spread out in time."""
    start = config.robot_start.position
    y_lo, y_hi = 1.2, 8.8
    corridor_y = (start.y + config.goal.y) / 2

    # Candidate lane abscissae: x positions whose full vertical strip is
    # walkable (clear of tables). One pedestrian per lane, lanes separated
    # so crossing streams stay distinct.
    candidates = [
        x / 4.0
        for x in range(12, 4 * 12 + 1)
        if _path_clear(Vec2(x / 4.0, y_lo), Vec2(x / 4.0, y_hi), walls, PATH_CLEARANCE)
    ]
    spacing = 1.4
    lanes: list[float] = []
    for _ in range(8):
        lanes = []
        for x in rng.permutation(candidates):
            if all(abs(x - chosen) >= spacing for chosen in lanes):
                lanes.append(float(x))
            if len(lanes) == config.ped_count:
                break
        if len(lanes) == config.ped_count:
            break
        spacing *= 0.75
    else:
        raise ConfigurationError("cannot fit distinct crossing lanes (hall too crowded)")

    peds = []
    spawned: list[Vec2] = []
    for i, lane_x in enumerate(lanes):
        pos = _sample_point(
            rng, walls, start, spawned,
            (lane_x - 0.1, lane_x + 0.1), (y_lo, y_hi),
            # Start outside the robot's corridor band (every lane still
            # crosses it during the trial).
            accept=lambda p: abs(p.y - corridor_y) >= 1.5,
        )
        spawned.append(pos)
        # First goal is the farther lane end, keeping the initial goal vector
        # close to perpendicular regardless of where along the lane the
        # pedestrian starts.
        goal_y = y_lo if pos.y > (y_lo + y_hi) / 2 else y_hi
        for _ in range(MAX_SPAWN_ATTEMPTS):
            goal = Vec2(pos.x + rng.uniform(-0.6, 0.6), goal_y)
            if _min_wall_distance(goal, walls) >= WALL_CLEARANCE and _path_clear(pos, goal, walls, PATH_CLEARANCE):
                break
        else:
            raise ConfigurationError("could not place a crossing goal (hall too crowded)")
        far = Vec2(goal.x, y_hi if goal_y == y_lo else y_lo)
        peds.append(_make_ped(config, i, pos, goal, route=(goal, far)))
    return peds


def _spawn_random(config: ScenarioConfig, rng, walls) -> list[PedestrianState]:
    start = config.robot_start.position
    bounds_x = (0.0, HALL_WIDTH)
    bounds_y = (0.0, HALL_HEIGHT)
    peds = []
    spawned: list[Vec2] = []
    for i in range(config.ped_count):
        pos = _sample_point(rng, walls, start, spawned, bounds_x, bounds_y)
        spawned.append(pos)
        for _ in range(MAX_SPAWN_ATTEMPTS):
            goal = Vec2(rng.uniform(*bounds_x), rng.uniform(*bounds_y))
            if (
                _min_wall_distance(goal, walls) >= WALL_CLEARANCE
                and goal.distance_to(start) >= ROBOT_CLEARANCE
                and goal.distance_to(pos) >= 2.0
            ):
                break
        else:
            raise ConfigurationError("could not place a pedestrian goal (hall too crowded)")
        peds.append(_make_ped(config, i, pos, goal, route=(goal, pos)))
    return peds


def _walking(ped: PedestrianState) -> PedestrianState:
    to_goal = ped.goal - ped.position
    if to_goal.norm() < 1e-9:
        return ped
    return replace(ped, velocity=to_goal.normalized() * ped.desired_speed)


def _make_ped(
    config: ScenarioConfig,
    idx: int,
    pos: Vec2,
    goal: Vec2,
    route: tuple[Vec2, ...] = (),
) -> PedestrianState:
    return _walking(
        PedestrianState(
            id=idx,
            position=pos,
            velocity=Vec2(0.0, 0.0),
            goal=goal,
            desired_speed=config.ped_desired_speed,
            body_radius=config.ped_body_radius,
            personal_radius=config.ped_personal_radius,
            route=route,
        )
    )


_SPAWNERS = {
    PedConfig.APPROACH: _spawn_approach,
    PedConfig.CROSSING: _spawn_crossing,
    PedConfig.RANDOM: _spawn_random,
}


def build_scenario(config: ScenarioConfig) -> WorldState:
    """Construct the initial world for a config. Identical configs produce
    bit-identical worlds."""
    walls = config.resolved_walls()
    start = config.robot_start
    if _min_wall_distance(start.position, walls) <= config.robot_radius:
        raise ConfigurationError("robot start collides with a wall")
    if _min_wall_distance(config.goal, walls) <= config.robot_radius:
        raise ConfigurationError("goal is inside or too close to a wall")
    xs = [v for w in walls for v in (w.a.x, w.b.x)]
    ys = [v for w in walls for v in (w.a.y, w.b.y)]
    if not (min(xs) < config.goal.x < max(xs) and min(ys) < config.goal.y < max(ys)):
        raise ConfigurationError("goal lies outside the hall bounds")

    rng = np.random.Generator(np.random.PCG64(config.seed))
    peds = _SPAWNERS[config.ped_config](config, rng, walls) if config.ped_count else []
    robot = RobotState(pose=start, twist=Twist(0.0, 0.0), radius=config.robot_radius)
    return WorldState(robot=robot, pedestrians=peds, walls=walls, goal=config.goal)


def max_goal_velocity(position: Vec2, goal: Vec2, v_max: float) -> Vec2:
    """Velocity of magnitude v_max pointing at the goal (zero at the goal)."""
    to_goal = goal - position
    dist = to_goal.norm()
    if dist < 1e-9:
        return Vec2(0.0, 0.0)
    return to_goal * (v_max / dist)


def heading_error(pose: Pose2, target: Vec2) -> float:
    """Signed angle from the current heading to the bearing of `target`."""
    to_target = target - pose.position
    if to_target.norm() < 1e-9:
        return 0.0
    return wrap_angle(math.atan2(to_target.y, to_target.x) - pose.heading)

"""Objective measures computed from a per-tick trial log.

Intrusions are counted as events: one maximal contiguous run of ticks with
clearance below a zone threshold, per pedestrian per zone. The intimate zone
is a subset of the personal band, so a deep dip increments both counters.
Event counting is deliberately tick-rate independent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .assistance import Condition
from .geometry import Vec2
from .pedestrians import PedestrianState
from .robot import RobotState, StickInput

INTIMATE_RADIUS = 0.45
PERSONAL_RADIUS = 1.2


@dataclass(frozen=True)
class TickRecord:
    t: float
    robot: RobotState
    peds: tuple[PedestrianState, ...]
    stick: StickInput
    v_pref_planar: Vec2
    v_opt_planar: Vec2 | None  # None in manual control
    condition: Condition
    infeasible: bool


@dataclass(frozen=True)
class TrialMetrics:
    intimate_intrusions: int
    personal_intrusions: int
    path_length: float
    trial_time: float
    mean_disagreement: float | None  # None in manual control


def clearance(robot: RobotState, ped: PedestrianState, surface: bool = True) -> float:
    """Robot-to-pedestrian clearance; surface-to-surface by default, plain
    center distance behind the flag."""
    d = robot.position.distance_to(ped.position)
    if surface:
        d -= robot.radius + ped.body_radius
    return d


def count_intrusion_events(trace: list[float], threshold: float) -> int:
    """Number of maximal runs of consecutive values strictly below the
    threshold."""
    events = 0
    inside = False
    for value in trace:
        if value < threshold:
            if not inside:
                events += 1
            inside = True
        else:
            inside = False
    return events


def count_intrusions(
    log: list[TickRecord],
    intimate_radius: float = INTIMATE_RADIUS,
    personal_radius: float = PERSONAL_RADIUS,
    surface: bool = True,
) -> tuple[int, int]:
    """(intimate, personal) intrusion event counts summed over pedestrians."""
    if not log:
        raise ValueError("log must be non-empty")
    ped_ids = [p.id for p in log[0].peds]
    intimate = personal = 0
    for idx, _ in enumerate(ped_ids):
        trace = [clearance(rec.robot, rec.peds[idx], surface) for rec in log]
        intimate += count_intrusion_events(trace, intimate_radius)
        personal += count_intrusion_events(trace, personal_radius)
    return intimate, personal


def path_length(log: list[TickRecord]) -> float:
    if not log:
        raise ValueError("log must be non-empty")
    total = 0.0
    for prev, cur in zip(log, log[1:]):
        total += prev.robot.position.distance_to(cur.robot.position)
    return total


def trial_time(log: list[TickRecord]) -> float:
    if not log:
        raise ValueError("log must be non-empty")
    return log[-1].t - log[0].t


def mean_disagreement(log: list[TickRecord]) -> float | None:
    """Mean norm of operator-minus-optimal planar velocity; None when the
    log comes from manual control (no optimal velocity exists)."""
    if not log:
        raise ValueError("log must be non-empty")
    if any(rec.v_opt_planar is None for rec in log):
        return None
    total = sum((rec.v_pref_planar - rec.v_opt_planar).norm() for rec in log)
    return total / len(log)


def compute_metrics(log: list[TickRecord], surface: bool = True) -> TrialMetrics:
    intimate, personal = count_intrusions(log, surface=surface)
    return TrialMetrics(
        intimate_intrusions=intimate,
        personal_intrusions=personal,
        path_length=path_length(log),
        trial_time=trial_time(log),
        mean_disagreement=mean_disagreement(log),
    )


class MetricsAccumulator:
    """Incremental metrics over a growing log, for per-tick streaming.

    After feeding every record the snapshot equals compute_metrics on the
    full log.
    """

    def __init__(self, surface: bool = True):
        self.surface = surface
        self._first_t: float | None = None
        self._last_t = 0.0
        self._last_pos: Vec2 | None = None
        self._path = 0.0
        self._disagreement_sum = 0.0
        self._ticks = 0
        self._any_mc = False
        self._inside_intimate: dict[int, bool] = {}
        self._inside_personal: dict[int, bool] = {}
        self._intimate = 0
        self._personal = 0

    def update(self, rec: TickRecord) -> TrialMetrics:
        if self._first_t is None:
            self._first_t = rec.t
        self._last_t = rec.t
        if self._last_pos is not None:
            self._path += self._last_pos.distance_to(rec.robot.position)
        self._last_pos = rec.robot.position
        self._ticks += 1
        if rec.v_opt_planar is None:
            self._any_mc = True
        else:
            self._disagreement_sum += (rec.v_pref_planar - rec.v_opt_planar).norm()
        for ped in rec.peds:
            c = clearance(rec.robot, ped, self.surface)
            for threshold, inside, attr in (
                (INTIMATE_RADIUS, self._inside_intimate, "_intimate"),
                (PERSONAL_RADIUS, self._inside_personal, "_personal"),
            ):
                was = inside.get(ped.id, False)
                now = c < threshold
                if now and not was:
                    setattr(self, attr, getattr(self, attr) + 1)
                inside[ped.id] = now
        return self.snapshot()

    def snapshot(self) -> TrialMetrics:
        disagreement = None
        if not self._any_mc and self._ticks:
            disagreement = self._disagreement_sum / self._ticks
        return TrialMetrics(
            intimate_intrusions=self._intimate,
            personal_intrusions=self._personal,
            path_length=self._path,
            trial_time=self._last_t - (self._first_t or 0.0),
            mean_disagreement=disagreement,
        )

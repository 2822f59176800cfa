"""Scripted and live operator policies.

A policy turns the observable world into a stick input once per tick. The
compliant policy additionally declares `echoes_assistance`, telling the trial
engine to replace its command with the freshly computed optimal velocity
(the idealized fully-cooperative operator the headless tests rely on).
"""

from __future__ import annotations

import math
import queue
import threading

import numpy as np

from .assistance import AssistanceOutput
from .robot import StickInput, Twist, stick_for_twist
from .geometry import wrap_angle
from .scenarios import ScenarioConfig, WorldState, heading_error


class TrialAborted(RuntimeError):
    """Raised by a live policy when the operator session goes away."""


class OperatorPolicy:
    name = "base"
    echoes_assistance = False

    def reset(self, config: ScenarioConfig, world: WorldState) -> None:
        pass

    def act(self, world: WorldState, prev_assist: AssistanceOutput | None) -> StickInput:
        raise NotImplementedError


class GoalSeekPolicy(OperatorPolicy):
    """Proportional heading controller toward the goal.

    Slows for large heading errors, on final approach, and near pedestrians
    (a stand-in human does not barrel through crossing traffic at full
    speed). In an empty hall the pedestrian moderation is inert.
    """

    name = "goal_seek"

    def __init__(
        self,
        heading_gain: float = 2.5,
        slow_radius: float = 1.0,
        ped_slow_clearance: float = 2.5,
        ped_stop_clearance: float = 0.6,
        min_speed_factor: float = 0.25,
    ):
        self.heading_gain = heading_gain
        self.slow_radius = slow_radius
        self.ped_slow_clearance = ped_slow_clearance
        self.ped_stop_clearance = ped_stop_clearance
        self.min_speed_factor = min_speed_factor
        self._config: ScenarioConfig | None = None

    def reset(self, config: ScenarioConfig, world: WorldState) -> None:
        self._config = config

    def _crowd_factor(self, world: WorldState) -> float:
        if not world.pedestrians:
            return 1.0
        robot = world.robot
        nearest = min(
            robot.position.distance_to(p.position) - robot.radius - p.body_radius
            for p in world.pedestrians
        )
        span = self.ped_slow_clearance - self.ped_stop_clearance
        factor = (nearest - self.ped_stop_clearance) / span
        return min(1.0, max(self.min_speed_factor, factor))

    def desired_twist(self, world: WorldState) -> Twist:
        limits = self._config.limits
        err = heading_error(world.robot.pose, world.goal)
        omega = min(limits.omega_max, max(-limits.omega_max, self.heading_gain * err))
        dist = world.robot.position.distance_to(world.goal)
        v = (
            limits.v_max
            * max(0.0, math.cos(err))
            * min(1.0, dist / self.slow_radius)
            * self._crowd_factor(world)
        )
        return Twist(v, omega)

    def act(self, world: WorldState, prev_assist: AssistanceOutput | None) -> StickInput:
        return stick_for_twist(self.desired_twist(world), self._config.limits, self._config.deadzone)


class NoisyGoalSeekPolicy(GoalSeekPolicy):
    """Goal seeking plus seeded bounded axis noise, emulating an imprecise
    human. Noise derives from the trial seed only."""

    name = "noisy_goal_seek"

    def __init__(self, noise: float = 0.2, **kwargs):
        super().__init__(**kwargs)
        self.noise = noise
        self._rng: np.random.Generator | None = None

    def reset(self, config: ScenarioConfig, world: WorldState) -> None:
        super().reset(config, world)
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([config.seed, 0x5EED])))

    def act(self, world: WorldState, prev_assist: AssistanceOutput | None) -> StickInput:
        stick = super().act(world, prev_assist)
        dx, dy = self._rng.uniform(-self.noise, self.noise, size=2)
        return StickInput(stick.axis_x + dx, stick.axis_y + dy)


class CompliantPolicy(GoalSeekPolicy):
    """Fully cooperative operator: steers for the goal like GoalSeekPolicy,
    but echoes the assistant's optimal command whenever one exists. The
    engine substitutes the fresh optimum for the command each tick, so the
    recorded operator and optimal velocities match exactly; the goal-seeking
    command is what enters the optimizer as the operator's nominal intent.
    Without assistance (manual control) this degrades to plain goal seeking.

    Unlike the manual policies it does not slow near pedestrians: it trusts
    the assistant with pacing, keeping the nominal intent a clean goal
    course.
    """

    name = "compliant"
    echoes_assistance = True

    def _crowd_factor(self, world: WorldState) -> float:
        return 1.0


class EchoPolicy(OperatorPolicy):
    """Pure one-tick echo: commands exactly the previous tick's optimal
    twist, with no nominal of its own and no same-tick substitution. This is
    what a wire client that echoes the assistance stream amounts to, so
    batch trials under this policy are the lockstep-gateway reference."""

    name = "echo"

    def __init__(self):
        self._config: ScenarioConfig | None = None

    def reset(self, config: ScenarioConfig, world: WorldState) -> None:
        self._config = config

    def act(self, world: WorldState, prev_assist: AssistanceOutput | None) -> StickInput:
        if prev_assist is None or prev_assist.v_opt_twist is None:
            return StickInput(0.0, 0.0)
        return stick_for_twist(prev_assist.v_opt_twist, self._config.limits, self._config.deadzone)


class ReplayPolicy(OperatorPolicy):
    """Replays a recorded stick sequence tick for tick; holds the last input
    if the trial outlives the recording."""

    name = "replay"

    def __init__(self, sticks: list[StickInput]):
        if not sticks:
            raise ValueError("replay needs at least one recorded input")
        self.sticks = sticks
        self._i = 0

    def reset(self, config: ScenarioConfig, world: WorldState) -> None:
        self._i = 0

    def act(self, world: WorldState, prev_assist: AssistanceOutput | None) -> StickInput:
        stick = self.sticks[min(self._i, len(self.sticks) - 1)]
        self._i += 1
        return stick


class LivePolicy(OperatorPolicy):
    """Feeds operator input from a thread-safe mailbox written by a network
    session.

    Realtime mode paces the trial loop at wall-clock dt and applies the
    latest input seen at each tick boundary (latest-wins). Lockstep mode
    blocks until a fresh input arrives, which makes wire-driven trials
    deterministic for scripted clients.
    """

    name = "live"

    def __init__(self, realtime: bool = True, input_timeout: float = 30.0):
        self.realtime = realtime
        self.input_timeout = input_timeout
        self._lock = threading.Lock()
        self._latest = StickInput(0.0, 0.0)
        self._latest_seq = -1
        self._fresh: queue.Queue[StickInput] = queue.Queue()
        self._closed = threading.Event()
        self._deadline: float | None = None
        self._dt = 0.05
        self._first_act = True

    def reset(self, config: ScenarioConfig, world: WorldState) -> None:
        self._dt = config.dt
        self._deadline = None
        self._first_act = True

    def push_input(self, seq: int, stick: StickInput) -> bool:
        """Record an input; stale sequence numbers are dropped. Returns
        whether the input was accepted."""
        with self._lock:
            if seq <= self._latest_seq:
                return False
            self._latest_seq = seq
            self._latest = stick
        self._fresh.put(stick)
        return True

    def close(self) -> None:
        self._closed.set()
        self._fresh.put(StickInput(0.0, 0.0))  # unblock a lockstep wait

    def act(self, world: WorldState, prev_assist: AssistanceOutput | None) -> StickInput:
        if self._closed.is_set():
            raise TrialAborted("operator session closed")
        if self.realtime:
            self._pace(world.t)
            with self._lock:
                return self._latest
        if self._first_act:
            # The client only reacts to state updates, and the first update
            # is emitted after this tick: start from the neutral stick
            # instead of deadlocking on input that cannot arrive yet.
            self._first_act = False
            with self._lock:
                return self._latest
        try:
            self._fresh.get(timeout=self.input_timeout)
        except queue.Empty:
            raise TrialAborted("no operator input within timeout") from None
        if self._closed.is_set():
            raise TrialAborted("operator session closed")
        # Drain to the newest queued input (latest-wins within a tick).
        while True:
            try:
                self._fresh.get_nowait()
            except queue.Empty:
                break
        with self._lock:
            return self._latest

    def _pace(self, sim_time: float) -> None:
        import time

        now = time.monotonic()
        if self._deadline is None:
            self._deadline = now + self._dt
            return
        wait = self._deadline - now
        if wait > 0:
            time.sleep(wait)
            self._deadline += self._dt
        else:
            # Fell behind; resynchronize rather than bursting to catch up.
            self._deadline = now + self._dt


def make_policy(spec: str) -> OperatorPolicy:
    """Policy factory for CLI names (replay handled by the caller, which owns
    file loading)."""
    if spec == "goal_seek":
        return GoalSeekPolicy()
    if spec == "compliant":
        return CompliantPolicy()
    if spec in ("noisy", "noisy_goal_seek"):
        return NoisyGoalSeekPolicy()
    raise ValueError(f"unknown policy {spec!r}")

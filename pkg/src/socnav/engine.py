"""Fixed-timestep closed loop: operator -> assistance -> robot -> pedestrians
-> log.

One 20 Hz clock drives physics and assistance alike. The operator's mapped
command is what actuates the robot every tick, in every condition; the
assistance only ever influences the operator (for scripted runs, only the
compliant policy closes that loop).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .assistance import AssistanceOutput, Condition, guidance_visuals
from .metrics import TickRecord, TrialMetrics, compute_metrics
from .pedestrians import step_pedestrians
from .policies import OperatorPolicy
from .robot import Twist, map_input, step, stick_for_twist, twist_to_planar_velocity
from .rvo import RvoContext, RvoDecision, build_cones, filter_static, optimal_velocity, sample_controls
from .scenarios import ScenarioConfig, WorldState, build_scenario, max_goal_velocity

TickCallback = Callable[[TickRecord, AssistanceOutput], None]


@dataclass(frozen=True)
class TrialResult:
    config: ScenarioConfig
    condition: Condition
    policy_name: str
    log: list[TickRecord]
    metrics: TrialMetrics
    completed: bool
    reason: str  # "goal" | "timeout"


def _inject_operator(grid: list[Twist], operator_cmd: Twist) -> list[Twist]:
    """Equivalent to sample_controls(..., operator_cmd=...) on a pre-built
    grid: the operator's twist leads the list unless already present."""
    key = (operator_cmd.linear, operator_cmd.angular)
    rest = [s for s in grid if (s.linear, s.angular) != key]
    return [operator_cmd] + rest


def run_trial(
    config: ScenarioConfig,
    policy: OperatorPolicy,
    condition: Condition,
    on_tick: TickCallback | None = None,
) -> TrialResult:
    """Run one seeded trial to goal arrival or timeout.

    The log holds one record per tick (pre-step state plus that tick's
    commands) and a terminal record with the final state; metrics are
    computed from the log.
    """
    world = build_scenario(config)
    policy.reset(config, world)
    rvo = config.rvo
    limits = config.limits
    grid = sample_controls(limits, rvo.n_linear, rvo.n_angular, include_reverse=rvo.include_reverse)

    log: list[TickRecord] = []
    prev_assist: AssistanceOutput | None = None
    prev_show = False
    v_prev_opt = twist_to_planar_velocity(world.robot, world.robot.twist, rvo.lookahead)

    n_ticks = round(config.max_duration / config.dt)
    completed = False
    reason = "timeout"

    for k in range(n_ticks):
        world.t = k * config.dt
        stick = policy.act(world, prev_assist)
        cmd = map_input(stick, limits, config.deadzone)
        v_pref = twist_to_planar_velocity(world.robot, cmd, rvo.lookahead)

        decision: RvoDecision | None = None
        if condition.has_assistance:
            cones = build_cones(world.robot, world.pedestrians, rvo.alpha, rvo.lookahead, rvo.sensing_range)
            samples = filter_static(
                _inject_operator(grid, cmd),
                world.robot,
                list(world.walls),
                rvo.static_horizon,
                rvo.static_dt,
                rvo.static_margin,
            )
            ctx = RvoContext(
                v_pref=v_pref,
                v_prev_opt=v_prev_opt,
                v_goal=max_goal_velocity(world.robot.position, world.goal, limits.v_max),
                alpha=rvo.alpha,
                v_max=limits.v_max,
            )
            decision = optimal_velocity(samples, world.robot, cones, ctx, rvo.weights, rvo.lookahead)
            v_prev_opt = decision.planar

        assist = guidance_visuals(
            world.robot,
            decision.twist if decision else None,
            cmd,
            condition,
            limits,
            config.assist,
            prev_show=prev_show,
            infeasible=decision.infeasible if decision else False,
            v_opt_planar=decision.planar if decision else None,
            v_pref_planar=v_pref,
        )
        prev_show = assist.show_guidance

        if decision is not None and policy.echoes_assistance:
            # Fully cooperative operator: adopt the fresh optimum as the
            # command this tick, so recorded input and optimum coincide.
            cmd = decision.twist
            v_pref = decision.planar
            stick = stick_for_twist(cmd, limits, config.deadzone)

        record = TickRecord(
            t=world.t,
            robot=world.robot,
            peds=tuple(world.pedestrians),
            stick=stick,
            v_pref_planar=v_pref,
            v_opt_planar=decision.planar if decision else None,
            condition=condition,
            infeasible=decision.infeasible if decision else False,
        )
        log.append(record)
        if on_tick is not None:
            on_tick(record, assist)
        prev_assist = assist

        world.robot = step(world.robot, cmd, config.dt)
        world.pedestrians = step_pedestrians(
            world.pedestrians, world.robot, list(world.walls), config.sfm, config.dt
        )

        if world.robot.position.distance_to(world.goal) <= config.goal_threshold:
            completed = True
            reason = "goal"
            world.t = (k + 1) * config.dt
            break
    else:
        world.t = n_ticks * config.dt

    terminal = TickRecord(
        t=world.t,
        robot=world.robot,
        peds=tuple(world.pedestrians),
        stick=log[-1].stick if log else stick_for_twist(Twist(0.0, 0.0), limits),
        v_pref_planar=log[-1].v_pref_planar if log else v_prev_opt,
        v_opt_planar=log[-1].v_opt_planar if log else None,
        condition=condition,
        infeasible=log[-1].infeasible if log else False,
    )
    log.append(terminal)
    if on_tick is not None:
        on_tick(terminal, prev_assist)

    return TrialResult(
        config=config,
        condition=condition,
        policy_name=policy.name,
        log=log,
        metrics=compute_metrics(log, config.surface_clearance),
        completed=completed,
        reason=reason,
    )

"""Acceptance suite: one test per release criterion, each at its stated
tolerance and budget, printing one PASS/FAIL line. Run with `pytest
tests/test_acceptance.py -v -s` to see the lines as they complete.
"""

import math
import subprocess
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from socnav.assistance import Condition, haptic_force
from socnav.engine import run_trial
from socnav.geometry import Vec2
from socnav.metrics import clearance, count_intrusions, mean_disagreement
from socnav.pedestrians import PedestrianState
from socnav.policies import CompliantPolicy, GoalSeekPolicy
from socnav.robot import MotionLimits, RobotState, Twist, map_input, step, twist_to_planar_velocity
from socnav.rvo import (
    RvoContext,
    RvoParams,
    RvoWeights,
    build_cones,
    in_any_cone,
    optimal_velocity,
    sample_controls,
)
from socnav.scenarios import PedConfig, ScenarioConfig
from socnav.geometry import Pose2


def report(name: str, ok: bool, detail: str = ""):
    print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def robot_state(x, y, theta, v, w, radius=0.3):
    return RobotState(pose=Pose2(Vec2(x, y), theta), twist=Twist(v, w), radius=radius)


class TestConeMembershipOracle:
    """in_any_cone vs a brute-force ray march on 10^4 seeded triples."""

    def test_cone_membership_oracle(self):
        rng = np.random.default_rng(20240811)
        n_total = 10_000
        t0 = time.monotonic()
        checked = 0
        disagreements = 0
        for _ in range(n_total):
            robot = robot_state(
                rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-math.pi, math.pi),
                rng.uniform(0, 1.2), rng.uniform(-1.5, 1.5),
            )
            ped = PedestrianState(
                id=0,
                position=Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5)),
                velocity=Vec2(rng.uniform(-1.3, 1.3), rng.uniform(-1.3, 1.3)),
                goal=Vec2(0, 0),
                personal_radius=rng.uniform(0.4, 1.2),
            )
            v = Vec2(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
            cones = build_cones(robot, [ped], alpha=0.5, sensing_range=1e9)
            cone = cones[0]

            # Independent march: t in (0, t_max], inflated by step * |d|.
            d = v - cone.apex
            w = cone.anchor - cone.center
            speed = math.hypot(d.x, d.y)
            if speed <= 1e-9:
                oracle = math.hypot(w.x, w.y) <= cone.combined_radius
                margin = abs(math.hypot(w.x, w.y) - cone.combined_radius)
            else:
                step_t = 1e-3
                t_max = (math.hypot(w.x, w.y) + cone.combined_radius) / speed + 1.0
                ts = np.arange(step_t, t_max, step_t)
                px = cone.anchor.x + ts * d.x - cone.center.x
                py = cone.anchor.y + ts * d.y - cone.center.y
                dist = np.hypot(px, py)
                oracle = bool((dist <= cone.combined_radius + step_t * speed).any())
                margin = abs(float(dist.min()) - cone.combined_radius)
            if margin < 1e-6:
                continue  # boundary band excluded by the criterion
            checked += 1
            if in_any_cone(v, cones) != oracle:
                disagreements += 1
        elapsed = time.monotonic() - t0
        report(
            "cone-membership oracle (10^4 triples)",
            disagreements == 0 and elapsed < 5.0,
            f"{checked} checked, {disagreements} disagreements, {elapsed:.2f}s",
        )


def spawn_random_world(rng):
    robot = robot_state(
        rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-math.pi, math.pi),
        rng.uniform(0, 1), rng.uniform(-1.5, 1.5),
    )
    peds = [
        PedestrianState(
            id=i,
            position=Vec2(rng.uniform(-4, 4), rng.uniform(-4, 4)),
            velocity=Vec2(rng.uniform(-1.3, 1.3), rng.uniform(-1.3, 1.3)),
            goal=Vec2(0, 0),
            personal_radius=rng.uniform(0.4, 1.0),
        )
        for i in range(int(rng.integers(1, 6)))
    ]
    return robot, peds


class TestArgminOracle:
    """optimal_velocity vs exhaustive objective re-evaluation, bitwise."""

    LIMITS = MotionLimits(1.0, 1.5)

    def _exhaustive(self, samples, robot, cones, ctx, weights):
        best = None
        for s in samples:
            planar = twist_to_planar_velocity(robot, s, 0.5)
            if in_any_cone(planar, cones):
                continue
            g = (
                weights.intent * (planar - ctx.v_pref).norm_sq()
                + weights.smoothness * (planar - ctx.v_prev_opt).norm_sq()
                + weights.goal * (planar - ctx.v_goal).norm_sq()
            )
            if best is None or g < best[1]:
                best = (s, g, planar)
        return best

    def _run(self, name, weights_of):
        rng = np.random.default_rng(777)
        t0 = time.monotonic()
        mismatches = 0
        compared = 0
        for _ in range(1_000):
            robot, peds = spawn_random_world(rng)
            cones = build_cones(robot, peds, alpha=0.5)
            cmd = Twist(rng.uniform(0, 1), rng.uniform(-1.5, 1.5))
            samples = sample_controls(self.LIMITS, 5, 7, operator_cmd=cmd)
            ctx = RvoContext(
                v_pref=twist_to_planar_velocity(robot, cmd, 0.5),
                v_prev_opt=Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                v_goal=Vec2(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)),
            )
            weights = weights_of(rng)
            decision = optimal_velocity(samples, robot, cones, ctx, weights, 0.5)
            expected = self._exhaustive(samples, robot, cones, ctx, weights)
            if expected is None:
                ok = decision.infeasible
            else:
                ok = (
                    not decision.infeasible
                    and decision.twist == expected[0]
                    and decision.objective == expected[1]
                    and decision.planar == expected[2]
                )
            compared += 1
            if not ok:
                mismatches += 1
        elapsed = time.monotonic() - t0
        report(name, mismatches == 0 and elapsed < 10.0,
               f"{compared} worlds, {mismatches} mismatches, {elapsed:.2f}s")

    def test_weighted_argmin_oracle(self):
        self._run(
            "weighted-argmin oracle (10^3 worlds, bitwise)",
            lambda rng: RvoWeights(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0.01, 2)),
        )

    def test_goal_only_reduction(self):
        self._run(
            "goal-only reduction to plain velocity obstacles (10^3 worlds, bitwise)",
            lambda rng: RvoWeights(0.0, 0.0, 1.0),
        )


class TestHapticsCriterion:
    def test_haptic_force_law(self):
        rng = np.random.default_rng(4242)
        gain = 1.2
        bad = 0
        for k in range(1_000):
            if k % 2 == 0:
                v_opt = Twist(rng.uniform(-1, 1), rng.uniform(-1.5, 1.5))
                v_pref = v_opt
            else:
                v_opt = Twist(rng.uniform(-1, 1), rng.uniform(-1.5, 1.5))
                v_pref = Twist(
                    v_opt.linear + rng.uniform(1e-6, 0.3) * rng.choice((-1, 1)),
                    v_opt.angular + rng.uniform(1e-6, 0.3) * rng.choice((-1, 1)),
                )
            f = haptic_force(v_opt, v_pref, gain)
            same = (
                abs(v_opt.linear - v_pref.linear) < 1e-12
                and abs(v_opt.angular - v_pref.angular) < 1e-12
            )
            if same != (f == Vec2(0.0, 0.0)):
                bad += 1
            # linearity pre-clamp: F(2 delta) == 2 F(delta); zero base keeps
            # the command difference exactly representable
            d_lin, d_ang = rng.uniform(-0.2, 0.2, 2)
            base = Twist(0.0, 0.0)
            f1 = haptic_force(Twist(d_lin, d_ang), base, gain)
            f2 = haptic_force(Twist(2 * d_lin, 2 * d_ang), base, gain)
            if f2.x != 2 * f1.x or f2.y != 2 * f1.y:
                bad += 1
        report("haptic force law (zero iff agreement; pre-clamp linearity)", bad == 0,
               f"{bad} violations in 10^3 pairs")


SAFETY_CONFIG = dict(
    ped_config=PedConfig.CROSSING,
    ped_count=6,
    ped_personal_radius=0.75,  # cone radius = body radii + 0.45 m
    limits=MotionLimits(v_max=1.5, omega_max=1.5),
    rvo=replace(RvoParams(), weights=RvoWeights(1.0, 0.0, 0.0), lookahead=0.25),
)


class TestClosedLoopSafety:
    def test_fifty_seed_crossing(self):
        t0 = time.monotonic()
        failures = []
        uncovered = 0
        for seed in range(50):
            config = ScenarioConfig(seed=seed, **SAFETY_CONFIG)
            result = run_trial(config, CompliantPolicy(), Condition.H)
            if result.metrics.intimate_intrusions > 0:
                failures.append(seed)
                for rec in result.log:
                    worst = min(clearance(rec.robot, p) for p in rec.peds)
                    if worst < 0.45 and not rec.infeasible:
                        uncovered += 1
        elapsed = time.monotonic() - t0
        ok = len(failures) <= 2 and uncovered == 0 and elapsed < 120.0
        report(
            "closed-loop safety (crossing, 6 peds, 50 seeds)",
            ok,
            f"{50 - len(failures)}/50 intrusion-free, failures={failures}, "
            f"uncovered intrusion ticks={uncovered}, {elapsed:.1f}s",
        )


class TestIntentPreservation:
    def test_empty_hall_passthrough(self):
        config = ScenarioConfig(
            ped_count=0, seed=1,
            rvo=replace(RvoParams(), weights=RvoWeights(1.0, 0.0, 0.0)),
        )
        pairs = []

        def on_tick(record, assist):
            pairs.append((record, assist))

        result = run_trial(config, GoalSeekPolicy(), Condition.H, on_tick=on_tick)
        mismatched = 0
        compared = 0
        for record, assist in pairs[:-1]:  # terminal record repeats the last command
            expected = map_input(record.stick, config.limits, config.deadzone)
            compared += 1
            if assist.v_opt_twist != expected:
                mismatched += 1
        ok = result.completed and compared > 0 and mismatched == 0
        report("intent preservation (empty hall, intent-only weights)", ok,
               f"{compared} ticks, {mismatched} mismatches")


class TestDeterminismCriterion:
    def test_byte_identical_across_processes(self, tmp_path):
        args = [
            "run", "--scenario", "crossing", "--condition", "hvt",
            "--policy", "compliant", "--seed", "21", "--repeat", "1",
            "--max-duration", "40",
        ]
        outs = []
        for sub in ("first", "second"):
            out = tmp_path / sub
            proc = subprocess.run(
                [sys.executable, "-m", "socnav.cli", *args, "--out", str(out)],
                capture_output=True, text=True, timeout=300,
            )
            assert proc.returncode == 0, proc.stderr
            outs.append(next(out.glob("trial_*.jsonl")).read_bytes())
        # and a same-process repeat
        from socnav.cli import main

        out3 = tmp_path / "third"
        assert main(args + ["--out", str(out3)]) == 0
        third = next(out3.glob("trial_*.jsonl")).read_bytes()
        ok = outs[0] == outs[1] == third
        report("end-to-end determinism (two processes, byte-identical logs)", ok,
               f"{len(outs[0])} bytes")


class TestMetricsOracles:
    def test_intrusion_and_disagreement_oracles(self):
        from socnav.assistance import Condition as Cond
        from socnav.metrics import TickRecord
        from socnav.robot import StickInput

        def rec(t, c, v_pref, v_opt):
            robot = RobotState(pose=Pose2(Vec2(0, 0), 0.0), twist=Twist(0, 0), radius=0.3)
            ped = PedestrianState(id=0, position=Vec2(c + 0.6, 0.0), velocity=Vec2(0, 0),
                                  goal=Vec2(0, 0), body_radius=0.3)
            return TickRecord(t, robot, (ped,), StickInput(0, 0), Vec2(*v_pref), Vec2(*v_opt),
                              Cond.H, False)

        def scan(trace, threshold):
            events, below = 0, False
            for value in trace:
                now = value < threshold
                if now and not below:
                    events += 1
                below = now
            return events

        rng = np.random.default_rng(55)
        bad = 0
        traces = [[1.3, 1.0, 0.4, 1.0, 1.3]]
        traces += [list(rng.uniform(0.0, 2.0, size=int(rng.integers(1, 80)))) for _ in range(99)]
        for idx, trace in enumerate(traces):
            prefs = [tuple(rng.uniform(-1, 1, 2)) for _ in trace]
            opts = [tuple(rng.uniform(-1, 1, 2)) for _ in trace]
            log = [rec(0.05 * k, c, p, o) for k, (c, p, o) in enumerate(zip(trace, prefs, opts))]
            got = count_intrusions(log)
            want = (scan(trace, 0.45), scan(trace, 1.2))
            if got != want:
                bad += 1
            if idx == 0 and got != (1, 1):
                bad += 1
            direct = sum(
                math.hypot(p[0] - o[0], p[1] - o[1]) for p, o in zip(prefs, opts)
            ) / len(trace)
            if abs(mean_disagreement(log) - direct) > 1e-12:
                bad += 1
        report("metrics oracles (100 traces; spec trace -> (1,1); disagreement 1e-12)",
               bad == 0, f"{bad} failures")


class TestKinematicsCriterion:
    def test_closed_form_vs_dense_euler(self):
        rng = np.random.default_rng(31337)
        dt = 1e-5
        worst = 0.0
        for _ in range(100):
            v = rng.uniform(-1.5, 1.5)
            w = rng.uniform(-2.0, 2.0)
            duration = rng.uniform(0.1, 3.0)
            theta0 = rng.uniform(-math.pi, math.pi)
            state = robot_state(0.0, 0.0, theta0, 0.0, 0.0)
            end = step(state, Twist(v, w), duration)
            n = int(round(duration / dt))
            thetas = theta0 + w * dt * np.arange(n)
            ex = float(v * dt * np.cos(thetas).sum())
            ey = float(v * dt * np.sin(thetas).sum())
            worst = max(worst, math.hypot(end.position.x - ex, end.position.y - ey))
        quarter = step(robot_state(0, 0, 0, 0, 0), Twist(1.0, 1.0), math.pi / 2)
        exact = (
            abs(quarter.position.x - 1.0) < 1e-9
            and abs(quarter.position.y - 1.0) < 1e-9
            and abs(quarter.heading - math.pi / 2) < 1e-12
        )
        report("unicycle kinematics (100 random commands vs dense Euler; quarter circle)",
               worst < 1e-3 and exact, f"worst endpoint error {worst:.2e} m")


class TestPlausibilityAnchor:
    def test_trial_time_bracket(self):
        """Non-gating: report where scripted trial times land relative to the
        20-120 s window that brackets the reported human range."""
        times = []
        for seed in range(10):
            config = ScenarioConfig(seed=seed, ped_config=PedConfig.CROSSING, ped_count=6)
            result = run_trial(config, GoalSeekPolicy(), Condition.HV_T)
            if result.completed:
                times.append(result.metrics.trial_time)
        in_band = [t for t in times if 20.0 <= t <= 120.0]
        print(
            f"REPORT  plausibility anchor (non-gating): goal-seek crossing times "
            f"{min(times):.1f}-{max(times):.1f}s across {len(times)} completed trials; "
            f"{len(in_band)}/{len(times)} inside 20-120s"
        )
        assert times, "no trial completed"

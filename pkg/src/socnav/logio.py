"""Trial log files and run summaries.

One trial per file, line-delimited JSON: a self-describing header (schema
id, artifact version, full config), one line per tick, and an end line with
the stored metrics. Floats serialize via shortest round-trip repr, so
parse(serialize(log)) reproduces every record bit for bit and metrics can be
recomputed from the file alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .assistance import AssistParams, Condition
from .geometry import Pose2, Segment2, Vec2
from .metrics import TickRecord, TrialMetrics
from .pedestrians import PedestrianState, SfmParams
from .robot import MotionLimits, RobotState, StickInput, Twist
from .rvo import RvoParams, RvoWeights
from .scenarios import PedConfig, ScenarioConfig

SCHEMA = "socnav-trial/1"
ARTIFACT_VERSION = "0.1.0"


class LogFormatError(ValueError):
    pass


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_to_dict(config: ScenarioConfig) -> dict:
    return {
        "layout": config.layout,
        "walls": [[w.a.x, w.a.y, w.b.x, w.b.y] for w in config.walls],
        "robot_start": [config.robot_start.position.x, config.robot_start.position.y, config.robot_start.heading],
        "goal": [config.goal.x, config.goal.y],
        "ped_config": config.ped_config.value,
        "ped_count": config.ped_count,
        "seed": config.seed,
        "dt": config.dt,
        "max_duration": config.max_duration,
        "sfm": {
            "relaxation_time": config.sfm.relaxation_time,
            "social_strength": config.sfm.social_strength,
            "social_range": config.sfm.social_range,
            "obstacle_strength": config.sfm.obstacle_strength,
            "obstacle_range": config.sfm.obstacle_range,
        },
        "limits": {"v_max": config.limits.v_max, "omega_max": config.limits.omega_max},
        "rvo": {
            "weights": [config.rvo.weights.intent, config.rvo.weights.smoothness, config.rvo.weights.goal],
            "alpha": config.rvo.alpha,
            "n_linear": config.rvo.n_linear,
            "n_angular": config.rvo.n_angular,
            "lookahead": config.rvo.lookahead,
            "sensing_range": config.rvo.sensing_range,
            "static_margin": config.rvo.static_margin,
            "static_horizon": config.rvo.static_horizon,
            "static_dt": config.rvo.static_dt,
            "include_reverse": config.rvo.include_reverse,
        },
        "assist": {
            "haptic_gain": config.assist.haptic_gain,
            "display_threshold": config.assist.display_threshold,
            "hysteresis_band": config.assist.hysteresis_band,
            "bar_gain": config.assist.bar_gain,
            "guidance_horizon": config.assist.guidance_horizon,
            "guidance_dt": config.assist.guidance_dt,
        },
        "robot_radius": config.robot_radius,
        "ped_body_radius": config.ped_body_radius,
        "ped_personal_radius": config.ped_personal_radius,
        "ped_desired_speed": config.ped_desired_speed,
        "goal_threshold": config.goal_threshold,
        "deadzone": config.deadzone,
        "surface_clearance": config.surface_clearance,
    }


def config_from_dict(d: dict) -> ScenarioConfig:
    return ScenarioConfig(
        layout=d["layout"],
        walls=tuple(Segment2(Vec2(x0, y0), Vec2(x1, y1)) for x0, y0, x1, y1 in d["walls"]),
        robot_start=Pose2(Vec2(d["robot_start"][0], d["robot_start"][1]), d["robot_start"][2]),
        goal=Vec2(*d["goal"]),
        ped_config=PedConfig(d["ped_config"]),
        ped_count=d["ped_count"],
        seed=d["seed"],
        dt=d["dt"],
        max_duration=d["max_duration"],
        sfm=SfmParams(**d["sfm"]),
        limits=MotionLimits(**d["limits"]),
        rvo=RvoParams(
            weights=RvoWeights(*d["rvo"]["weights"]),
            **{k: v for k, v in d["rvo"].items() if k != "weights"},
        ),
        assist=AssistParams(**d["assist"]),
        robot_radius=d["robot_radius"],
        ped_body_radius=d["ped_body_radius"],
        ped_personal_radius=d["ped_personal_radius"],
        ped_desired_speed=d["ped_desired_speed"],
        goal_threshold=d["goal_threshold"],
        deadzone=d["deadzone"],
        surface_clearance=d["surface_clearance"],
    )


def _robot_to_dict(r: RobotState) -> dict:
    return {
        "x": r.position.x,
        "y": r.position.y,
        "theta": r.heading,
        "v": r.twist.linear,
        "w": r.twist.angular,
        "radius": r.radius,
    }


def _robot_from_dict(d: dict) -> RobotState:
    return RobotState(
        pose=Pose2(Vec2(d["x"], d["y"]), d["theta"]),
        twist=Twist(d["v"], d["w"]),
        radius=d["radius"],
    )


def _ped_to_dict(p: PedestrianState) -> dict:
    return {
        "id": p.id,
        "x": p.position.x,
        "y": p.position.y,
        "vx": p.velocity.x,
        "vy": p.velocity.y,
        "gx": p.goal.x,
        "gy": p.goal.y,
        "speed": p.desired_speed,
        "body_r": p.body_radius,
        "personal_r": p.personal_radius,
        "route": [[v.x, v.y] for v in p.route],
        "route_i": p.route_index,
    }


def _ped_from_dict(d: dict) -> PedestrianState:
    return PedestrianState(
        id=d["id"],
        position=Vec2(d["x"], d["y"]),
        velocity=Vec2(d["vx"], d["vy"]),
        goal=Vec2(d["gx"], d["gy"]),
        desired_speed=d["speed"],
        body_radius=d["body_r"],
        personal_radius=d["personal_r"],
        route=tuple(Vec2(x, y) for x, y in d["route"]),
        route_index=d["route_i"],
    )


def metrics_to_dict(m: TrialMetrics) -> dict:
    return {
        "intimate_intrusions": m.intimate_intrusions,
        "personal_intrusions": m.personal_intrusions,
        "path_length": m.path_length,
        "trial_time": m.trial_time,
        "mean_disagreement": m.mean_disagreement,
    }


def metrics_from_dict(d: dict) -> TrialMetrics:
    return TrialMetrics(
        intimate_intrusions=d["intimate_intrusions"],
        personal_intrusions=d["personal_intrusions"],
        path_length=d["path_length"],
        trial_time=d["trial_time"],
        mean_disagreement=d["mean_disagreement"],
    )


def tick_to_dict(rec: TickRecord) -> dict:
    return {
        "t": rec.t,
        "robot": _robot_to_dict(rec.robot),
        "peds": [_ped_to_dict(p) for p in rec.peds],
        "stick": [rec.stick.axis_x, rec.stick.axis_y],
        "v_pref": [rec.v_pref_planar.x, rec.v_pref_planar.y],
        "v_opt": None if rec.v_opt_planar is None else [rec.v_opt_planar.x, rec.v_opt_planar.y],
        "infeasible": rec.infeasible,
    }


def tick_from_dict(d: dict, condition: Condition) -> TickRecord:
    return TickRecord(
        t=d["t"],
        robot=_robot_from_dict(d["robot"]),
        peds=tuple(_ped_from_dict(p) for p in d["peds"]),
        stick=StickInput(d["stick"][0], d["stick"][1]),
        v_pref_planar=Vec2(*d["v_pref"]),
        v_opt_planar=None if d["v_opt"] is None else Vec2(*d["v_opt"]),
        condition=condition,
        infeasible=d["infeasible"],
    )


@dataclass(frozen=True)
class ParsedTrialLog:
    config: ScenarioConfig
    condition: Condition
    policy: str
    records: list[TickRecord]
    metrics: TrialMetrics
    completed: bool
    reason: str


def serialize_trial(
    config: ScenarioConfig,
    condition: Condition,
    policy: str,
    records: Iterable[TickRecord],
    metrics: TrialMetrics,
    completed: bool,
    reason: str,
) -> str:
    header = {
        "schema": SCHEMA,
        "version": ARTIFACT_VERSION,
        "condition": condition.value,
        "policy": policy,
        "seed": config.seed,
        "config": config_to_dict(config),
    }
    lines = [_dump(header)]
    lines.extend(_dump(tick_to_dict(rec)) for rec in records)
    lines.append(
        _dump({"end": True, "completed": completed, "reason": reason, "metrics": metrics_to_dict(metrics)})
    )
    return "\n".join(lines) + "\n"


def parse_trial(text: str) -> ParsedTrialLog:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise LogFormatError("trial log needs a header and an end line")
    header = json.loads(lines[0])
    if header.get("schema") != SCHEMA:
        raise LogFormatError(f"unsupported schema {header.get('schema')!r}")
    condition = Condition(header["condition"])
    end = json.loads(lines[-1])
    if not end.get("end"):
        raise LogFormatError("missing end line (incomplete file?)")
    records = [tick_from_dict(json.loads(ln), condition) for ln in lines[1:-1]]
    return ParsedTrialLog(
        config=config_from_dict(header["config"]),
        condition=condition,
        policy=header["policy"],
        records=records,
        metrics=metrics_from_dict(end["metrics"]),
        completed=end["completed"],
        reason=end["reason"],
    )


def write_trial(path: Path, **kwargs) -> None:
    path.write_text(serialize_trial(**kwargs), encoding="utf-8")


def read_trial(path: Path) -> ParsedTrialLog:
    return parse_trial(path.read_text(encoding="utf-8"))


def _column_stats(values: list[float | None]) -> tuple[float | None, float | None]:
    present = [v for v in values if v is not None]
    if not present:
        return None, None
    mean = sum(present) / len(present)
    if len(present) == 1:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in present) / (len(present) - 1)
    return mean, var**0.5


def summarize_trials(entries: list[dict]) -> list[dict]:
    """Per-trial metric lines plus mean and sample-sd lines, ready for JSONL."""
    lines = [{"kind": "trial", **entry} for entry in entries]
    keys = ["intimate_intrusions", "personal_intrusions", "path_length", "trial_time", "mean_disagreement"]
    means: dict = {"kind": "mean"}
    stds: dict = {"kind": "std"}
    for key in keys:
        mean, std = _column_stats([e["metrics"][key] for e in entries])
        means[key] = mean
        stds[key] = std
    return lines + [means, stds]


def write_summary(path: Path, entries: list[dict]) -> None:
    path.write_text("\n".join(_dump(line) for line in summarize_trials(entries)) + "\n", encoding="utf-8")

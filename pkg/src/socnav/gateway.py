"""Live operator gateway: one WebSocket session drives one trial.

Wire protocol (line of JSON per message, tagged by "type", protocol
version 1; unknown fields are ignored, unknown tags are rejected):

  client -> server   hello {name}
                     start_trial {scenario, condition, seed, lockstep}
                     input {seq, axis_x, axis_y, buttons}
  server -> client   hello {name, v}
                     trial_start {condition, walls, goal, config}
                     state {tick, t, robot, peds, assist, metrics}
                     trial_end {metrics, reason, completed}
                     error {code, text}

The simulation runs on its own thread; network receipt and the tick loop
meet only at the LivePolicy mailbox (latest-wins, applied at tick
boundaries) and an outbound queue, so everything downstream of the input
sequence stays deterministic.
"""

from __future__ import annotations

import asyncio
import json
import queue
import threading
from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .assistance import AssistanceOutput, Condition
from .engine import TrialResult, run_trial
from .logio import config_from_dict, config_to_dict, metrics_to_dict, tick_to_dict, write_trial
from .metrics import MetricsAccumulator, TickRecord
from .policies import LivePolicy, TrialAborted
from .robot import StickInput
from .scenarios import ConfigurationError, PedConfig, ScenarioConfig

PROTOCOL_VERSION = 1
KNOWN_TAGS = {"hello", "start_trial", "input"}


def config_from_partial(d: dict) -> ScenarioConfig:
    """Build a config from a sparse client dict: named fields override the
    defaults, full config dicts pass through config_from_dict."""
    if not d:
        return ScenarioConfig()
    if "sfm" in d:  # full serialized config
        return config_from_dict(d)
    cfg = ScenarioConfig()
    simple = {}
    for key in ("layout", "ped_count", "seed", "dt", "max_duration", "ped_personal_radius", "goal_threshold"):
        if key in d:
            simple[key] = d[key]
    if "ped_config" in d:
        simple["ped_config"] = PedConfig(d["ped_config"])
    return replace(cfg, **simple)


def assist_to_dict(assist: AssistanceOutput | None, condition: Condition) -> dict:
    """Condition-gated serialization: channels a condition does not provide
    are absent from the payload, so clients draw exactly what exists."""
    if assist is None:
        return {}
    out: dict = {
        "predicted": [[p.position.x, p.position.y, p.heading] for p in assist.predicted_trajectory],
        "speed_fraction": assist.speed_fraction,
    }
    if condition.has_assistance:
        out["infeasible"] = assist.infeasible
        out["show_guidance"] = assist.show_guidance
        if assist.v_opt_twist is not None:
            out["v_opt_twist"] = [assist.v_opt_twist.linear, assist.v_opt_twist.angular]
        if assist.v_opt_planar is not None:
            out["v_opt"] = [assist.v_opt_planar.x, assist.v_opt_planar.y]
    if condition.has_haptics:
        out["force"] = [assist.haptic_force.x, assist.haptic_force.y]
    if condition.has_trajectory:
        out["guidance"] = [[p.position.x, p.position.y, p.heading] for p in assist.guidance_trajectory]
    if condition.has_bars:
        out["bars"] = list(assist.steering_bars)
    return out


class TrialSession:
    """State for one operator connection running at most one trial."""

    def __init__(self, out_dir: Path | None):
        self.out_dir = out_dir
        self.policy: LivePolicy | None = None
        self.thread: threading.Thread | None = None
        self.outbound: "queue.Queue[dict | None]" = queue.Queue()
        self.condition = Condition.MC

    def trial_running(self) -> bool:
        return self.thread is not None and self.thread.is_alive()

    def start(self, config: ScenarioConfig, condition: Condition, lockstep: bool) -> None:
        self.condition = condition
        self.policy = LivePolicy(realtime=not lockstep)
        accumulator = MetricsAccumulator(config.surface_clearance)
        tick_counter = {"n": 0}

        def on_tick(record: TickRecord, assist: AssistanceOutput | None) -> None:
            metrics = accumulator.update(record)
            self.outbound.put(
                {
                    "type": "state",
                    "tick": tick_counter["n"],
                    **tick_to_dict(record),
                    "assist": assist_to_dict(assist, condition),
                    "metrics": metrics_to_dict(metrics),
                }
            )
            tick_counter["n"] += 1

        def worker() -> None:
            try:
                result = run_trial(config, self.policy, condition, on_tick=on_tick)
            except TrialAborted:
                self.outbound.put(None)
                return
            except ConfigurationError as exc:
                self.outbound.put({"type": "error", "code": "config", "text": str(exc)})
                self.outbound.put(None)
                return
            self._persist(result)
            self.outbound.put(
                {
                    "type": "trial_end",
                    "metrics": metrics_to_dict(result.metrics),
                    "reason": result.reason,
                    "completed": result.completed,
                }
            )
            self.outbound.put(None)

        self.thread = threading.Thread(target=worker, daemon=True)
        self.thread.start()

    def _persist(self, result: TrialResult) -> None:
        if self.out_dir is None:
            return
        self.out_dir.mkdir(parents=True, exist_ok=True)
        name = f"trial_{result.condition.value}_{result.config.ped_config.value}_live_seed{result.config.seed}.jsonl"
        write_trial(
            self.out_dir / name,
            config=result.config,
            condition=result.condition,
            policy=result.policy_name,
            records=result.log,
            metrics=result.metrics,
            completed=result.completed,
            reason=result.reason,
        )

    def stop(self) -> None:
        if self.policy is not None:
            self.policy.close()
        if self.thread is not None:
            self.thread.join(timeout=5.0)
        self.outbound.put(None)  # release any executor thread blocked on get()


def create_app(out_dir: Path | None = None, ui_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="socnav gateway")
    busy_lock = threading.Lock()
    active: dict[str, TrialSession | None] = {"session": None}

    @app.websocket("/ws")
    async def operator_socket(ws: WebSocket) -> None:
        await ws.accept()
        with busy_lock:
            if active["session"] is not None:
                await ws.send_json({"type": "error", "code": "busy", "text": "another operator session is active"})
                await ws.close()
                return
            session = TrialSession(out_dir)
            active["session"] = session
        try:
            await _serve_session(ws, session)
        finally:
            session.stop()
            with busy_lock:
                active["session"] = None

    async def _serve_session(ws: WebSocket, session: TrialSession) -> None:
        loop = asyncio.get_running_loop()
        sender = asyncio.create_task(_pump_outbound(ws, session, loop))
        try:
            while True:
                try:
                    raw = await ws.receive_text()
                except WebSocketDisconnect:
                    return
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict):
                        raise ValueError("message must be an object")
                except ValueError:
                    await ws.send_json({"type": "error", "code": "protocol", "text": "malformed JSON message"})
                    return
                tag = msg.get("type")
                if tag not in KNOWN_TAGS:
                    await ws.send_json({"type": "error", "code": "protocol", "text": f"unknown message tag {tag!r}"})
                    return
                if tag == "hello":
                    await ws.send_json({"type": "hello", "name": "socnav-gateway", "v": PROTOCOL_VERSION})
                elif tag == "start_trial":
                    if session.trial_running():
                        await ws.send_json({"type": "error", "code": "busy", "text": "a trial is already running"})
                        continue
                    try:
                        config = config_from_partial(msg.get("scenario") or {})
                        if "seed" in msg:
                            config = replace(config, seed=int(msg["seed"]))
                        condition = Condition(msg.get("condition", "mc"))
                        config_dict = config_to_dict(config)
                    except (ValueError, KeyError, TypeError) as exc:
                        await ws.send_json({"type": "error", "code": "config", "text": f"bad start_trial: {exc}"})
                        continue
                    session.start(config, condition, lockstep=bool(msg.get("lockstep", False)))
                    await ws.send_json(
                        {
                            "type": "trial_start",
                            "condition": condition.value,
                            "config": config_dict,
                            "walls": [[w.a.x, w.a.y, w.b.x, w.b.y] for w in config.resolved_walls()],
                            "goal": [config.goal.x, config.goal.y],
                            "dt": config.dt,
                        }
                    )
                elif tag == "input":
                    if session.policy is None:
                        continue  # input before a trial starts is harmless
                    try:
                        seq = int(msg["seq"])
                        stick = StickInput(float(msg["axis_x"]), float(msg["axis_y"]))
                    except (KeyError, TypeError, ValueError):
                        await ws.send_json({"type": "error", "code": "protocol", "text": "malformed input message"})
                        return
                    session.policy.push_input(seq, stick)
        finally:
            sender.cancel()

    async def _pump_outbound(ws: WebSocket, session: TrialSession, loop) -> None:
        while True:
            msg = await loop.run_in_executor(None, session.outbound.get)
            if msg is None:
                continue  # trial worker finished; keep the session open for the next start_trial
            try:
                await ws.send_json(msg)
            except Exception:
                return

    if ui_dir is not None and ui_dir.exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

// The client-side view model: a projection of server-sent state plus local
// UI concerns. The client never simulates physics; everything drawn comes
// from the latest StateUpdate and the static trial geometry.

import type { Condition, MetricsWire, StateUpdate, TrialStart } from "./protocol.js";

export type ConnectionStatus = "disconnected" | "connecting" | "connected";
export type TrialStatus = "idle" | "running" | "ended";

export interface ViewModel {
  connection: ConnectionStatus;
  trial: TrialStatus;
  condition: Condition;
  walls: [number, number, number, number][];
  goal: [number, number] | null;
  state: StateUpdate | null;
  lastStateAt: number | null; // wall-clock ms of the newest update
  endReason: string | null;
  finalMetrics: MetricsWire | null;
  inputAxes: [number, number];
  inputSource: "gamepad" | "keyboard";
}

export function initialViewModel(): ViewModel {
  return {
    connection: "disconnected",
    trial: "idle",
    condition: "mc",
    walls: [],
    goal: null,
    state: null,
    lastStateAt: null,
    endReason: null,
    finalMetrics: null,
    inputAxes: [0, 0],
    inputSource: "keyboard",
  };
}

export function applyTrialStart(vm: ViewModel, msg: TrialStart, now: number): void {
  vm.trial = "running";
  vm.condition = msg.condition;
  vm.walls = msg.walls;
  vm.goal = msg.goal;
  vm.state = null;
  vm.lastStateAt = now;
  vm.endReason = null;
  vm.finalMetrics = null;
}

export function applyState(vm: ViewModel, msg: StateUpdate, now: number): void {
  vm.state = msg;
  vm.lastStateAt = now;
}

export function isStale(vm: ViewModel, now: number, staleAfterMs = 500): boolean {
  if (vm.trial !== "running" || vm.lastStateAt === null) return false;
  return now - vm.lastStateAt > staleAfterMs;
}

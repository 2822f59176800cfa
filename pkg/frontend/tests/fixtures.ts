// A fixed, fully-populated world state shaped exactly the way the gateway
// serializes it for each condition: channels a condition does not provide
// are absent from the assist payload.

import type { AssistWire, Condition, StateUpdate, TrialStart } from "../src/protocol.js";
import { applyState, applyTrialStart, initialViewModel, type ViewModel } from "../src/view.js";

const PREDICTED: [number, number, number][] = [
  [7.1, 5.0, 0.1],
  [7.4, 5.05, 0.15],
  [7.7, 5.12, 0.2],
  [8.0, 5.2, 0.25],
];

const GUIDANCE: [number, number, number][] = [
  [7.1, 5.0, -0.2],
  [7.35, 4.9, -0.3],
  [7.6, 4.75, -0.4],
  [7.85, 4.55, -0.5],
];

function hasHaptics(c: Condition): boolean {
  return c === "h" || c === "hvt" || c === "hvb";
}
function hasTrajectory(c: Condition): boolean {
  return c === "vt" || c === "hvt";
}
function hasBars(c: Condition): boolean {
  return c === "vb" || c === "hvb";
}

export function assistFor(condition: Condition): AssistWire {
  const assist: AssistWire = {
    predicted: PREDICTED,
    speed_fraction: 0.6,
  };
  if (condition !== "mc") {
    assist.infeasible = false;
    assist.show_guidance = true;
    assist.v_opt_twist = [0.8, -0.5];
    assist.v_opt = [0.78, -0.12];
  }
  if (hasHaptics(condition)) assist.force = [0.24, -0.6];
  if (hasTrajectory(condition)) assist.guidance = GUIDANCE;
  if (hasBars(condition)) assist.bars = [0.0, 0.5];
  return assist;
}

export function stateFor(condition: Condition): StateUpdate {
  return {
    type: "state",
    tick: 42,
    t: 2.1,
    robot: { x: 7.0, y: 5.0, theta: 0.1, v: 0.8, w: 0.0, radius: 0.28 },
    peds: [
      { id: 0, x: 8.5, y: 6.2, vx: 0.0, vy: -1.1, body_r: 0.3, personal_r: 0.45 },
      { id: 1, x: 5.5, y: 3.4, vx: 0.2, vy: 1.0, body_r: 0.3, personal_r: 0.45 },
    ],
    stick: [0.1, 0.8],
    infeasible: false,
    assist: assistFor(condition),
    metrics: {
      intimate_intrusions: 0,
      personal_intrusions: 1,
      path_length: 5.4,
      trial_time: 2.1,
      mean_disagreement: condition === "mc" ? null : 0.12,
    },
  };
}

export const TRIAL_START: Omit<TrialStart, "condition"> = {
  type: "trial_start",
  walls: [
    [0, 0, 15, 0],
    [15, 0, 15, 10],
    [15, 10, 0, 10],
    [0, 10, 0, 0],
    [2.0, 3.4, 4.5, 3.4],
    [4.5, 3.4, 4.5, 4.2],
    [4.5, 4.2, 2.0, 4.2],
    [2.0, 4.2, 2.0, 3.4],
  ],
  goal: [13.5, 5.0],
  dt: 0.05,
};

export function viewModelFor(condition: Condition, nowMs = 1000): ViewModel {
  const vm = initialViewModel();
  vm.connection = "connected";
  applyTrialStart(vm, { ...TRIAL_START, condition, type: "trial_start" }, nowMs);
  applyState(vm, stateFor(condition), nowMs);
  return vm;
}

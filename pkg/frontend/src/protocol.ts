// Wire protocol spoken with the gateway: line-JSON messages tagged by "type".
// Unknown fields are ignored; unknown tags are surfaced as errors by the
// server, so the client only ever sends the three known tags below.

export type Condition = "mc" | "h" | "vt" | "vb" | "hvt" | "hvb";

export const CONDITIONS: Condition[] = ["mc", "h", "vt", "vb", "hvt", "hvb"];

export interface RobotWire {
  x: number;
  y: number;
  theta: number;
  v: number;
  w: number;
  radius: number;
}

export interface PedestrianWire {
  id: number;
  x: number;
  y: number;
  vx: number;
  vy: number;
  body_r: number;
  personal_r: number;
}

export interface AssistWire {
  predicted?: [number, number, number][];
  speed_fraction?: number;
  infeasible?: boolean;
  show_guidance?: boolean;
  v_opt_twist?: [number, number];
  v_opt?: [number, number];
  force?: [number, number];
  guidance?: [number, number, number][];
  bars?: [number, number];
}

export interface MetricsWire {
  intimate_intrusions: number;
  personal_intrusions: number;
  path_length: number;
  trial_time: number;
  mean_disagreement: number | null;
}

export interface StateUpdate {
  type: "state";
  tick: number;
  t: number;
  robot: RobotWire;
  peds: PedestrianWire[];
  stick: [number, number];
  infeasible: boolean;
  assist: AssistWire;
  metrics: MetricsWire;
}

export interface TrialStart {
  type: "trial_start";
  condition: Condition;
  walls: [number, number, number, number][];
  goal: [number, number];
  dt: number;
}

export interface TrialEnd {
  type: "trial_end";
  metrics: MetricsWire;
  reason: string;
  completed: boolean;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  text: string;
}

export interface HelloReply {
  type: "hello";
  name: string;
  v: number;
}

export type ServerMessage = StateUpdate | TrialStart | TrialEnd | ErrorMessage | HelloReply;

export function decodeServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const tag = (data as { type?: unknown }).type;
  if (
    tag === "state" ||
    tag === "trial_start" ||
    tag === "trial_end" ||
    tag === "error" ||
    tag === "hello"
  ) {
    return data as ServerMessage;
  }
  return null;
}

export function helloMessage(name: string): string {
  return JSON.stringify({ type: "hello", name });
}

export function startTrialMessage(
  condition: Condition,
  seed: number,
  scenario: Record<string, unknown> = {},
): string {
  return JSON.stringify({ type: "start_trial", condition, seed, scenario });
}

export function inputMessage(seq: number, axisX: number, axisY: number): string {
  return JSON.stringify({ type: "input", seq, axis_x: axisX, axis_y: axisY });
}

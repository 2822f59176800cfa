// Top-down scene renderer. All drawing goes through the Draw2D interface so
// tests can record frames as data and diff them against goldens; main.ts
// plugs in a CanvasRenderingContext2D adapter.

import type { StateUpdate } from "./protocol.js";
import { isStale, type ViewModel } from "./view.js";

export interface Draw2D {
  clear(color: string): void;
  line(x1: number, y1: number, x2: number, y2: number, color: string, width: number): void;
  polyline(points: [number, number][], color: string, width: number): void;
  circle(
    x: number,
    y: number,
    r: number,
    fill: string | null,
    stroke: string | null,
    width: number,
  ): void;
  rect(x: number, y: number, w: number, h: number, fill: string): void;
  text(x: number, y: number, s: string, color: string, size: number): void;
}

export type DrawOp = (string | number | null | [number, number][])[];

export class RecordingDraw implements Draw2D {
  ops: DrawOp[] = [];

  private r(v: number): number {
    return Math.round(v * 100) / 100;
  }

  clear(color: string): void {
    this.ops.push(["clear", color]);
  }
  line(x1: number, y1: number, x2: number, y2: number, color: string, width: number): void {
    this.ops.push(["line", this.r(x1), this.r(y1), this.r(x2), this.r(y2), color, width]);
  }
  polyline(points: [number, number][], color: string, width: number): void {
    this.ops.push([
      "polyline",
      points.map(([x, y]) => [this.r(x), this.r(y)] as [number, number]),
      color,
      width,
    ]);
  }
  circle(
    x: number,
    y: number,
    r: number,
    fill: string | null,
    stroke: string | null,
    width: number,
  ): void {
    this.ops.push(["circle", this.r(x), this.r(y), this.r(r), fill, stroke, width]);
  }
  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.ops.push(["rect", this.r(x), this.r(y), this.r(w), this.r(h), fill]);
  }
  text(x: number, y: number, s: string, color: string, size: number): void {
    this.ops.push(["text", this.r(x), this.r(y), s, color, size]);
  }
}

export class CanvasDraw implements Draw2D {
  constructor(private ctx: CanvasRenderingContext2D, private width: number, private height: number) {}

  clear(color: string): void {
    this.ctx.fillStyle = color;
    this.ctx.fillRect(0, 0, this.width, this.height);
  }
  line(x1: number, y1: number, x2: number, y2: number, color: string, width: number): void {
    this.ctx.strokeStyle = color;
    this.ctx.lineWidth = width;
    this.ctx.beginPath();
    this.ctx.moveTo(x1, y1);
    this.ctx.lineTo(x2, y2);
    this.ctx.stroke();
  }
  polyline(points: [number, number][], color: string, width: number): void {
    if (points.length < 2) return;
    this.ctx.strokeStyle = color;
    this.ctx.lineWidth = width;
    this.ctx.beginPath();
    this.ctx.moveTo(points[0][0], points[0][1]);
    for (const [x, y] of points.slice(1)) this.ctx.lineTo(x, y);
    this.ctx.stroke();
  }
  circle(
    x: number,
    y: number,
    r: number,
    fill: string | null,
    stroke: string | null,
    width: number,
  ): void {
    this.ctx.beginPath();
    this.ctx.arc(x, y, r, 0, 2 * Math.PI);
    if (fill) {
      this.ctx.fillStyle = fill;
      this.ctx.fill();
    }
    if (stroke) {
      this.ctx.strokeStyle = stroke;
      this.ctx.lineWidth = width;
      this.ctx.stroke();
    }
  }
  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.ctx.fillStyle = fill;
    this.ctx.fillRect(x, y, w, h);
  }
  text(x: number, y: number, s: string, color: string, size: number): void {
    this.ctx.fillStyle = color;
    this.ctx.font = `${size}px system-ui, sans-serif`;
    this.ctx.fillText(s, x, y);
  }
}

const COLORS = {
  background: "#11151a",
  wall: "#8a939f",
  goal: "#ffd166",
  robot: "#1f6feb", // blue footprint
  heading: "#dbe4ee",
  pedestrian: "#e8e2d0",
  intimateRing: "rgba(230, 90, 90, 0.18)",
  personalRing: "rgba(230, 180, 90, 0.10)",
  predicted: "#3fb950", // green dynamics trace
  guidance: "#f85149", // red suggestion
  force: "#ff9f1c",
  bars: "#f85149",
  speed: "#33d6da", // aqua readout
  text: "#c9d1d9",
  banner: "#b62324",
} as const;

interface Transform {
  scale: number;
  ox: number;
  oy: number;
  height: number;
}

function fitTransform(vm: ViewModel, width: number, height: number): Transform {
  let minX = 0,
    minY = 0,
    maxX = 15,
    maxY = 10;
  if (vm.walls.length > 0) {
    const xs = vm.walls.flatMap((w) => [w[0], w[2]]);
    const ys = vm.walls.flatMap((w) => [w[1], w[3]]);
    minX = Math.min(...xs);
    maxX = Math.max(...xs);
    minY = Math.min(...ys);
    maxY = Math.max(...ys);
  }
  const margin = 24;
  const scale = Math.min(
    (width - 2 * margin) / (maxX - minX),
    (height - 2 * margin) / (maxY - minY),
  );
  return { scale, ox: margin - minX * scale, oy: margin - minY * scale, height };
}

function sx(t: Transform, x: number): number {
  return t.ox + x * t.scale;
}

function sy(t: Transform, y: number): number {
  return t.height - (t.oy + y * t.scale); // world y up, screen y down
}

function drawArrow(
  draw: Draw2D,
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  color: string,
  width: number,
): void {
  draw.line(x1, y1, x2, y2, color, width);
  const angle = Math.atan2(y2 - y1, x2 - x1);
  const headLen = 8;
  for (const side of [-1, 1]) {
    draw.line(
      x2,
      y2,
      x2 - headLen * Math.cos(angle + (side * Math.PI) / 7),
      y2 - headLen * Math.sin(angle + (side * Math.PI) / 7),
      color,
      width,
    );
  }
}

function drawScene(draw: Draw2D, vm: ViewModel, t: Transform, state: StateUpdate): void {
  for (const [x1, y1, x2, y2] of vm.walls) {
    draw.line(sx(t, x1), sy(t, y1), sx(t, x2), sy(t, y2), COLORS.wall, 2);
  }
  if (vm.goal) {
    draw.circle(sx(t, vm.goal[0]), sy(t, vm.goal[1]), 6, null, COLORS.goal, 2);
  }

  for (const ped of state.peds) {
    const px = sx(t, ped.x);
    const py = sy(t, ped.y);
    draw.circle(px, py, (ped.body_r + 1.2) * t.scale, COLORS.personalRing, null, 0);
    draw.circle(px, py, (ped.body_r + 0.45) * t.scale, COLORS.intimateRing, null, 0);
    draw.circle(px, py, ped.body_r * t.scale, COLORS.pedestrian, null, 0);
  }

  const r = state.robot;
  const rx = sx(t, r.x);
  const ry = sy(t, r.y);

  // Guidance channels: draw exactly the fields the server sent.
  const assist = state.assist;
  if (assist.predicted && assist.predicted.length > 1) {
    draw.polyline(
      assist.predicted.map(([x, y]) => [sx(t, x), sy(t, y)] as [number, number]),
      COLORS.predicted,
      2,
    );
  }
  if (assist.guidance && assist.guidance.length > 1) {
    draw.polyline(
      assist.guidance.map(([x, y]) => [sx(t, x), sy(t, y)] as [number, number]),
      COLORS.guidance,
      2,
    );
  }

  draw.circle(rx, ry, r.radius * t.scale, COLORS.robot, null, 0);
  draw.line(
    rx,
    ry,
    rx + r.radius * t.scale * Math.cos(-r.theta),
    ry + r.radius * t.scale * Math.sin(-r.theta),
    COLORS.heading,
    2,
  );

  if (assist.force && (assist.force[0] !== 0 || assist.force[1] !== 0)) {
    // Force in operator axes: x = linear (push along heading), y = angular
    // (turn correction, drawn perpendicular to the heading).
    const [fLin, fAng] = assist.force;
    const len = 40;
    const dx = fLin * Math.cos(-r.theta) - fAng * Math.sin(-r.theta);
    const dy = fLin * Math.sin(-r.theta) + fAng * Math.cos(-r.theta);
    drawArrow(draw, rx, ry, rx + len * dx, ry + len * dy, COLORS.force, 3);
  }
}

function drawHud(
  draw: Draw2D,
  vm: ViewModel,
  state: StateUpdate,
  width: number,
  height: number,
): void {
  const assist = state.assist;

  if (assist.bars) {
    const [left, right] = assist.bars;
    const barMax = height * 0.5;
    if (left > 0) {
      draw.rect(6, height / 2 - left * barMax * 0.5, 12, left * barMax, COLORS.bars);
    }
    if (right > 0) {
      draw.rect(width - 18, height / 2 - right * barMax * 0.5, 12, right * barMax, COLORS.bars);
    }
  }

  if (assist.speed_fraction !== undefined) {
    const w = 90;
    draw.rect(width - w - 14, height - 26, w, 12, "rgba(51, 214, 218, 0.2)");
    draw.rect(width - w - 14, height - 26, w * Math.min(1, assist.speed_fraction), 12, COLORS.speed);
    draw.text(width - w - 14, height - 32, `speed ${(assist.speed_fraction * 100).toFixed(0)}%`, COLORS.speed, 11);
  }

  const m = state.metrics;
  const disagreement = m.mean_disagreement === null ? "-" : m.mean_disagreement.toFixed(3);
  draw.text(
    10,
    height - 10,
    `t=${state.t.toFixed(1)}s  path=${m.path_length.toFixed(1)}m  ` +
      `intrusions=${m.intimate_intrusions}/${m.personal_intrusions}  disagree=${disagreement}`,
    COLORS.text,
    12,
  );
  draw.text(10, 18, `condition ${vm.condition.toUpperCase()}`, COLORS.text, 13);
  if (assist.infeasible) {
    draw.text(10, 36, "no feasible velocity - fallback active", COLORS.guidance, 12);
  }
}

export function renderFrame(
  draw: Draw2D,
  vm: ViewModel,
  width: number,
  height: number,
  now: number,
): void {
  draw.clear(COLORS.background);
  if (vm.connection !== "connected") {
    draw.text(width / 2 - 60, height / 2, "not connected", COLORS.text, 14);
    return;
  }
  if (vm.state === null) {
    draw.text(width / 2 - 90, height / 2, "waiting for trial state", COLORS.text, 14);
    return;
  }
  const t = fitTransform(vm, width, height);
  drawScene(draw, vm, t, vm.state);
  drawHud(draw, vm, vm.state, width, height);
  if (vm.trial === "ended") {
    draw.text(width / 2 - 70, 22, `trial ended: ${vm.endReason ?? ""}`, COLORS.goal, 14);
  }
  if (isStale(vm, now)) {
    draw.rect(0, 0, width, 24, COLORS.banner);
    draw.text(8, 16, "connection degraded: no state updates", "#ffffff", 12);
  }
}

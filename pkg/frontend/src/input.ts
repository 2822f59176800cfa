// Operator input capture: gamepad axes map 1:1 onto the stick; the keyboard
// fallback integrates key targets toward +/-1 at a fixed rate so taps give
// fine control and a 200 ms hold reaches full deflection.

export const KEY_SMOOTHING_RATE = 5.0; // axis units per second

const clamp = (v: number) => Math.max(-1, Math.min(1, v));

export class KeyboardAxes {
  private pressed = new Set<string>();
  axisX = 0;
  axisY = 0;

  keyDown(code: string): void {
    this.pressed.add(code);
  }

  keyUp(code: string): void {
    this.pressed.delete(code);
  }

  private target(): [number, number] {
    let tx = 0;
    let ty = 0;
    if (this.pressed.has("KeyW") || this.pressed.has("ArrowUp")) ty += 1;
    if (this.pressed.has("KeyS") || this.pressed.has("ArrowDown")) ty -= 1;
    // left stick is positive turn on the robot, so "turn left" pushes
    // axis_x toward -1, mirroring a physical stick pushed left
    if (this.pressed.has("KeyA") || this.pressed.has("ArrowLeft")) tx -= 1;
    if (this.pressed.has("KeyD") || this.pressed.has("ArrowRight")) tx += 1;
    return [tx, ty];
  }

  update(dtSeconds: number): [number, number] {
    const [tx, ty] = this.target();
    const step = KEY_SMOOTHING_RATE * dtSeconds;
    this.axisX = clamp(approach(this.axisX, tx, step));
    this.axisY = clamp(approach(this.axisY, ty, step));
    return [this.axisX, this.axisY];
  }
}

function approach(value: number, target: number, step: number): number {
  if (value < target) return Math.min(target, value + step);
  if (value > target) return Math.max(target, value - step);
  return value;
}

export interface GamepadLike {
  axes: ReadonlyArray<number>;
}

// Standard mapping: axes[0] is left-stick x (left = -1), axes[1] is left-stick
// y (up = -1). The operator convention wants forward = +1, so y flips; the
// + 0 folds the negative zero that flip would otherwise produce.
export function gamepadToStick(pad: GamepadLike): [number, number] {
  const x = clamp(pad.axes[0] ?? 0);
  const y = clamp(-(pad.axes[1] ?? 0) + 0);
  return [x, y];
}

export class InputSender {
  private seq = 0;
  private lastSentAt = -Infinity;

  constructor(private minIntervalMs = 1000 / 30) {}

  /** Returns the next message payload when the rate limiter allows one. */
  maybeSend(axisX: number, axisY: number, nowMs: number): { seq: number; axisX: number; axisY: number } | null {
    if (nowMs - this.lastSentAt < this.minIntervalMs) return null;
    this.lastSentAt = nowMs;
    this.seq += 1;
    return { seq: this.seq, axisX: clamp(axisX), axisY: clamp(axisY) };
  }
}

// Page wiring: connect to the gateway, capture operator input, run the
// render loop. Physics lives entirely on the server.

import { hapticIntensity, renderGamepadRumble } from "./haptics.js";
import { gamepadToStick, InputSender, KeyboardAxes } from "./input.js";
import { CanvasDraw, renderFrame } from "./render.js";
import { GatewayClient } from "./net.js";
import { CONDITIONS, helloMessage, inputMessage, startTrialMessage, type Condition } from "./protocol.js";
import { applyState, applyTrialStart, initialViewModel } from "./view.js";

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const conditionSelect = document.getElementById("condition") as HTMLSelectElement;
const scenarioSelect = document.getElementById("scenario") as HTMLSelectElement;
const seedInput = document.getElementById("seed") as HTMLInputElement;
const startButton = document.getElementById("start") as HTMLButtonElement;
const statusLine = document.getElementById("status") as HTMLElement;

for (const condition of CONDITIONS) {
  const option = document.createElement("option");
  option.value = condition;
  option.textContent = condition.toUpperCase();
  conditionSelect.appendChild(option);
}

const vm = initialViewModel();
const keyboard = new KeyboardAxes();
const sender = new InputSender();
const wsUrl = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`;
const client = new GatewayClient(wsUrl);

client.onstatus = (connected) => {
  vm.connection = connected ? "connected" : "disconnected";
  statusLine.textContent = connected ? "connected" : "reconnecting...";
  if (connected) client.send(helloMessage("teleop-ui"));
};

client.onmessage = (msg) => {
  const now = performance.now();
  switch (msg.type) {
    case "trial_start":
      applyTrialStart(vm, msg, now);
      statusLine.textContent = `trial running (${msg.condition.toUpperCase()})`;
      break;
    case "state":
      applyState(vm, msg, now);
      break;
    case "trial_end":
      vm.trial = "ended";
      vm.endReason = msg.reason;
      vm.finalMetrics = msg.metrics;
      statusLine.textContent = `trial ended: ${msg.reason}`;
      break;
    case "error":
      statusLine.textContent = `error [${msg.code}]: ${msg.text}`;
      break;
    case "hello":
      break;
  }
};

startButton.addEventListener("click", () => {
  const condition = conditionSelect.value as Condition;
  const seed = Number.parseInt(seedInput.value, 10) || 0;
  client.send(
    startTrialMessage(condition, seed, {
      ped_config: scenarioSelect.value,
      max_duration: 120.0,
    }),
  );
});

window.addEventListener("keydown", (e) => {
  keyboard.keyDown(e.code);
});
window.addEventListener("keyup", (e) => {
  keyboard.keyUp(e.code);
});

function activeGamepad(): Gamepad | null {
  for (const pad of navigator.getGamepads?.() ?? []) {
    if (pad && pad.connected) return pad;
  }
  return null;
}

let lastFrame = performance.now();

function frame(now: number): void {
  const dt = Math.min(0.1, (now - lastFrame) / 1000);
  lastFrame = now;

  const pad = activeGamepad();
  let axes: [number, number];
  if (pad) {
    axes = gamepadToStick(pad);
    vm.inputSource = "gamepad";
  } else {
    axes = keyboard.update(dt);
    vm.inputSource = "keyboard";
  }
  vm.inputAxes = axes;

  if (vm.trial === "running") {
    const payload = sender.maybeSend(axes[0], axes[1], now);
    if (payload) client.send(inputMessage(payload.seq, payload.axisX, payload.axisY));
  }

  const condition = vm.condition;
  const hasHaptics = condition === "h" || condition === "hvt" || condition === "hvb";
  if (hasHaptics && vm.state?.assist.force) {
    renderGamepadRumble(pad, hapticIntensity(vm.state.assist.force));
  }

  renderFrame(new CanvasDraw(ctx, canvas.width, canvas.height), vm, canvas.width, canvas.height, now);
  requestAnimationFrame(frame);
}

client.connect();
requestAnimationFrame(frame);

// Haptic rendering without a force-feedback device: gamepad rumble intensity
// proportional to the force magnitude. Directionality survives via the force
// arrow the renderer draws whenever the force field is present.

export function hapticIntensity(force: [number, number] | undefined): number {
  if (!force) return 0;
  return Math.min(1, Math.hypot(force[0], force[1]));
}

interface RumbleActuator {
  playEffect(type: string, params: Record<string, number>): Promise<unknown>;
}

export function renderGamepadRumble(pad: Gamepad | null, intensity: number): boolean {
  if (!pad || intensity <= 0) return false;
  const actuator = (pad as unknown as { vibrationActuator?: RumbleActuator }).vibrationActuator;
  if (!actuator) return false;
  void actuator
    .playEffect("dual-rumble", {
      duration: 60,
      strongMagnitude: intensity,
      weakMagnitude: intensity * 0.5,
    })
    .catch(() => undefined);
  return true;
}

// Color policy: each action gets a fixed categorical hue, each body
// variable gets its own hue with a light-to-dark luminance ramp. Left and
// right counterparts share a hue family so pairs read as related.

export const ACTION_COLORS: Record<string, string> = {
  sit_to_stand: "#e07a30",
  sitting: "#7a6ff0",
  stand_to_sit: "#c4512f",
  reaching: "#2fa8c4",
  walking: "#3fae58",
  standing: "#b89a2e",
  taking_medicine: "#d4549a",
};

export function actionColor(action: string): string {
  return ACTION_COLORS[action] ?? "#8a8a8a";
}

// hue per variable, degrees on the HSL wheel
const VARIABLE_HUES: Record<string, number> = {
  trunk: 28,
  arm_l: 258,
  arm_r: 286,
  foot_l: 168,
  foot_r: 196,
  weight_l: 332,
  weight_r: 4,
};

export function variableHue(variable: string): number {
  return VARIABLE_HUES[variable] ?? 210;
}

export function variableColor(variable: string): string {
  return `hsl(${variableHue(variable)}, 62%, 42%)`;
}

/**
 * Heatmap cell color. t = value / rampMax clamped to [0, 1]; lightness
 * falls from near-white to dark as t rises, so raising the ramp ceiling
 * lightens every cell whose value is now a smaller fraction of it.
 */
export function heatColor(variable: string, value: number, rampMax: number): string {
  const ceil = rampMax > 0 ? rampMax : 1;
  const t = Math.min(1, Math.max(0, value / ceil));
  const lightness = 94 - t * 62;
  const saturation = 30 + t * 45;
  return `hsl(${variableHue(variable)}, ${saturation.toFixed(1)}%, ${lightness.toFixed(1)}%)`;
}

/** Gap cells (no valid samples) render as a neutral hatch tone. */
export const GAP_COLOR = "#e8e5df";

export function isLeftVariable(variable: string): boolean {
  return variable.endsWith("_l");
}

export function formatDuration(seconds: number): string {
  if (!Number.isFinite(seconds)) return "-";
  if (seconds < 60) {
    const text = Number.isInteger(seconds) ? seconds.toFixed(0) : seconds.toFixed(1);
    return `${text} s`;
  }
  const minutes = Math.floor(seconds / 60);
  const rest = seconds - minutes * 60;
  return `${minutes} min ${rest.toFixed(0)} s`;
}

export function formatPercent(fraction: number): string {
  return `${(fraction * 100).toFixed(1)}%`;
}

/** "sit_to_stand" -> "Sit to stand" */
export function actionLabel(action: string): string {
  const words = action.split("_").join(" ");
  return words.charAt(0).toUpperCase() + words.slice(1);
}

/** "slight_left" -> "slight left" */
export function weightShiftLabel(weightText: string): string {
  return weightText.split("_").join(" ");
}

export function formatNumber(value: number, digits = 2): string {
  return value.toFixed(digits);
}

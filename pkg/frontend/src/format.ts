/**
 * Formatting helpers. This module is the only arithmetic the client is
 * allowed to do with service numbers: fixed-point display and input
 * clamping. No confidence is ever derived or combined here.
 */

/** Display form of a confidence value: three decimal places. */
export function formatConfidence(value: number): string {
  return value.toFixed(3);
}

/** Signed what-if delta, two decimal places ("+0.08", "-0.03", "+0.00"). */
export function formatDelta(delta: number): string {
  const fixed = Math.abs(delta).toFixed(2);
  return `${delta < 0 ? "-" : "+"}${fixed}`;
}

/** Prioritisation score, two decimal places. */
export function formatScore(score: number): string {
  return score.toFixed(2);
}

export interface ClampResult {
  value: number;
  warned: boolean;
}

/** Clamp a slider/override value into [0, 1], noting when it was out of range. */
export function clampOverride(value: number): ClampResult {
  if (Number.isNaN(value)) {
    return { value: 0, warned: true };
  }
  if (value < 0) return { value: 0, warned: true };
  if (value > 1) return { value: 1, warned: true };
  return { value, warned: false };
}

/** Debounce an action; used for slider-driven what-if requests. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), waitMs);
  };
}

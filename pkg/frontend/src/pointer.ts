// Pointer-to-panel mapping: canvas coordinates to normalized positions.

export interface Rect {
  left: number;
  top: number;
  width: number;
  height: number;
}

export interface PanelPoint {
  nx: number;
  ny: number;
}

function clamp01(v: number): number {
  return Math.min(1, Math.max(0, v));
}

/** Normalize a pointer position against the canvas rectangle.
 *  Returns null for positions outside it (those events are ignored). */
export function normalizePointer(rect: Rect, clientX: number, clientY: number): PanelPoint | null {
  if (rect.width <= 0 || rect.height <= 0) {
    return null;
  }
  const x = clientX - rect.left;
  const y = clientY - rect.top;
  if (x < 0 || y < 0 || x > rect.width || y > rect.height) {
    return null;
  }
  return { nx: clamp01(x / rect.width), ny: clamp01(y / rect.height) };
}

/** Gate for move messages: at most maxPerSecond pass; down/up bypass it. */
export class MoveThrottle {
  private readonly intervalMs: number;
  private lastAt = Number.NEGATIVE_INFINITY;

  constructor(maxPerSecond = 120) {
    if (maxPerSecond <= 0) {
      throw new Error("maxPerSecond must be positive");
    }
    this.intervalMs = 1000 / maxPerSecond;
  }

  allow(nowMs: number): boolean {
    if (nowMs - this.lastAt < this.intervalMs) {
      return false;
    }
    this.lastAt = nowMs;
    return true;
  }
}

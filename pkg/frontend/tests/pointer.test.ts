import { describe, expect, it } from "vitest";

import { MoveThrottle, normalizePointer } from "../src/pointer.js";

const rect = { left: 40, top: 20, width: 640, height: 320 };

describe("normalizePointer", () => {
  it("maps the top-left corner to (0, 0)", () => {
    expect(normalizePointer(rect, 40, 20)).toEqual({ nx: 0, ny: 0 });
  });

  it("maps the center to (0.5, 0.5)", () => {
    expect(normalizePointer(rect, 40 + 320, 20 + 160)).toEqual({ nx: 0.5, ny: 0.5 });
  });

  it("maps the bottom-right corner to (1, 1)", () => {
    expect(normalizePointer(rect, 40 + 640, 20 + 320)).toEqual({ nx: 1, ny: 1 });
  });

  it("ignores positions outside the canvas", () => {
    expect(normalizePointer(rect, 39, 20)).toBeNull();
    expect(normalizePointer(rect, 40, 19)).toBeNull();
    expect(normalizePointer(rect, 40 + 641, 20)).toBeNull();
    expect(normalizePointer(rect, 40, 20 + 321)).toBeNull();
  });

  it("rejects a degenerate rectangle", () => {
    expect(normalizePointer({ left: 0, top: 0, width: 0, height: 100 }, 0, 0)).toBeNull();
  });

  it("sweeps nx monotonically 0 to 1 across the full width", () => {
    let prev = -1;
    for (let x = 0; x <= 640; x += 5) {
      const point = normalizePointer(rect, 40 + x, 20 + 160);
      expect(point).not.toBeNull();
      expect(point!.nx).toBeGreaterThanOrEqual(prev);
      expect(point!.ny).toBe(0.5);
      prev = point!.nx;
    }
    expect(prev).toBe(1);
  });
});

describe("MoveThrottle", () => {
  it("passes at most 120 moves per second", () => {
    const throttle = new MoveThrottle(120);
    let passed = 0;
    for (let t = 0; t < 1000; t += 2) {
      if (throttle.allow(t)) {
        passed += 1;
      }
    }
    expect(passed).toBeLessThanOrEqual(120);
    expect(passed).toBeGreaterThanOrEqual(100);
  });

  it("always passes the first event", () => {
    expect(new MoveThrottle(120).allow(0)).toBe(true);
  });

  it("blocks events inside the minimum interval", () => {
    const throttle = new MoveThrottle(100); // 10 ms interval
    expect(throttle.allow(0)).toBe(true);
    expect(throttle.allow(5)).toBe(false);
    expect(throttle.allow(9.9)).toBe(false);
    expect(throttle.allow(10)).toBe(true);
  });
});

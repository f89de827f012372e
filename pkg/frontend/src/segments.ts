// Seven-segment glyph decoding: patterns are bit0=a .. bit6=g.

export const SEGMENT_NAMES = ["a", "b", "c", "d", "e", "f", "g"] as const;
export type SegmentName = (typeof SEGMENT_NAMES)[number];

// Same common-cathode table the device uses.
const HEX_PATTERNS = [
  0x3f, 0x06, 0x5b, 0x4f, 0x66, 0x6d, 0x7d, 0x07,
  0x7f, 0x6f, 0x77, 0x7c, 0x39, 0x5e, 0x79, 0x71,
];

const PATTERN_TO_CHAR = new Map<number, string>(
  HEX_PATTERNS.map((pattern, digit) => [pattern, digit.toString(16).toUpperCase()]),
);

export function segmentsLit(pattern: number): boolean[] {
  if (pattern < 0 || pattern > 0x7f || !Number.isInteger(pattern)) {
    throw new Error(`pattern ${pattern} outside 7-bit range`);
  }
  return SEGMENT_NAMES.map((_, i) => ((pattern >> i) & 1) === 1);
}

export function patternToHexChar(pattern: number): string {
  return PATTERN_TO_CHAR.get(pattern) ?? "?";
}

export function bankText(digits: number[]): string {
  const chars = digits.map(patternToHexChar);
  return `${chars.slice(0, 3).join("")} ${chars.slice(3, 6).join("")}`;
}

// Segment boxes in a 10x18 viewBox, used to draw the glyphs as SVG rects.
export const SEGMENT_BOXES: Record<SegmentName, { x: number; y: number; w: number; h: number }> = {
  a: { x: 2, y: 0, w: 6, h: 2 },
  b: { x: 8, y: 2, w: 2, h: 6 },
  c: { x: 8, y: 10, w: 2, h: 6 },
  d: { x: 2, y: 16, w: 6, h: 2 },
  e: { x: 0, y: 10, w: 2, h: 6 },
  f: { x: 0, y: 2, w: 2, h: 6 },
  g: { x: 2, y: 8, w: 6, h: 2 },
};

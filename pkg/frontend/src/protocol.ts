// Wire types for the bridge protocol (see ../protocol.md).

export const BUTTON_IDS = [
  "power-adaptor",
  "power-battery",
  "power-off",
  "draw",
  "erase",
  "draw-bold",
  "erase-bold",
  "color-toggle",
  "clear",
] as const;

export type ButtonId = (typeof BUTTON_IDS)[number];
export type PointerPhase = "down" | "move" | "up";
export type PowerState = "off" | "adaptor" | "battery";

export interface StatusMsg {
  kind: "status";
  power: PowerState;
  mode: string;
  color: "red" | "blue";
  battery_charge: number | null;
  low_battery: boolean;
}

export interface SevenSegMsg {
  kind: "sevenseg";
  digits: number[];
  text: string;
}

export interface ErrorMsg {
  kind: "error";
  field: string;
  error: string;
}

export type ServerTextMsg = StatusMsg | SevenSegMsg | ErrorMsg;

export interface Frame {
  seq: number;
  width: number;
  height: number;
  pixels: Uint8Array; // RGB rows, top to bottom
}

const FRAME_HEADER_BYTES = 12;
const FRAME_MAGIC = "FRME";

export function decodeFrame(data: ArrayBuffer): Frame {
  if (data.byteLength < FRAME_HEADER_BYTES) {
    throw new Error(`frame too short: ${data.byteLength} bytes`);
  }
  const view = new DataView(data);
  const magic = String.fromCharCode(view.getUint8(0), view.getUint8(1), view.getUint8(2), view.getUint8(3));
  if (magic !== FRAME_MAGIC) {
    throw new Error(`bad frame magic ${JSON.stringify(magic)}`);
  }
  const seq = view.getUint32(4);
  const width = view.getUint16(8);
  const height = view.getUint16(10);
  const expected = FRAME_HEADER_BYTES + width * height * 3;
  if (data.byteLength !== expected) {
    throw new Error(`frame payload is ${data.byteLength} bytes, expected ${expected}`);
  }
  return { seq, width, height, pixels: new Uint8Array(data, FRAME_HEADER_BYTES) };
}

export function parseServerText(text: string): ServerTextMsg {
  const msg = JSON.parse(text) as { kind?: string };
  if (msg && (msg.kind === "status" || msg.kind === "sevenseg" || msg.kind === "error")) {
    return msg as ServerTextMsg;
  }
  throw new Error(`unknown server message kind ${JSON.stringify(msg?.kind)}`);
}

export function buttonMsg(id: ButtonId): string {
  return JSON.stringify({ kind: "button", id });
}

export function pointerMsg(phase: PointerPhase, nx?: number, ny?: number): string {
  if (phase === "up") {
    return JSON.stringify({ kind: "pointer", phase });
  }
  return JSON.stringify({ kind: "pointer", phase, nx, ny });
}

const POWER_BUTTONS: ReadonlySet<ButtonId> = new Set(["power-adaptor", "power-battery", "power-off"]);

// Everything but the power buttons is inert until the board is powered;
// with no status yet the whole panel stays disabled.
export function buttonsEnabled(status: StatusMsg | null): Record<ButtonId, boolean> {
  const enabled = {} as Record<ButtonId, boolean>;
  for (const id of BUTTON_IDS) {
    if (status === null) {
      enabled[id] = false;
    } else {
      enabled[id] = status.power !== "off" || POWER_BUTTONS.has(id);
    }
  }
  return enabled;
}

export function extractRow(frame: Frame, row: number): Uint8Array {
  if (row < 0 || row >= frame.height) {
    throw new Error(`row ${row} outside 0..${frame.height - 1}`);
  }
  const stride = frame.width * 3;
  return frame.pixels.slice(row * stride, (row + 1) * stride);
}

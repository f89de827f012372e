// End-to-end against a live bridge: a scripted pointer drag across the
// canvas center must paint exactly what the server's PPM snapshot holds.

import { ChildProcess, spawn } from "node:child_process";
import { createServer } from "node:net";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { DeviceClient, SocketHandlers } from "../src/client.js";
import { Frame, buttonsEnabled, extractRow } from "../src/protocol.js";
import { frameToRgba, paintedRowRgb } from "../src/view.js";
import { normalizePointer } from "../src/pointer.js";

const REPO_ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..");

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address && typeof address === "object") {
        const port = address.port;
        server.close(() => resolve(port));
      } else {
        reject(new Error("no port"));
      }
    });
  });
}

function nodeSocketFactory(url: string, handlers: SocketHandlers) {
  const ws = new WebSocket(url);
  ws.binaryType = "arraybuffer";
  ws.on("open", () => handlers.onOpen());
  ws.on("message", (data, isBinary) => {
    if (isBinary) {
      handlers.onBinary(data as ArrayBuffer);
    } else {
      handlers.onText(data.toString());
    }
  });
  ws.on("close", () => handlers.onClose());
  ws.on("error", () => ws.close());
  return { send: (data: string) => ws.send(data), close: () => ws.close() };
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function waitFor(check: () => boolean, timeoutMs: number, what: string): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (check()) {
      return;
    }
    await sleep(20);
  }
  throw new Error(`timed out waiting for ${what}`);
}

function parsePpm(bytes: Uint8Array): { width: number; height: number; pixels: Uint8Array } {
  const header = new TextDecoder().decode(bytes.slice(0, 64));
  const match = /^P6\n(\d+) (\d+)\n255\n/.exec(header);
  if (!match) {
    throw new Error(`not a P6 snapshot: ${JSON.stringify(header.slice(0, 20))}`);
  }
  const width = Number(match[1]);
  const height = Number(match[2]);
  const offset = match[0].length;
  return { width, height, pixels: bytes.slice(offset, offset + width * height * 3) };
}

describe("live bridge", () => {
  let bridge: ChildProcess;
  let port: number;
  let baseUrl: string;

  beforeAll(async () => {
    port = await freePort();
    baseUrl = `http://127.0.0.1:${port}`;
    bridge = spawn(
      "python3",
      ["-m", "touchboard.bridge", "--port", String(port), "--max-frame-rate", "500"],
      { cwd: REPO_ROOT, stdio: "ignore" },
    );
    const deadline = Date.now() + 20_000;
    for (;;) {
      try {
        const resp = await fetch(`${baseUrl}/healthz`);
        if (resp.ok) {
          break;
        }
      } catch {
        // not listening yet
      }
      if (Date.now() > deadline) {
        throw new Error("bridge did not come up");
      }
      await sleep(100);
    }
  }, 30_000);

  afterAll(() => {
    bridge?.kill();
  });

  it("paints the dragged center row exactly as the server snapshot", async () => {
    const frames: Frame[] = [];
    const statuses: string[] = [];
    const client = new DeviceClient(
      `ws://127.0.0.1:${port}/ws`,
      {
        onFrame: (f) => frames.push(f),
        onStatus: (s) => statuses.push(s.power),
      },
      nodeSocketFactory,
    );
    client.connect();
    await waitFor(() => client.connection === "open" && frames.length >= 1, 10_000, "first frame");

    // button panel mirrors the status stream
    expect(client.status).not.toBeNull();
    expect(buttonsEnabled(client.status)["draw"]).toBe(false);
    client.sendButton("power-adaptor");
    await waitFor(() => client.status?.power === "adaptor", 5_000, "power on");
    expect(buttonsEnabled(client.status)["draw"]).toBe(true);
    expect(statuses).toContain("adaptor");

    // scripted drag across the canvas center, as the page would emit it
    const rect = { left: 0, top: 0, width: 800, height: 400 };
    const framesBefore = frames.length;
    const start = normalizePointer(rect, 80, 200)!;
    client.sendPointer("down", start.nx, start.ny);
    for (let x = 100; x <= 720; x += 20) {
      const point = normalizePointer(rect, x, 200)!;
      expect(point.ny).toBe(0.5);
      client.sendPointer("move", point.nx, point.ny);
      await sleep(5);
    }
    client.sendPointer("up");

    await waitFor(() => frames.length > framesBefore, 5_000, "stroke frames");
    await sleep(400); // let the trailing samples flush and publish
    const last = frames[frames.length - 1];
    expect(last.width).toBe(800);
    expect(last.height).toBe(400);

    const resp = await fetch(`${baseUrl}/snapshot.ppm`);
    const snapshot = parsePpm(new Uint8Array(await resp.arrayBuffer()));
    expect(snapshot.width).toBe(800);
    expect(snapshot.height).toBe(400);

    // ny = 0.5 quantizes to code 2048, which lands on row 200
    const centerRow = 200;
    const painted = paintedRowRgb(frameToRgba(last), last.width, centerRow);
    const expected = extractRow(
      { seq: 0, width: snapshot.width, height: snapshot.height, pixels: snapshot.pixels },
      centerRow,
    );
    expect(painted.length).toBe(expected.length);
    expect(Buffer.from(painted).equals(Buffer.from(expected))).toBe(true);
    // the stroke actually reached the row: some red pixels present
    let redRun = 0;
    for (let col = 0; col < 800; col++) {
      if (painted[col * 3] === 255 && painted[col * 3 + 1] === 0 && painted[col * 3 + 2] === 0) {
        redRun += 1;
      }
    }
    expect(redRun).toBeGreaterThan(100);

    // frame sequences strictly increased all along
    const seqs = frames.map((f) => f.seq);
    expect([...seqs].sort((a, b) => a - b)).toEqual(seqs);
    expect(new Set(seqs).size).toBe(seqs.length);

    // power off disables the pen buttons again
    client.sendButton("power-off");
    await waitFor(() => client.status?.power === "off", 5_000, "power off");
    expect(buttonsEnabled(client.status)["erase"]).toBe(false);
    expect(buttonsEnabled(client.status)["power-adaptor"]).toBe(true);

    client.close();
  }, 40_000);
});

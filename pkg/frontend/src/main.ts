// DOM wiring for the whiteboard page. All drawing state lives on the server;
// this file only forwards pointer/button input and paints what comes back.

import { DeviceClient, browserSocketFactory } from "./client.js";
import { MoveThrottle, normalizePointer } from "./pointer.js";
import { BUTTON_IDS, ButtonId, buttonsEnabled, Frame, StatusMsg } from "./protocol.js";
import { SEGMENT_BOXES, SEGMENT_NAMES, segmentsLit } from "./segments.js";
import { frameToRgba } from "./view.js";

const BUTTON_LABELS: Record<ButtonId, string> = {
  "power-adaptor": "Power (adaptor)",
  "power-battery": "Power (battery)",
  "power-off": "Power off",
  draw: "Draw",
  erase: "Erase",
  "draw-bold": "Draw bold",
  "erase-bold": "Erase bold",
  "color-toggle": "Red / Blue",
  clear: "Clear",
};

function serverUrl(): string {
  const params = new URLSearchParams(window.location.search);
  const host = params.get("server") ?? window.location.host;
  return `ws://${host}/ws`;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function get2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    throw new Error("no 2d context");
  }
  return ctx;
}

function setupSevenSeg(container: HTMLElement): SVGRectElement[][] {
  const svgns = "http://www.w3.org/2000/svg";
  const digits: SVGRectElement[][] = [];
  for (let d = 0; d < 6; d++) {
    const svg = document.createElementNS(svgns, "svg");
    svg.setAttribute("viewBox", "-1 -1 12 20");
    svg.classList.add("segdigit");
    if (d === 3) {
      svg.classList.add("bankgap");
    }
    const rects: SVGRectElement[] = [];
    for (const name of SEGMENT_NAMES) {
      const box = SEGMENT_BOXES[name];
      const rect = document.createElementNS(svgns, "rect");
      rect.setAttribute("x", String(box.x));
      rect.setAttribute("y", String(box.y));
      rect.setAttribute("width", String(box.w));
      rect.setAttribute("height", String(box.h));
      rect.classList.add("seg");
      svg.appendChild(rect);
      rects.push(rect);
    }
    container.appendChild(svg);
    digits.push(rects);
  }
  return digits;
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("board");
  const ctx = get2d(canvas);
  ctx.imageSmoothingEnabled = false;

  const offscreen = document.createElement("canvas");
  const offctx = get2d(offscreen);

  const statusLine = el<HTMLElement>("status");
  const connLine = el<HTMLElement>("connection");
  const segText = el<HTMLElement>("segtext");
  const segDigits = setupSevenSeg(el<HTMLElement>("sevenseg"));

  const panel = el<HTMLElement>("buttons");
  const buttons = new Map<ButtonId, HTMLButtonElement>();
  for (const id of BUTTON_IDS) {
    const button = document.createElement("button");
    button.textContent = BUTTON_LABELS[id];
    button.disabled = true;
    button.addEventListener("click", () => client.sendButton(id));
    panel.appendChild(button);
    buttons.set(id, button);
  }

  function paintFrame(frame: Frame): void {
    offscreen.width = frame.width;
    offscreen.height = frame.height;
    const image = offctx.createImageData(frame.width, frame.height);
    image.data.set(frameToRgba(frame));
    offctx.putImageData(image, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(offscreen, 0, 0, canvas.width, canvas.height);
  }

  function showStatus(status: StatusMsg): void {
    const battery =
      status.battery_charge === null
        ? ""
        : ` battery ${(status.battery_charge * 100).toFixed(1)}%${status.low_battery ? " LOW" : ""}`;
    statusLine.textContent = `power: ${status.power}  mode: ${status.mode}  color: ${status.color}${battery}`;
    statusLine.dataset.color = status.color;
    const enabled = buttonsEnabled(status);
    for (const [id, button] of buttons) {
      button.disabled = !enabled[id];
    }
  }

  const client = new DeviceClient(
    serverUrl(),
    {
      onFrame: paintFrame,
      onStatus: showStatus,
      onSevenSeg: (msg) => {
        segText.textContent = msg.text;
        msg.digits.slice(0, 6).forEach((pattern, d) => {
          segmentsLit(pattern).forEach((lit, s) => {
            segDigits[d][s].classList.toggle("lit", lit);
          });
        });
      },
      onConnection: (state) => {
        connLine.textContent = state;
        connLine.dataset.state = state;
        if (state !== "open") {
          for (const button of buttons.values()) {
            button.disabled = true;
          }
        }
      },
      onServerError: (err) => {
        connLine.textContent = `open (rejected ${err.field}: ${err.error})`;
      },
    },
    browserSocketFactory,
  );

  const throttle = new MoveThrottle(120);
  let penDown = false;

  function forward(phase: "down" | "move", ev: PointerEvent): void {
    const rect = canvas.getBoundingClientRect();
    const point = normalizePointer(
      { left: rect.left, top: rect.top, width: rect.width, height: rect.height },
      ev.clientX,
      ev.clientY,
    );
    if (!point) {
      return;
    }
    if (phase === "move" && !throttle.allow(performance.now())) {
      return;
    }
    client.sendPointer(phase, point.nx, point.ny);
  }

  canvas.addEventListener("pointerdown", (ev) => {
    canvas.setPointerCapture(ev.pointerId);
    penDown = true;
    forward("down", ev);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (penDown) {
      forward("move", ev);
    }
  });
  const lift = () => {
    if (penDown) {
      penDown = false;
      client.sendPointer("up");
    }
  };
  canvas.addEventListener("pointerup", lift);
  canvas.addEventListener("pointercancel", lift);
  canvas.addEventListener("pointerleave", lift);

  client.connect();
}

main();

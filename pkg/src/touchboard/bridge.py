"""Live bridge: one shared simulated device served over WebSocket.

All inbound messages funnel into a single queue consumed by one worker, so
device state transitions are totally ordered no matter how many clients are
connected. Frames go out as binary messages only when the framebuffer
content actually changed, rate-limited, and are dropped for slow clients
rather than stalling the device. See protocol.md for the wire format.
"""

from __future__ import annotations

import argparse
import asyncio
import contextlib
import json
import socket
import struct
import sys
import time
from pathlib import Path

import uvicorn
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles

from .device import ButtonId, Device, TraceEvent
from .touch_path import PenInput, PenPhase
from .video_out import export_ppm

DEFAULT_PORT = 8943
FRAME_MAGIC = b"FRME"
FRAME_HEADER = struct.Struct(">4sIHH")  # magic, seq, width, height
CLIENT_QUEUE_SIZE = 32


class InboundError(ValueError):
    """Rejected client message; names the offending field."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(message)
        self.field = field


def encode_frame(seq: int, fb) -> bytes:
    return FRAME_HEADER.pack(FRAME_MAGIC, seq, fb.width, fb.height) + fb.to_bytes()


def parse_inbound(text: str) -> TraceEvent:
    """Validate a client JSON message into a device event (tick filled later)."""
    try:
        msg = json.loads(text)
    except json.JSONDecodeError as e:
        raise InboundError("payload", f"not valid JSON: {e}") from None
    if not isinstance(msg, dict):
        raise InboundError("payload", "expected a JSON object")
    kind = msg.get("kind")
    if kind == "button":
        try:
            button = ButtonId(msg.get("id"))
        except ValueError:
            raise InboundError("id", f"unknown button id {msg.get('id')!r}") from None
        return TraceEvent(0, button=button)
    if kind == "pointer":
        try:
            phase = PenPhase(msg.get("phase"))
        except ValueError:
            raise InboundError("phase", f"unknown pointer phase {msg.get('phase')!r}") from None
        if phase is PenPhase.UP:
            return TraceEvent(0, pen=PenInput(phase))
        nx, ny = msg.get("nx"), msg.get("ny")
        if not isinstance(nx, (int, float)) or isinstance(nx, bool):
            raise InboundError("nx", "nx must be a number in [0, 1]")
        if not isinstance(ny, (int, float)) or isinstance(ny, bool):
            raise InboundError("ny", "ny must be a number in [0, 1]")
        if not 0.0 <= nx <= 1.0:
            raise InboundError("nx", f"nx {nx} outside [0, 1]")
        if not 0.0 <= ny <= 1.0:
            raise InboundError("ny", f"ny {ny} outside [0, 1]")
        return TraceEvent(0, pen=PenInput(phase, float(nx), float(ny)))
    raise InboundError("kind", f"unknown message kind {kind!r}")


class DeviceHub:
    """Single owner of the device; handlers only enqueue in and fan out."""

    def __init__(
        self,
        device: Device | None = None,
        max_frame_rate: float = 30.0,
        idle_tick_hz: float = 240.0,
    ) -> None:
        self.device = device or Device()
        self.inbound: asyncio.Queue[TraceEvent] = asyncio.Queue()
        self.max_frame_rate = max_frame_rate
        self.idle_tick_hz = idle_tick_hz
        self.frame_seq = 0
        self._clients: dict[int, asyncio.Queue] = {}
        self._next_client_id = 0
        self._published_fb_version = None
        self._published_hash: str | None = None
        self._published_digits: bytes | None = None
        self._published_status: str | None = None
        self._last_frame_at = 0.0
        self._fb_dirty = False

    # -- client fan-out ----------------------------------------------------

    def register(self) -> tuple[int, asyncio.Queue]:
        cid = self._next_client_id
        self._next_client_id += 1
        queue: asyncio.Queue = asyncio.Queue(maxsize=CLIENT_QUEUE_SIZE)
        self._clients[cid] = queue
        # current state snapshot so a fresh client can paint immediately
        if self._published_hash is None:
            self.frame_seq += 1
            self._published_hash = self.device.fb.content_hash()
            self._published_fb_version = self.device.fb.version
            self._published_digits = self.device.digits.packed()
            self._published_status = self._status_json()
        queue.put_nowait(("text", self._published_status or self._status_json()))
        queue.put_nowait(("text", self._sevenseg_json()))
        queue.put_nowait(("binary", encode_frame(self.frame_seq, self.device.fb)))
        return cid, queue

    def unregister(self, cid: int) -> None:
        self._clients.pop(cid, None)

    def _broadcast(self, kind: str, payload) -> None:
        for queue in self._clients.values():
            try:
                queue.put_nowait((kind, payload))
            except asyncio.QueueFull:
                pass  # slow client: drop, never stall

    # -- outbound payloads ---------------------------------------------------

    def _status_json(self) -> str:
        dev = self.device
        return json.dumps(
            {
                "kind": "status",
                "power": dev.power.value,
                "mode": dev.mode.value,
                "color": dev.color.name.lower(),
                "battery_charge": dev.battery_charge,
                "low_battery": dev.low_battery,
            }
        )

    def _sevenseg_json(self) -> str:
        return json.dumps(
            {
                "kind": "sevenseg",
                "digits": list(self.device.digits.packed()),
                "text": self.device.digits.hex_text(),
            }
        )

    def _publish_changes(self) -> None:
        status = self._status_json()
        if status != self._published_status:
            self._published_status = status
            self._broadcast("text", status)
        digits = self.device.digits.packed()
        if digits != self._published_digits:
            self._published_digits = digits
            self._broadcast("text", self._sevenseg_json())
        if self.device.fb.version != self._published_fb_version:
            self._published_fb_version = self.device.fb.version
            self._fb_dirty = True
        if not self._fb_dirty:
            return
        now = time.monotonic()
        if self.max_frame_rate > 0 and (now - self._last_frame_at) < 1.0 / self.max_frame_rate:
            return  # keep the dirty flag; the idle loop retries
        content = self.device.fb.content_hash()
        self._fb_dirty = False
        if content == self._published_hash:
            return  # writes repainted identical content
        self._published_hash = content
        self._last_frame_at = now
        self.frame_seq += 1
        self._broadcast("binary", encode_frame(self.frame_seq, self.device.fb))

    # -- worker --------------------------------------------------------------

    async def run(self) -> None:
        """Serialize every mutation: one event or one idle tick per iteration."""
        idle_wait = 1.0 / self.idle_tick_hz
        while True:
            ev = None if self.inbound.empty() else self.inbound.get_nowait()
            self.device.step(ev)
            self._publish_changes()
            # yield immediately while inputs are queued, pace idle ticks otherwise
            await asyncio.sleep(0 if ev is not None else idle_wait)


def create_app(hub: DeviceHub | None = None, static_dir: str | Path | None = None) -> FastAPI:
    hub = hub or DeviceHub()

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        worker = asyncio.create_task(hub.run())
        yield
        worker.cancel()
        with contextlib.suppress(asyncio.CancelledError):
            await worker

    app = FastAPI(lifespan=lifespan)
    app.state.hub = hub

    @app.get("/healthz")
    async def healthz():
        return {
            "status": "ok",
            "clients": len(hub._clients),
            "tick": hub.device.tick_count,
            "power": hub.device.power.value,
        }

    @app.get("/snapshot.ppm")
    async def snapshot():
        return Response(export_ppm(hub.device.fb), media_type="image/x-portable-pixmap")

    @app.websocket("/ws")
    async def ws(websocket: WebSocket):
        await websocket.accept()
        cid, queue = hub.register()

        async def pump_out():
            while True:
                kind, payload = await queue.get()
                if kind == "binary":
                    await websocket.send_bytes(payload)
                else:
                    await websocket.send_text(payload)

        sender = asyncio.create_task(pump_out())
        try:
            while True:
                text = await websocket.receive_text()
                try:
                    event = parse_inbound(text)
                except InboundError as e:
                    reply = json.dumps({"kind": "error", "field": e.field, "error": str(e)})
                    with contextlib.suppress(asyncio.QueueFull):
                        queue.put_nowait(("text", reply))
                    continue
                await hub.inbound.put(event)
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender
            hub.unregister(cid)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="touchboard-bridge", description=__doc__.splitlines()[0])
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=DEFAULT_PORT)
    parser.add_argument("--static", default=None, help="directory of UI assets to serve at /")
    parser.add_argument("--max-frame-rate", type=float, default=30.0)
    args = parser.parse_args(argv)

    # fail fast with a distinct code when the port is taken
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.host, args.port))
    except OSError as e:
        print(f"error: cannot bind {args.host}:{args.port}: {e}", file=sys.stderr)
        return 5
    finally:
        probe.close()

    hub = DeviceHub(max_frame_rate=args.max_frame_rate)
    app = create_app(hub, static_dir=args.static)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit):
        print(f"error: cannot serve on {args.host}:{args.port}", file=sys.stderr)
        return 5
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Main and delay control: the assembled machine, its buttons, and trace replay.

One device step is one pen sample slot. Pen events pass through the sampler
into a delay line and reach the coordinate store a fixed number of ticks
later; the newest stored sample drives the drawing engine and the digit
readout within the same step. Everything is deterministic: a trace replay is
a pure function of the trace.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .coord_store import CoordRegisterFile, DEFAULT_CAPACITY
from .render import Framebuffer, PenColor, PenMode, apply_stroke_step
from .sevenseg import DigitBank, bank_zero, display_sample
from .touch_path import PenInput, PenPhase, PenSampler, TouchSample

DEFAULT_DELAY_DEPTH = 2
BATTERY_DRAIN_PER_TICK = 1e-6
LOW_BATTERY_LEVEL = 0.05


class PowerMode(enum.Enum):
    OFF = "off"
    ADAPTOR = "adaptor"
    BATTERY = "battery"


class ButtonId(enum.Enum):
    POWER_ADAPTOR = "power-adaptor"
    POWER_BATTERY = "power-battery"
    POWER_OFF = "power-off"
    DRAW = "draw"
    ERASE = "erase"
    DRAW_BOLD = "draw-bold"
    ERASE_BOLD = "erase-bold"
    COLOR_TOGGLE = "color-toggle"
    CLEAR = "clear"


_MODE_BUTTONS = {
    ButtonId.DRAW: PenMode.DRAW,
    ButtonId.ERASE: PenMode.ERASE,
    ButtonId.DRAW_BOLD: PenMode.DRAW_BOLD,
    ButtonId.ERASE_BOLD: PenMode.ERASE_BOLD,
}


class TraceOrderError(ValueError):
    """Event timestamps in a trace went backwards."""


class TraceParseError(ValueError):
    """A trace line could not be parsed; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class TraceEvent:
    """One scheduled input: a button press or a pen event, never both."""

    at: int
    button: ButtonId | None = None
    pen: PenInput | None = None

    def __post_init__(self) -> None:
        if self.at < 0:
            raise ValueError("event tick must be non-negative")
        if (self.button is None) == (self.pen is None):
            raise ValueError("event needs exactly one of button or pen")

    @classmethod
    def press(cls, at: int, button: ButtonId) -> "TraceEvent":
        return cls(at, button=button)

    @classmethod
    def pen_event(cls, at: int, phase: PenPhase, nx: float | None = None, ny: float | None = None) -> "TraceEvent":
        return cls(at, pen=PenInput(phase, nx, ny))


class DelayLine:
    """FIFO where a value written at tick t becomes readable at t + depth."""

    def __init__(self, depth: int = DEFAULT_DELAY_DEPTH) -> None:
        if depth < 1:
            raise ValueError("delay depth must be positive")
        self.depth = depth
        self._queue: deque[tuple[int, TouchSample]] = deque()

    def __len__(self) -> int:
        return len(self._queue)

    def push(self, value: TouchSample, now: int) -> None:
        self._queue.append((now + self.depth, value))

    def pop_due(self, now: int) -> list[TouchSample]:
        out = []
        while self._queue and self._queue[0][0] <= now:
            out.append(self._queue.popleft()[1])
        return out

    def clear(self) -> None:
        self._queue.clear()


class Device:
    """The whole machine: power and pen-mode state, stores, and output banks."""

    def __init__(
        self,
        delay_depth: int = DEFAULT_DELAY_DEPTH,
        store_capacity: int = DEFAULT_CAPACITY,
        battery_drain: float = BATTERY_DRAIN_PER_TICK,
    ) -> None:
        self.power = PowerMode.OFF
        self.mode = PenMode.DRAW
        self.color = PenColor.RED
        self.store = CoordRegisterFile(store_capacity)
        self.fb = Framebuffer()
        self.digits = bank_zero()
        self.prev_sample: TouchSample | None = None
        self.tick_count = 0
        self.battery_charge: float | None = None
        self.battery_drain = battery_drain
        self.delay = DelayLine(delay_depth)
        self._sampler = PenSampler()

    @property
    def powered(self) -> bool:
        return self.power is not PowerMode.OFF

    @property
    def low_battery(self) -> bool:
        return self.power is PowerMode.BATTERY and self.battery_charge < LOW_BATTERY_LEVEL

    def press(self, button: ButtonId) -> None:
        """Apply one button; mode, color and clear are no-ops while off."""
        if button is ButtonId.POWER_OFF:
            self._power_off()
        elif button is ButtonId.POWER_ADAPTOR:
            self._power_on(PowerMode.ADAPTOR)
        elif button is ButtonId.POWER_BATTERY:
            self._power_on(PowerMode.BATTERY)
        elif not self.powered:
            return
        elif button in _MODE_BUTTONS:
            self.mode = _MODE_BUTTONS[button]
        elif button is ButtonId.COLOR_TOGGLE:
            self.color = self.color.toggled()
        elif button is ButtonId.CLEAR:
            self.fb.clear()

    def _power_on(self, target: PowerMode) -> None:
        if self.power is PowerMode.OFF:
            # fresh session: blank surface, default pen
            self.fb.clear()
            self.store.reset()
            self.delay.clear()
            self.digits = bank_zero()
            self.prev_sample = None
            self.mode = PenMode.DRAW
            self.color = PenColor.RED
        if target is PowerMode.BATTERY:
            if self.power is not PowerMode.BATTERY:
                self.battery_charge = 1.0
        else:
            self.battery_charge = None
        self.power = target

    def _power_off(self) -> None:
        self.power = PowerMode.OFF
        self.battery_charge = None
        self.fb.clear()
        self.store.reset()
        self.delay.clear()
        self.digits = bank_zero()
        self.prev_sample = None
        self._sampler.reset_position()

    def step(self, ev: TraceEvent | None = None) -> None:
        """Advance one tick, optionally ingesting an event; flush due samples."""
        self.tick_count += 1
        if self.power is PowerMode.BATTERY:
            self.battery_charge = max(0.0, self.battery_charge - self.battery_drain)
        if ev is not None:
            if ev.button is not None:
                self.press(ev.button)
            elif self.powered:
                self.delay.push(self._sampler.sample_pen(ev.pen), self.tick_count)
        for sample in self.delay.pop_due(self.tick_count):
            self._consume(sample)

    def _consume(self, sample: TouchSample) -> None:
        self.store.write_sample(sample)
        if sample.pen_down:
            apply_stroke_step(self.fb, self.prev_sample, sample, self.mode, self.color)
        self.digits = display_sample(sample)
        self.prev_sample = sample


@dataclass(frozen=True)
class FrameLogEntry:
    index: int
    at: int
    fb_hash: str
    digits: str


@dataclass
class TraceRun:
    device: Device
    log: tuple[FrameLogEntry, ...]


def run_trace(
    events: Sequence[TraceEvent],
    delay_depth: int = DEFAULT_DELAY_DEPTH,
    store_capacity: int = DEFAULT_CAPACITY,
    on_event: Callable[[int, Device], None] | None = None,
) -> TraceRun:
    """Replay events with idle fills between timestamps, logging fb state per event.

    The delay line is drained with idle ticks after the last event so trailing
    strokes always land on the framebuffer.
    """
    events = list(events)
    for prev, cur in zip(events, events[1:]):
        if cur.at < prev.at:
            raise TraceOrderError(f"event at tick {cur.at} after tick {prev.at}")
    dev = Device(delay_depth=delay_depth, store_capacity=store_capacity)
    log: list[FrameLogEntry] = []
    for i, ev in enumerate(events):
        while dev.tick_count < ev.at:
            dev.step()
        dev.step(ev)
        log.append(FrameLogEntry(i, dev.tick_count, dev.fb.content_hash(), dev.digits.hex_text()))
        if on_event is not None:
            on_event(i, dev)
    for _ in range(dev.delay.depth):
        dev.step()
    return TraceRun(dev, tuple(log))


def parse_trace(text: str) -> list[TraceEvent]:
    """Parse line-delimited events: '<tick> button <id>' or '<tick> pen <phase> [nx ny]'."""
    events = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) < 2:
            raise TraceParseError(line_no, "expected '<tick> button|pen ...'")
        try:
            at = int(fields[0])
        except ValueError:
            raise TraceParseError(line_no, f"bad tick {fields[0]!r}") from None
        if at < 0:
            raise TraceParseError(line_no, "tick must be non-negative")
        kind = fields[1]
        if kind == "button":
            if len(fields) != 3:
                raise TraceParseError(line_no, "expected '<tick> button <id>'")
            try:
                button = ButtonId(fields[2])
            except ValueError:
                raise TraceParseError(line_no, f"unknown button {fields[2]!r}") from None
            events.append(TraceEvent.press(at, button))
        elif kind == "pen":
            if len(fields) < 3:
                raise TraceParseError(line_no, "expected '<tick> pen <down|move|up> [nx ny]'")
            try:
                phase = PenPhase(fields[2])
            except ValueError:
                raise TraceParseError(line_no, f"unknown pen phase {fields[2]!r}") from None
            if phase is PenPhase.UP:
                if len(fields) != 3:
                    raise TraceParseError(line_no, "pen up takes no position")
                events.append(TraceEvent.pen_event(at, phase))
            else:
                if len(fields) != 5:
                    raise TraceParseError(line_no, f"pen {phase.value} needs nx and ny")
                try:
                    nx, ny = float(fields[3]), float(fields[4])
                except ValueError:
                    raise TraceParseError(line_no, "positions must be numbers") from None
                events.append(TraceEvent.pen_event(at, phase, nx, ny))
        else:
            raise TraceParseError(line_no, f"unknown event kind {kind!r}")
    return events


def load_trace(path: str | Path) -> list[TraceEvent]:
    return parse_trace(Path(path).read_text(encoding="utf-8"))


def _pen_path(start: int, points: Iterable[tuple[float, float]], up_gap: int = 3) -> list[TraceEvent]:
    """Down at the first point, moves each tick after, up after a settle gap."""
    points = list(points)
    events = [TraceEvent.pen_event(start, PenPhase.DOWN, *points[0])]
    at = start
    for nx, ny in points[1:]:
        at += 1
        events.append(TraceEvent.pen_event(at, PenPhase.MOVE, nx, ny))
    events.append(TraceEvent.pen_event(at + up_gap, PenPhase.UP))
    return events


def tasks8_events() -> tuple[list[TraceEvent], dict[int, tuple[int, int]]]:
    """The canonical 8-task operator script and each task's event-index span.

    Tasks: power on in adaptor mode; restart in battery mode; draw a stroke;
    erase that stroke; draw a bold stroke; erase it in bold; switch color and
    draw; clear and shut down. Pen-up events sit a few ticks after the last
    move so in-flight samples land before each task boundary hash.
    """
    stroke = [(0.2, 0.3), (0.3, 0.35), (0.4, 0.4), (0.5, 0.5)]
    bold_stroke = [(0.6, 0.2), (0.65, 0.3), (0.7, 0.45), (0.75, 0.6)]
    color_stroke = [(0.3, 0.6), (0.45, 0.62), (0.6, 0.64)]

    groups: list[list[TraceEvent]] = [
        [TraceEvent.press(0, ButtonId.POWER_ADAPTOR)],
        [TraceEvent.press(5, ButtonId.POWER_OFF), TraceEvent.press(10, ButtonId.POWER_BATTERY)],
        [TraceEvent.press(15, ButtonId.DRAW), *_pen_path(20, stroke)],
        [TraceEvent.press(30, ButtonId.ERASE), *_pen_path(35, stroke)],
        [TraceEvent.press(45, ButtonId.DRAW_BOLD), *_pen_path(50, bold_stroke)],
        [TraceEvent.press(60, ButtonId.ERASE_BOLD), *_pen_path(65, bold_stroke)],
        [
            TraceEvent.press(75, ButtonId.COLOR_TOGGLE),
            TraceEvent.press(76, ButtonId.DRAW),
            *_pen_path(80, color_stroke),
        ],
        [TraceEvent.press(90, ButtonId.CLEAR), TraceEvent.press(95, ButtonId.POWER_OFF)],
    ]

    events: list[TraceEvent] = []
    spans: dict[int, tuple[int, int]] = {}
    for task_no, group in enumerate(groups, start=1):
        first = len(events)
        events.extend(group)
        spans[task_no] = (first, len(events) - 1)
    return events, spans

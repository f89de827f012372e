"""Touch acquisition path: resistive panel positions in, committed 12-bit samples out.

The panel side quantizes a normalized pen position to a 12-bit code; the
controller side clocks that code over a 24-bit serial transaction (8 command
clocks, 1 busy clock, 12 data bits MSB-first, 3 pad zeros) and reassembles it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

ADC_BITS = 12
ADC_MAX = (1 << ADC_BITS) - 1
FULL_SCALE = 1 << ADC_BITS

CMD_X = 0xD0
CMD_Y = 0x90

TRANSACTION_BITS = 24
BUSY_BIT = 8
DATA_BITS = slice(9, 21)
PAD_BITS = slice(21, 24)


class MalformedTransaction(ValueError):
    """Busy or pad clocks carried unexpected values: the wire is desynchronized."""


class Channel(enum.Enum):
    X = CMD_X
    Y = CMD_Y


class PenPhase(enum.Enum):
    DOWN = "down"
    MOVE = "move"
    UP = "up"


@dataclass(frozen=True)
class PenInput:
    """A pen event on the active area; positions are clamped into [0, 1]."""

    phase: PenPhase
    nx: float | None = None
    ny: float | None = None

    def __post_init__(self) -> None:
        if self.phase is PenPhase.UP:
            if self.nx is not None or self.ny is not None:
                raise ValueError("pen-up carries no panel position")
            return
        if self.nx is None or self.ny is None:
            raise ValueError(f"pen-{self.phase.value} needs a panel position")
        object.__setattr__(self, "nx", min(max(self.nx, 0.0), 1.0))
        object.__setattr__(self, "ny", min(max(self.ny, 0.0), 1.0))

    @property
    def touching(self) -> bool:
        return self.phase is not PenPhase.UP


@dataclass(frozen=True)
class SpiTransaction:
    """One serial exchange: a command byte out, 24 clocked bits back, one code."""

    control_byte: int
    clocked_bits: tuple[int, ...]
    result: int


@dataclass(frozen=True)
class TouchSample:
    """A committed coordinate pair; pen-up samples hold the last valid codes."""

    pen_down: bool
    x: int
    y: int
    seq: int

    def __post_init__(self) -> None:
        _check_code(self.x)
        _check_code(self.y)


def _check_code(code: int) -> None:
    if not 0 <= code <= ADC_MAX:
        raise ValueError(f"code {code} outside 12-bit range")


def quantize(n: float) -> int:
    """Map a normalized position in [0, 1] to a 12-bit level, full scale clamped."""
    if not 0.0 <= n <= 1.0:
        raise ValueError(f"normalized position {n} outside [0, 1]")
    return min(int(n * FULL_SCALE), ADC_MAX)


def serialize_conversion(code: int, channel: Channel) -> SpiTransaction:
    """Lay one conversion onto the wire: data appears MSB-first on clocks 9..20."""
    _check_code(code)
    data = [(code >> (ADC_BITS - 1 - i)) & 1 for i in range(ADC_BITS)]
    bits = [0] * 8 + [0] + data + [0, 0, 0]
    return SpiTransaction(channel.value, tuple(bits), code)


def deserialize_conversion(t: SpiTransaction) -> int:
    """Reassemble the 12-bit code from a transaction, rejecting desynced wires."""
    if len(t.clocked_bits) != TRANSACTION_BITS:
        raise MalformedTransaction(f"expected {TRANSACTION_BITS} clocked bits, got {len(t.clocked_bits)}")
    if t.clocked_bits[BUSY_BIT] != 0:
        raise MalformedTransaction("busy bit high at data start")
    if any(t.clocked_bits[PAD_BITS]):
        raise MalformedTransaction("pad bits not zero")
    code = 0
    for bit in t.clocked_bits[DATA_BITS]:
        code = (code << 1) | bit
    return code


def _convert(code: int, channel: Channel) -> int:
    # One full wire round trip per channel, as the controller would see it.
    return deserialize_conversion(serialize_conversion(code, channel))


class PenSampler:
    """Front end producing committed samples with a strictly increasing counter.

    Pen-up holds the last conversion rather than zeroing, so downstream
    readouts stay stable between strokes.
    """

    def __init__(self, start_seq: int = 0) -> None:
        self._seq = start_seq
        self._last_x = 0
        self._last_y = 0

    @property
    def seq(self) -> int:
        return self._seq

    def sample_pen(self, pen: PenInput) -> TouchSample:
        if pen.touching:
            self._last_x = _convert(quantize(pen.nx), Channel.X)
            self._last_y = _convert(quantize(pen.ny), Channel.Y)
        self._seq += 1
        return TouchSample(pen.touching, self._last_x, self._last_y, self._seq)

    def reset_position(self) -> None:
        """Drop the held conversion (power-down leaves the readout at zero)."""
        self._last_x = 0
        self._last_y = 0

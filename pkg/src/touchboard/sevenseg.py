"""Seven-segment readout: two banks of three hex digits for the X and Y codes."""

from __future__ import annotations

from dataclasses import dataclass

from .touch_path import TouchSample

# Common-cathode patterns, bit0=a .. bit6=g.
HEX_SEGMENTS = (
    0x3F,  # 0
    0x06,  # 1
    0x5B,  # 2
    0x4F,  # 3
    0x66,  # 4
    0x6D,  # 5
    0x7D,  # 6
    0x07,  # 7
    0x7F,  # 8
    0x6F,  # 9
    0x77,  # A
    0x7C,  # b
    0x39,  # C
    0x5E,  # d
    0x79,  # E
    0x71,  # F
)

_PATTERN_TO_CHAR = {pattern: f"{digit:X}" for digit, pattern in enumerate(HEX_SEGMENTS)}


class OutOfRange(ValueError):
    """Digit value outside the 0..15 table."""


def encode_hex_digit(d: int) -> int:
    if not 0 <= d <= 15:
        raise OutOfRange(f"digit {d} outside 0..15")
    return HEX_SEGMENTS[d]


def split_nibbles(code: int) -> tuple[int, int, int]:
    """Three hex digits of a 12-bit code, most significant first."""
    return (code >> 8) & 0xF, (code >> 4) & 0xF, code & 0xF


@dataclass(frozen=True)
class DigitBank:
    """Six lit patterns: three digits for X, three for Y, MSB first."""

    x_digits: tuple[int, int, int]
    y_digits: tuple[int, int, int]

    def __post_init__(self) -> None:
        for pattern in (*self.x_digits, *self.y_digits):
            if not 0 <= pattern <= 0x7F:
                raise ValueError(f"segment pattern {pattern:#x} outside 7-bit range")

    def packed(self) -> bytes:
        """Six bytes on the wire, X bank then Y bank."""
        return bytes((*self.x_digits, *self.y_digits))

    def hex_text(self) -> str:
        """Human-readable readout, e.g. '800 200' (lit patterns decoded back)."""
        x = "".join(_PATTERN_TO_CHAR[p] for p in self.x_digits)
        y = "".join(_PATTERN_TO_CHAR[p] for p in self.y_digits)
        return f"{x} {y}"


def _encode_code(code: int) -> tuple[int, int, int]:
    hi, mid, lo = split_nibbles(code)
    return encode_hex_digit(hi), encode_hex_digit(mid), encode_hex_digit(lo)


def display_sample(s: TouchSample) -> DigitBank:
    """Split the sample's X and Y codes across the two 3-digit banks."""
    return DigitBank(_encode_code(s.x), _encode_code(s.y))


def bank_zero() -> DigitBank:
    """The powered-down readout: both banks showing 000."""
    zero = encode_hex_digit(0)
    return DigitBank((zero, zero, zero), (zero, zero, zero))

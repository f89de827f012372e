"""Drawing engine: 12-bit codes to pixels, pen modes, stroke rasterization.

Strokes land on an 800x400 grid of 24-bit color. Normal pens stamp a 3x3
square, bold pens 7x7; erase pens stamp the background color. Gaps between
consecutive samples are closed with an integer line walk.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .touch_path import FULL_SCALE, TouchSample

WIDTH = 800
HEIGHT = 400


class PenUp(ValueError):
    """A pixel was requested for a sample with the pen lifted."""


@dataclass(frozen=True)
class Rgb24:
    r: int
    g: int
    b: int

    def __post_init__(self) -> None:
        for name, v in (("r", self.r), ("g", self.g), ("b", self.b)):
            if not 0 <= v <= 255:
                raise ValueError(f"channel {name}={v} outside [0, 255]")


BACKGROUND = Rgb24(255, 255, 255)


class Pixel(NamedTuple):
    col: int
    row: int


class PenMode(enum.Enum):
    DRAW = "draw"
    ERASE = "erase"
    DRAW_BOLD = "draw-bold"
    ERASE_BOLD = "erase-bold"

    @property
    def kernel(self) -> int:
        return 7 if self in (PenMode.DRAW_BOLD, PenMode.ERASE_BOLD) else 3

    @property
    def erases(self) -> bool:
        return self in (PenMode.ERASE, PenMode.ERASE_BOLD)


class PenColor(enum.Enum):
    RED = Rgb24(255, 0, 0)
    BLUE = Rgb24(0, 0, 255)

    def toggled(self) -> "PenColor":
        return PenColor.BLUE if self is PenColor.RED else PenColor.RED


class Framebuffer:
    """The image surface. All writes go through fill_rect or clear, which
    bump a version counter so consumers can detect changes cheaply."""

    width = WIDTH
    height = HEIGHT

    def __init__(self) -> None:
        self._cells = np.empty((HEIGHT, WIDTH, 3), dtype=np.uint8)
        self.version = 0
        self.clear()

    def clear(self) -> None:
        self._cells[:] = (BACKGROUND.r, BACKGROUND.g, BACKGROUND.b)
        self.version += 1

    def get_pixel(self, col: int, row: int) -> Rgb24:
        if not (0 <= col < WIDTH and 0 <= row < HEIGHT):
            raise IndexError(f"pixel ({col}, {row}) outside {WIDTH}x{HEIGHT}")
        r, g, b = self._cells[row, col]
        return Rgb24(int(r), int(g), int(b))

    def fill_rect(self, col0: int, row0: int, col1: int, row1: int, color: Rgb24) -> None:
        """Paint the half-open box [col0, col1) x [row0, row1), clipped to bounds."""
        c0 = max(0, col0)
        r0 = max(0, row0)
        c1 = min(WIDTH, col1)
        r1 = min(HEIGHT, row1)
        if c0 >= c1 or r0 >= r1:
            return
        self._cells[r0:r1, c0:c1] = (color.r, color.g, color.b)
        self.version += 1

    def to_bytes(self) -> bytes:
        """Row-major top-to-bottom RGB triples."""
        return self._cells.tobytes()

    def content_hash(self) -> str:
        return hashlib.sha256(self._cells.tobytes()).hexdigest()

    def copy(self) -> "Framebuffer":
        dup = Framebuffer()
        dup._cells[:] = self._cells
        return dup

    def as_array(self) -> np.ndarray:
        """Read-only view for consumers that serialize the surface."""
        view = self._cells.view()
        view.flags.writeable = False
        return view


def map_to_pixel(s: TouchSample) -> Pixel:
    """Scale a pen-down sample's 12-bit codes onto the 800x400 grid."""
    if not s.pen_down:
        raise PenUp(f"sample seq {s.seq} has the pen lifted")
    return Pixel(s.x * WIDTH // FULL_SCALE, s.y * HEIGHT // FULL_SCALE)


def line_pixels(a: Pixel, b: Pixel) -> list[Pixel]:
    """Integer line from a to b inclusive, a first, 8-connected (Bresenham)."""
    dx = abs(b.col - a.col)
    sx = 1 if a.col < b.col else -1
    dy = -abs(b.row - a.row)
    sy = 1 if a.row < b.row else -1
    err = dx + dy
    col, row = a.col, a.row
    out = [Pixel(col, row)]
    while col != b.col or row != b.row:
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            col += sx
        if e2 <= dx:
            err += dx
            row += sy
        out.append(Pixel(col, row))
    return out


def stamp(fb: Framebuffer, p: Pixel, mode: PenMode, color: PenColor) -> None:
    """Write the mode's square kernel centered at p; erase modes paint background."""
    half = mode.kernel // 2
    paint = BACKGROUND if mode.erases else color.value
    fb.fill_rect(p.col - half, p.row - half, p.col + half + 1, p.row + half + 1, paint)


def apply_stroke_step(
    fb: Framebuffer,
    prev: TouchSample | None,
    cur: TouchSample,
    mode: PenMode,
    color: PenColor,
) -> None:
    """Advance a stroke by one sample, bridging from prev when it was pen-down."""
    if not cur.pen_down:
        raise PenUp(f"sample seq {cur.seq} has the pen lifted")
    if prev is None or not prev.pen_down:
        stamp(fb, map_to_pixel(cur), mode, color)
        return
    for p in line_pixels(map_to_pixel(prev), map_to_pixel(cur)):
        stamp(fb, p, mode, color)

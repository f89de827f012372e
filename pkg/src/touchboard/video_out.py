"""VGA timing generator and frame serializer.

The panel image is 800x400 but the video mode is VESA 800x600@60 (40 MHz
pixel clock), chosen so the 800-pixel width maps 1:1 and the 400 lines sit
letterboxed in the middle of the 600 active lines.

    horizontal: 800 active, 40 front, 128 sync, 88 back   -> 1056 clocks/line
    vertical:   600 active,  1 front,   4 sync, 23 back   ->  628 lines/frame
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .render import BACKGROUND, Framebuffer, Rgb24

PPM_MAXVAL = 255


class DimensionMismatch(ValueError):
    """The framebuffer handed to the serializer has the wrong shape."""


@dataclass(frozen=True)
class VgaTimingParams:
    h_active: int = 800
    h_front: int = 40
    h_sync: int = 128
    h_back: int = 88
    v_active: int = 600
    v_front: int = 1
    v_sync: int = 4
    v_back: int = 23
    pixel_clock_hz: int = 40_000_000

    def __post_init__(self) -> None:
        for name, v in vars(self).items():
            if v <= 0:
                raise ValueError(f"{name} must be positive, got {v}")

    @property
    def h_total(self) -> int:
        return self.h_active + self.h_front + self.h_sync + self.h_back

    @property
    def v_total(self) -> int:
        return self.v_active + self.v_front + self.v_sync + self.v_back

    @property
    def ticks_per_frame(self) -> int:
        return self.h_total * self.v_total

    @property
    def refresh_hz(self) -> float:
        return self.pixel_clock_hz / self.ticks_per_frame

    # sync windows, half-open
    @property
    def hsync_start(self) -> int:
        return self.h_active + self.h_front

    @property
    def hsync_end(self) -> int:
        return self.hsync_start + self.h_sync

    @property
    def vsync_start(self) -> int:
        return self.v_active + self.v_front

    @property
    def vsync_end(self) -> int:
        return self.vsync_start + self.v_sync


VESA_800X600_60 = VgaTimingParams()


class VgaTick(NamedTuple):
    h_count: int
    v_count: int
    hsync: bool
    vsync: bool
    active: bool


def make_tick(h: int, v: int, params: VgaTimingParams = VESA_800X600_60) -> VgaTick:
    if not (0 <= h < params.h_total and 0 <= v < params.v_total):
        raise ValueError(f"tick ({h}, {v}) outside {params.h_total}x{params.v_total}")
    return VgaTick(
        h,
        v,
        params.hsync_start <= h < params.hsync_end,
        params.vsync_start <= v < params.vsync_end,
        h < params.h_active and v < params.v_active,
    )


def origin_tick(params: VgaTimingParams = VESA_800X600_60) -> VgaTick:
    return make_tick(0, 0, params)


def advance(t: VgaTick, params: VgaTimingParams = VESA_800X600_60) -> VgaTick:
    """Step one pixel clock: h wraps at line end, v wraps at frame end."""
    h = t.h_count + 1
    v = t.v_count
    if h == params.h_total:
        h = 0
        v += 1
        if v == params.v_total:
            v = 0
    return make_tick(h, v, params)


def iter_frame(params: VgaTimingParams = VESA_800X600_60) -> Iterator[VgaTick]:
    """All ticks of one frame in scan order, starting at the origin."""
    t = origin_tick(params)
    for _ in range(params.ticks_per_frame):
        yield t
        t = advance(t, params)


@dataclass(frozen=True)
class FrameCounts:
    ticks: int
    hsync_pulses: int
    vsync_pulses: int
    active_pixels: int


def count_frames(frames: int, params: VgaTimingParams = VESA_800X600_60) -> FrameCounts:
    """Run the generator for whole frames, counting sync rising edges."""
    if frames < 1:
        raise ValueError("frames must be >= 1")
    ticks = hsyncs = vsyncs = active = 0
    prev_h = prev_v = False
    t = origin_tick(params)
    for _ in range(frames * params.ticks_per_frame):
        ticks += 1
        if t.hsync and not prev_h:
            hsyncs += 1
        if t.vsync and not prev_v:
            vsyncs += 1
        if t.active:
            active += 1
        prev_h, prev_v = t.hsync, t.vsync
        t = advance(t, params)
    return FrameCounts(ticks, hsyncs, vsyncs, active)


def letterbox_top(fb_height: int, params: VgaTimingParams = VESA_800X600_60) -> int:
    return (params.v_active - fb_height) // 2


def _check_dimensions(fb: Framebuffer) -> None:
    if (fb.width, fb.height) != (Framebuffer.width, Framebuffer.height):
        raise DimensionMismatch(f"framebuffer is {fb.width}x{fb.height}, need 800x400")


def active_pixel_color(
    fb: Framebuffer, col: int, row: int, params: VgaTimingParams = VESA_800X600_60
) -> Rgb24:
    """Color at an active-region position; letterbox bands show background."""
    top = letterbox_top(fb.height, params)
    if top <= row < top + fb.height:
        return fb.get_pixel(col, row - top)
    return BACKGROUND


def compose_frame(
    fb: Framebuffer, params: VgaTimingParams = VESA_800X600_60
) -> Iterator[Rgb24]:
    """Active-region pixels in scan order: the panel image centered vertically."""
    _check_dimensions(fb)
    top = letterbox_top(fb.height, params)
    for row in range(params.v_active):
        if top <= row < top + fb.height:
            for col in range(params.h_active):
                yield fb.get_pixel(col, row - top)
        else:
            for _ in range(params.h_active):
                yield BACKGROUND


def export_ppm(fb: Framebuffer) -> bytes:
    """Binary PPM (P6) snapshot, row-major top-to-bottom."""
    _check_dimensions(fb)
    header = f"P6\n{fb.width} {fb.height}\n{PPM_MAXVAL}\n".encode("ascii")
    return header + fb.to_bytes()


def timing_report(frames: int, params: VgaTimingParams = VESA_800X600_60) -> str:
    counts = count_frames(frames, params)
    lines = [
        f"frames:          {frames}",
        f"ticks:           {counts.ticks} ({params.ticks_per_frame} per frame)",
        f"hsync pulses:    {counts.hsync_pulses} ({params.v_total} per frame)",
        f"vsync pulses:    {counts.vsync_pulses}",
        f"active pixels:   {counts.active_pixels} ({params.h_active * params.v_active} per frame)",
        f"refresh rate:    {params.refresh_hz:.2f} Hz",
    ]
    return "\n".join(lines) + "\n"

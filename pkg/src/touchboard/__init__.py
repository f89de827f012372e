"""Deterministic behavioral simulator of a touchscreen writing/drawing board.

The simulated datapath runs from resistive-panel sampling over a bit-serial
interface, through a coordinate register file and a drawing engine, to a
framebuffer, VGA timing, and a seven-segment readout. A statistics toolkit
covers the usability-evaluation side, and a WebSocket bridge exposes the
live device to a browser whiteboard.
"""

__version__ = "0.1.0"

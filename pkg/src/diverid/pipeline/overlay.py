"""Overlay rendering: identity-colored boxes and name labels on frames."""

from __future__ import annotations

import numpy as np

from ..errors import ContractViolation
from ..imaging import ColorSpace, ImageBuffer
from .detections import DetectionsDoc

PALETTE = (
    (235, 64, 52),
    (52, 199, 89),
    (64, 156, 255),
    (255, 204, 0),
    (175, 82, 222),
    (255, 149, 0),
)

# 5x7 glyphs, one string per row, '#' = on
_FONT = {
    "A": ("..#..", ".#.#.", "#...#", "#...#", "#####", "#...#", "#...#"),
    "B": ("####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."),
    "C": (".####", "#....", "#....", "#....", "#....", "#....", ".####"),
    "D": ("####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."),
    "E": ("#####", "#....", "#....", "####.", "#....", "#....", "#####"),
    "F": ("#####", "#....", "#....", "####.", "#....", "#....", "#...."),
    "G": (".####", "#....", "#....", "#..##", "#...#", "#...#", ".####"),
    "H": ("#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "I": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"),
    "J": ("#####", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."),
    "K": ("#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"),
    "L": ("#....", "#....", "#....", "#....", "#....", "#....", "#####"),
    "M": ("#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"),
    "N": ("#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#", "#...#"),
    "O": (".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "P": ("####.", "#...#", "#...#", "####.", "#....", "#....", "#...."),
    "Q": (".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"),
    "R": ("####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"),
    "S": (".####", "#....", "#....", ".###.", "....#", "....#", "####."),
    "T": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."),
    "U": ("#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "V": ("#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."),
    "W": ("#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", "#...#"),
    "X": ("#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"),
    "Y": ("#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."),
    "Z": ("#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"),
    "0": (".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."),
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", "#####"),
    "2": (".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"),
    "3": (".###.", "#...#", "....#", "..##.", "....#", "#...#", ".###."),
    "4": ("...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."),
    "5": ("#####", "#....", "####.", "....#", "....#", "#...#", ".###."),
    "6": (".###.", "#....", "#....", "####.", "#...#", "#...#", ".###."),
    "7": ("#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."),
    "8": (".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."),
    "9": (".###.", "#...#", "#...#", ".####", "....#", "....#", ".###."),
    "-": (".....", ".....", ".....", "#####", ".....", ".....", "....."),
    " ": (".....", ".....", ".....", ".....", ".....", ".....", "....."),
}


def identity_colors(identities) -> dict:
    """Fixed color per identity, assigned in sorted identity order."""
    return {name: PALETTE[i % len(PALETTE)] for i, name in enumerate(sorted(identities))}


def _draw_text(canvas: np.ndarray, text: str, x: int, y: int, color, scale: int = 2):
    h, w = canvas.shape[:2]
    cursor = x
    for ch in text.upper():
        glyph = _FONT.get(ch, _FONT[" "])
        for gy, row in enumerate(glyph):
            for gx, cell in enumerate(row):
                if cell != "#":
                    continue
                y0 = y + gy * scale
                x0 = cursor + gx * scale
                canvas[max(0, y0) : max(0, min(h, y0 + scale)), max(0, x0) : max(0, min(w, x0 + scale))] = color
        cursor += (5 + 1) * scale


def _draw_box(canvas: np.ndarray, box, color, thickness: int = 3):
    h, w = canvas.shape[:2]
    x0, y0 = max(0, box.x_min), max(0, box.y_min)
    x1, y1 = min(w, box.x_max), min(h, box.y_max)
    t = thickness
    canvas[y0 : min(y0 + t, y1), x0:x1] = color
    canvas[max(y1 - t, y0) : y1, x0:x1] = color
    canvas[y0:y1, x0 : min(x0 + t, x1)] = color
    canvas[y0:y1, max(x1 - t, x0) : x1] = color


def render_overlay(frame: ImageBuffer, assignments: DetectionsDoc, frame_index: int) -> ImageBuffer:
    """Draw identity-colored boxes and labels for one frame."""
    if frame.color_space is not ColorSpace.RGB8:
        raise ContractViolation(f"render_overlay expects RGB8, got {frame.color_space.name}")
    if frame_index not in assignments.frames:
        raise ContractViolation(f"assignments carry no frame {frame_index}")
    identities = {d.identity for dets in assignments.frames.values() for d in dets if d.identity}
    colors = identity_colors(identities)
    canvas = frame.data.copy()
    for det in assignments.frames[frame_index]:
        if det.identity is None:
            continue
        color = colors[det.identity]
        _draw_box(canvas, det.box, color)
        _draw_text(canvas, det.identity, det.box.x_min, max(0, det.box.y_min - 16), color)
    return ImageBuffer.from_array(canvas, ColorSpace.RGB8)

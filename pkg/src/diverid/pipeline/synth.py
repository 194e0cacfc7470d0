"""Synthetic session generator: moving textured diver silhouettes over a
pool-like background, with pixel-accurate ground truth.

Seven built-in scenarios reproduce the classic session structures: two or
three divers, optional flippers, one diver leaving the scene halfway or
leaving and re-entering, and a freeform swim. Everything is deterministic
for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..errors import ContractViolation
from ..imaging import BoundingBox, ColorSpace, ImageBuffer, lab_to_rgb
from .detections import Detection, DetectionsDoc
from .frames import MemoryFrames

EXIT_RAMP = 12  # frames spent gliding off the edge
ENTRY_RAMP = 12  # frames spent gliding back in
MIN_VISIBLE_FRACTION = 0.35  # below this the diver is not annotated

_HEAD_COLOR = (224, 188, 154)
_FLIPPER_COLOR = (40, 44, 52)


@dataclass(frozen=True)
class DiverAppearance:
    name: str
    suit_lab: tuple  # (L, a, b) suit color
    body: tuple  # (semi_major, semi_minor) pixels
    flippers: bool
    texture: float  # noise amplitude scale in [0, 1]


@dataclass(frozen=True)
class DiverMotion:
    center: tuple  # (cx, cy)
    amp: tuple  # (Ax, Ay)
    period: tuple  # (Tx, Ty) frames
    phase: tuple  # (px, py) radians
    present: tuple  # ((start, end), ...) half-open frame intervals


@dataclass(frozen=True)
class DiverSpec:
    appearance: DiverAppearance
    motion: DiverMotion


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    width: int
    height: int
    n_frames: int
    divers: tuple


def _appearances(flippers: bool):
    return (
        DiverAppearance("diver-red", (52.0, 55.0, 38.0), (58, 24), flippers, 0.55),
        DiverAppearance("diver-green", (64.0, -42.0, 36.0), (50, 20), flippers, 0.20),
        DiverAppearance("diver-orange", (56.0, 42.0, 48.0), (54, 22), flippers, 0.80),
    )


def scenario_spec(scenario_id: int, n_frames: int = 300, width: int = 640, height: int = 480) -> ScenarioSpec:
    """Built-in scenario descriptors 1..7."""
    if not 1 <= scenario_id <= 7:
        raise ContractViolation(f"scenario id must lie in 1..7, got {scenario_id}")
    n = n_frames
    flippers = scenario_id in (3, 4, 6)
    a0, a1, a2 = _appearances(flippers)
    full = ((0, n),)
    half = ((0, n // 2),)
    split = ((0, n // 3), (2 * n // 3, n))

    m0 = DiverMotion((240, 150), (90, 40), (210, 140), (0.0, 1.3), full)
    m1 = DiverMotion((410, 330), (95, 45), (190, 120), (2.1, 0.4), full)
    if scenario_id in (1, 3):
        divers = (DiverSpec(a0, m0), DiverSpec(a1, replace(m1, present=half)))
    elif scenario_id in (2, 4):
        divers = (DiverSpec(a0, m0), DiverSpec(a1, replace(m1, present=split)))
    elif scenario_id in (5, 6):
        m0c = DiverMotion((200, 140), (80, 55), (180, 110), (0.0, 0.7), full)
        m1c = DiverMotion((460, 350), (75, 45), (200, 130), (2.0, 1.9), full)
        m2c = DiverMotion((320, 245), (115, 95), (150, 95), (4.0, 2.6), half)
        divers = (DiverSpec(a0, m0c), DiverSpec(a1, m1c), DiverSpec(a2, m2c))
    else:  # scenario 7: freeform swim, both present throughout
        m0f = DiverMotion((260, 200), (140, 90), (170, 115), (0.9, 2.2), full)
        m1f = DiverMotion((400, 290), (130, 95), (205, 135), (3.6, 0.8), full)
        divers = (DiverSpec(a0, m0f), DiverSpec(a1, m1f))
    return ScenarioSpec(
        name=f"synthetic-scenario-{scenario_id}",
        width=width,
        height=height,
        n_frames=n,
        divers=divers,
    )


def _smooth(u: float) -> float:
    return u * u * (3.0 - 2.0 * u)


def _base_position(motion: DiverMotion, t: float):
    x = motion.center[0] + motion.amp[0] * math.sin(2.0 * math.pi * t / motion.period[0] + motion.phase[0])
    y = motion.center[1] + motion.amp[1] * math.sin(2.0 * math.pi * t / motion.period[1] + motion.phase[1])
    return x, y


def _position(motion: DiverMotion, t: int, n_frames: int, width: int):
    """World position at frame t, or None when outside every presence interval.

    Intervals that end before the session end ramp the diver off the right
    edge over the last EXIT_RAMP frames; intervals that start after frame 0
    ramp it back in over the first ENTRY_RAMP frames.
    """
    for start, end in motion.present:
        if not (start <= t < end):
            continue
        x, y = _base_position(motion, t)
        off_x = width + 260.0
        if end < n_frames and t >= end - EXIT_RAMP:
            u = (t - (end - EXIT_RAMP) + 1) / EXIT_RAMP
            x = x + _smooth(u) * (off_x - x)
        elif start > 0 and t < start + ENTRY_RAMP:
            u = (t - start + 1) / ENTRY_RAMP
            x = off_x + _smooth(u) * (x - off_x)
        return x, y
    return None


def _heading(motion: DiverMotion, t: int) -> float:
    x0, y0 = _base_position(motion, t - 1)
    x1, y1 = _base_position(motion, t + 1)
    if x1 == x0 and y1 == y0:
        return 0.0
    return math.atan2(y1 - y0, x1 - x0)


def _suit_rgb(lab: tuple) -> np.ndarray:
    buf = np.array([[lab]], dtype=np.float32)
    rgb = lab_to_rgb(ImageBuffer.from_array(buf, ColorSpace.LAB_F32))
    return rgb.data[0, 0].astype(np.float64)


def _in_triangle(px, py, a, b, c):
    """Vectorized inclusive point-in-triangle test."""
    d1 = (px - b[0]) * (a[1] - b[1]) - (a[0] - b[0]) * (py - b[1])
    d2 = (px - c[0]) * (b[1] - c[1]) - (b[0] - c[0]) * (py - c[1])
    d3 = (px - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (py - a[1])
    neg = (d1 < 0) | (d2 < 0) | (d3 < 0)
    pos = (d1 > 0) | (d2 > 0) | (d3 > 0)
    return ~(neg & pos)


class _DiverSprite:
    """Renders one diver; the texture map is fixed per diver so appearance
    is stable while it moves."""

    def __init__(self, spec: DiverSpec, rng: np.random.Generator):
        app = spec.appearance
        self.spec = spec
        self.a, self.b = app.body
        self.head_r = max(6, int(round(0.55 * self.b)))
        self.fin_len = 26 if app.flippers else 0
        self.ext = int(math.ceil(self.a + self.head_r * 2.2 + self.fin_len + 4))
        self.suit = _suit_rgb(app.suit_lab)
        side = 2 * self.ext + 1
        noise = rng.normal(0.0, 1.0, size=(side, side))
        self.texture = noise * (app.texture * 26.0)

    def masks(self, theta: float):
        """(combined, body, head, fins) boolean masks on the local grid."""
        ext = self.ext
        coords = np.arange(-ext, ext + 1, dtype=np.float64)
        gx, gy = np.meshgrid(coords, coords)
        ct, st = math.cos(theta), math.sin(theta)
        u = ct * gx + st * gy
        v = -st * gx + ct * gy
        body = (u / self.a) ** 2 + (v / self.b) ** 2 <= 1.0
        hx = self.a + 0.5 * self.head_r
        head = (u - hx) ** 2 + v**2 <= self.head_r**2
        if self.fin_len:
            tail = -self.a + 6.0
            tip = -self.a - self.fin_len
            fins = _in_triangle(u, v, (tail, 0.0), (tip, -16.0), (tip, 16.0))
        else:
            fins = np.zeros_like(body)
        return body | head | fins, body, head, fins, u, v

    def render(self, canvas: np.ndarray, cx: float, cy: float, theta: float):
        """Draw at (cx, cy); returns the visible mask in world coordinates
        as (x0, y0, mask) plus the unclipped pixel count."""
        mask, body, head, fins, u, v = self.masks(theta)
        full_count = int(mask.sum())

        ext = self.ext
        h, w = canvas.shape[:2]
        x0 = int(round(cx)) - ext
        y0 = int(round(cy)) - ext
        side = 2 * ext + 1
        sx0, sy0 = max(0, -x0), max(0, -y0)
        sx1 = min(side, w - x0)
        sy1 = min(side, h - y0)
        if sx1 <= sx0 or sy1 <= sy0:
            return None, full_count

        sub = (slice(sy0, sy1), slice(sx0, sx1))
        m = mask[sub]
        if not m.any():
            return None, full_count

        ti = np.clip(np.round(v + ext).astype(np.int64), 0, side - 1)
        tj = np.clip(np.round(u + ext).astype(np.int64), 0, side - 1)
        tex = self.texture[ti, tj]

        patch = np.zeros((side, side, 3), dtype=np.float64)
        patch[body] = self.suit
        patch[head] = _HEAD_COLOR
        patch[fins & ~body] = _FLIPPER_COLOR
        patch += tex[..., None]

        region = canvas[y0 + sy0 : y0 + sy1, x0 + sx0 : x0 + sx1]
        region[m] = np.clip(patch[sub][m], 0.0, 255.0).astype(np.uint8)
        return (x0 + sx0, y0 + sy0, m), full_count


def _background(width: int, height: int, rng: np.random.Generator) -> np.ndarray:
    rows = np.linspace(0.0, 1.0, height)[:, None]
    top = np.array([64.0, 132.0, 180.0])
    bottom = np.array([38.0, 92.0, 138.0])
    bg = top[None, None, :] * (1.0 - rows[..., None]) + bottom[None, None, :] * rows[..., None]
    bg = np.repeat(bg, width, axis=1)
    for y in range(60, height, 90):
        bg[y : y + 5, :, :] -= 16.0
    bg += rng.normal(0.0, 2.0, size=(height, width, 1))
    return np.clip(bg, 0.0, 255.0).astype(np.uint8)


def synth_scenario(spec, seed: int = 0):
    """Render a scenario; returns (MemoryFrames, ground-truth DetectionsDoc).

    ``spec`` is a ScenarioSpec or a built-in scenario id. Raises when the
    divers visible on the first frame overlap.
    """
    if isinstance(spec, int):
        spec = scenario_spec(spec)
    ss = np.random.SeedSequence(seed)
    children = ss.spawn(len(spec.divers) + 1)
    bg = _background(spec.width, spec.height, np.random.default_rng(children[0]))
    sprites = [
        _DiverSprite(d, np.random.default_rng(children[i + 1]))
        for i, d in enumerate(spec.divers)
    ]

    frames = []
    truth = DetectionsDoc(
        video=spec.name, frame_width=spec.width, frame_height=spec.height
    )
    for t in range(spec.n_frames):
        canvas = bg.copy()
        dets = []
        for sprite in sprites:
            motion = sprite.spec.motion
            pos = _position(motion, t, spec.n_frames, spec.width)
            if pos is None:
                continue
            theta = _heading(motion, t)
            placed, full_count = sprite.render(canvas, pos[0], pos[1], theta)
            if placed is None:
                continue
            x_off, y_off, mask = placed
            visible = int(mask.sum())
            if full_count == 0 or visible / full_count < MIN_VISIBLE_FRACTION:
                continue
            ys, xs = np.nonzero(mask)
            box_x0 = x_off + int(xs.min())
            box_x1 = x_off + int(xs.max()) + 1
            box_y0 = y_off + int(ys.min())
            box_y1 = y_off + int(ys.max()) + 1
            if box_x1 - box_x0 < 2 or box_y1 - box_y0 < 2:
                continue
            dets.append(
                Detection(
                    frame_index=t,
                    box=BoundingBox(box_x0, box_y0, box_x1, box_y1),
                    score=1.0,
                    class_label="diver",
                    identity=sprite.spec.appearance.name,
                )
            )
        if t == 0 and len(dets) >= 2:
            for i in range(len(dets)):
                for j in range(i + 1, len(dets)):
                    a, b = dets[i].box, dets[j].box
                    if a.x_min < b.x_max and b.x_min < a.x_max and a.y_min < b.y_max and b.y_min < a.y_max:
                        raise ContractViolation(
                            f"initial placements overlap: {dets[i].identity} and {dets[j].identity}"
                        )
        truth.frames[t] = dets
        frames.append(ImageBuffer.from_array(canvas, ColorSpace.RGB8))

    return MemoryFrames(frames), truth

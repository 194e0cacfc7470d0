"""Frame sources: PNG/JPEG decode at the toolkit boundary.

In-memory types carry no file-format knowledge; everything below turns
files into RGB8 ImageBuffers and back.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import ContractViolation
from ..imaging import ColorSpace, ImageBuffer

_EXTENSIONS = (".png", ".jpg", ".jpeg")
_DIGITS = re.compile(r"(\d+)")


def load_frame(path) -> ImageBuffer:
    """Decode an image file into an RGB8 buffer."""
    with Image.open(path) as img:
        data = np.asarray(img.convert("RGB"), dtype=np.uint8)
    return ImageBuffer.from_array(data, ColorSpace.RGB8)


def save_frame(img: ImageBuffer, path) -> None:
    """Encode an RGB8 buffer as PNG or JPEG, by file extension."""
    if img.color_space is not ColorSpace.RGB8:
        raise ContractViolation(f"save_frame expects RGB8, got {img.color_space.name}")
    Image.fromarray(img.data, mode="RGB").save(path)


def frame_index_of(path) -> int:
    """Frame index of a numbered file: the last digit run in the stem."""
    runs = _DIGITS.findall(Path(path).stem)
    if not runs:
        raise ContractViolation(f"cannot derive a frame index from {path}")
    return int(runs[-1])


class MemoryFrames:
    """In-memory frame source keyed by frame index."""

    def __init__(self, frames):
        if isinstance(frames, dict):
            self._frames = dict(frames)
        else:
            self._frames = dict(enumerate(frames))

    def indices(self):
        return sorted(self._frames)

    def load(self, index: int) -> ImageBuffer:
        return self._frames[index]


class DirectoryFrames:
    """Zero-padded numbered image files in a directory."""

    def __init__(self, directory):
        directory = Path(directory)
        if not directory.is_dir():
            raise ContractViolation(f"{directory} is not a directory")
        self._paths = {}
        for path in sorted(directory.iterdir()):
            if path.suffix.lower() not in _EXTENSIONS:
                continue
            index = frame_index_of(path)
            if index in self._paths:
                raise ContractViolation(
                    f"duplicate frame index {index}: {self._paths[index].name} and {path.name}"
                )
            self._paths[index] = path

    def indices(self):
        return sorted(self._paths)

    def load(self, index: int) -> ImageBuffer:
        return load_frame(self._paths[index])


class ManifestFrames:
    """A text file listing frame paths, one per line; line number = frame index."""

    def __init__(self, manifest):
        manifest = Path(manifest)
        base = manifest.parent
        self._paths = {}
        with open(manifest, "r", encoding="utf-8") as fh:
            index = 0
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                p = Path(line)
                self._paths[index] = p if p.is_absolute() else base / p
                index += 1

    def indices(self):
        return sorted(self._paths)

    def load(self, index: int) -> ImageBuffer:
        return load_frame(self._paths[index])


def open_frames(path):
    """Directory -> DirectoryFrames; file -> ManifestFrames."""
    p = Path(path)
    if p.is_dir():
        return DirectoryFrames(p)
    return ManifestFrames(p)

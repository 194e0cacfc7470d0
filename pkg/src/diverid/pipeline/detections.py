"""Detections document schema: parsing, validation, serialization.

The on-disk format is a single JSON object::

    {
      "video": str,
      "frame_width": int,
      "frame_height": int,
      "frames": [
        {"index": int,
         "detections": [
            {"bbox": [x_min, y_min, x_max, y_max],
             "score": float,
             "class": str,
             "identity": str (optional)}
         ]}
      ]
    }

Strict mode rejects unknown fields and non-integral bbox coordinates;
lenient mode downgrades both to warnings (rounding coordinates to the
nearest integer).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..errors import BoxOutOfBounds, SchemaError
from ..imaging import BoundingBox

_DOC_FIELDS = {"video", "frame_width", "frame_height", "frames"}
_FRAME_FIELDS = {"index", "detections"}
_DET_FIELDS = {"bbox", "score", "class", "identity"}


@dataclass(frozen=True)
class Detection:
    """One scored bounding box within a frame."""

    frame_index: int
    box: BoundingBox
    score: float
    class_label: str
    identity: Optional[str] = None


# ground truth is a detection whose identity is filled in
GroundTruthDetection = Detection


@dataclass
class DetectionsDoc:
    video: str
    frame_width: int
    frame_height: int
    frames: dict = field(default_factory=dict)  # frame index -> list[Detection]

    def all_detections(self) -> list[Detection]:
        out = []
        for index in sorted(self.frames):
            out.extend(self.frames[index])
        return out


def _expect(obj, typ, path, what):
    if typ is int and isinstance(obj, bool):
        raise SchemaError(f"{what} must be {typ.__name__}, got bool", path)
    if not isinstance(obj, typ):
        raise SchemaError(f"{what} must be {typ.__name__}, got {type(obj).__name__}", path)
    return obj


def _check_unknown(obj, allowed, path, strict, warnings):
    extra = set(obj) - allowed
    for name in sorted(extra):
        if strict:
            raise SchemaError(f"unknown field {name!r}", path)
        warnings.append(f"{path}: ignoring unknown field {name!r}")


def _coerce_coord(value, path, strict, warnings):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"bbox coordinate must be a number, got {type(value).__name__}", path)
    if isinstance(value, float):
        if value != int(value):
            if strict:
                raise SchemaError(f"bbox coordinate must be integral, got {value}", path)
            warnings.append(f"{path}: rounding non-integral coordinate {value}")
            return int(round(value))
        return int(value)
    return value


def parse_detections(obj, strict: bool = True) -> tuple[DetectionsDoc, list[str]]:
    """Validate a decoded JSON object against the schema.

    Returns (document, warnings). Schema violations raise SchemaError with a
    field path; boxes outside the declared frame raise BoxOutOfBounds
    listing every offender.
    """
    warnings: list[str] = []
    _expect(obj, dict, "", "document")
    _check_unknown(obj, _DOC_FIELDS, "document", strict, warnings)
    for name in ("video", "frame_width", "frame_height", "frames"):
        if name not in obj:
            raise SchemaError(f"missing required field {name!r}", "document")
    video = _expect(obj["video"], str, "video", "video")
    width = _expect(obj["frame_width"], int, "frame_width", "frame_width")
    height = _expect(obj["frame_height"], int, "frame_height", "frame_height")
    if width <= 0 or height <= 0:
        raise SchemaError(f"frame size must be positive, got {width}x{height}", "frame_width")
    frames_raw = _expect(obj["frames"], list, "frames", "frames")

    doc = DetectionsDoc(video=video, frame_width=width, frame_height=height)
    offenders = []
    for fi, frame in enumerate(frames_raw):
        fpath = f"frames[{fi}]"
        _expect(frame, dict, fpath, "frame entry")
        _check_unknown(frame, _FRAME_FIELDS, fpath, strict, warnings)
        for name in ("index", "detections"):
            if name not in frame:
                raise SchemaError(f"missing required field {name!r}", fpath)
        index = _expect(frame["index"], int, f"{fpath}.index", "frame index")
        if index < 0:
            raise SchemaError(f"frame index must be >= 0, got {index}", f"{fpath}.index")
        if index in doc.frames:
            raise SchemaError(f"duplicate frame index {index}", f"{fpath}.index")
        dets_raw = _expect(frame["detections"], list, f"{fpath}.detections", "detections")
        dets = []
        for di, det in enumerate(dets_raw):
            dpath = f"{fpath}.detections[{di}]"
            _expect(det, dict, dpath, "detection entry")
            _check_unknown(det, _DET_FIELDS, dpath, strict, warnings)
            for name in ("bbox", "score", "class"):
                if name not in det:
                    raise SchemaError(f"missing required field {name!r}", dpath)
            bbox = _expect(det["bbox"], list, f"{dpath}.bbox", "bbox")
            if len(bbox) != 4:
                raise SchemaError(f"bbox must have 4 entries, got {len(bbox)}", f"{dpath}.bbox")
            coords = [_coerce_coord(v, f"{dpath}.bbox", strict, warnings) for v in bbox]
            if not (coords[0] < coords[2] and coords[1] < coords[3]):
                raise SchemaError(f"bbox must have positive extent, got {coords}", f"{dpath}.bbox")
            box = BoundingBox(*coords)
            if not box.within(width, height):
                offenders.append((f"{dpath}.bbox", box))
            score = det["score"]
            if isinstance(score, bool) or not isinstance(score, (int, float)):
                raise SchemaError("score must be a number", f"{dpath}.score")
            if not 0.0 <= score <= 1.0:
                raise SchemaError(f"score must lie in [0, 1], got {score}", f"{dpath}.score")
            label = _expect(det["class"], str, f"{dpath}.class", "class")
            identity = det.get("identity")
            if identity is not None:
                identity = _expect(identity, str, f"{dpath}.identity", "identity")
                if not identity:
                    raise SchemaError("identity must be nonempty", f"{dpath}.identity")
            dets.append(
                Detection(
                    frame_index=index,
                    box=box,
                    score=float(score),
                    class_label=label,
                    identity=identity,
                )
            )
        doc.frames[index] = dets

    if offenders:
        listing = "; ".join(f"{p}={b}" for p, b in offenders)
        raise BoxOutOfBounds(
            f"{len(offenders)} box(es) exceed the {width}x{height} frame: {listing}",
            boxes=[b for _, b in offenders],
        )
    return doc, warnings


def load_detections(path, strict: bool = True) -> tuple[DetectionsDoc, list[str]]:
    """Read and validate a detections JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}", str(path)) from exc
    return parse_detections(obj, strict=strict)


def ingest_detections(path, strict: bool = True) -> list[Detection]:
    """Detections of a file as a flat list sorted by (frame, file order)."""
    doc, _ = load_detections(path, strict=strict)
    return doc.all_detections()


def doc_to_obj(doc: DetectionsDoc) -> dict:
    """Serialize back to the schema shape (identity included when present)."""
    frames = []
    for index in sorted(doc.frames):
        dets = []
        for det in doc.frames[index]:
            entry = {
                "bbox": [det.box.x_min, det.box.y_min, det.box.x_max, det.box.y_max],
                "score": det.score,
                "class": det.class_label,
            }
            if det.identity is not None:
                entry["identity"] = det.identity
            dets.append(entry)
        frames.append({"index": index, "detections": dets})
    return {
        "video": doc.video,
        "frame_width": doc.frame_width,
        "frame_height": doc.frame_height,
        "frames": frames,
    }


def write_detections(doc: DetectionsDoc, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc_to_obj(doc), fh, indent=2, sort_keys=False)
        fh.write("\n")

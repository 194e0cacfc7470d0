from .detections import (
    Detection,
    DetectionsDoc,
    GroundTruthDetection,
    doc_to_obj,
    ingest_detections,
    load_detections,
    parse_detections,
    write_detections,
)
from .evaluation import SessionReport, evaluate, format_report_table, iou
from .frames import (
    DirectoryFrames,
    ManifestFrames,
    MemoryFrames,
    load_frame,
    open_frames,
    save_frame,
)
from .overlay import render_overlay
from .session import SessionEvent, SessionResult, build_feature_vector, run_session
from .synth import DiverAppearance, DiverMotion, DiverSpec, ScenarioSpec, scenario_spec, synth_scenario

__all__ = [
    "Detection",
    "DetectionsDoc",
    "GroundTruthDetection",
    "doc_to_obj",
    "ingest_detections",
    "load_detections",
    "parse_detections",
    "write_detections",
    "SessionReport",
    "evaluate",
    "format_report_table",
    "iou",
    "DirectoryFrames",
    "ManifestFrames",
    "MemoryFrames",
    "load_frame",
    "open_frames",
    "save_frame",
    "render_overlay",
    "SessionEvent",
    "SessionResult",
    "build_feature_vector",
    "run_session",
    "DiverAppearance",
    "DiverMotion",
    "DiverSpec",
    "ScenarioSpec",
    "scenario_spec",
    "synth_scenario",
]

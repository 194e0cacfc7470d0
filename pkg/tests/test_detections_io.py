import json

import pytest

from diverid.errors import BoxOutOfBounds, SchemaError
from diverid.pipeline.detections import (
    doc_to_obj,
    ingest_detections,
    load_detections,
    parse_detections,
    write_detections,
)


def sample_doc(**overrides):
    doc = {
        "video": "pool-A",
        "frame_width": 640,
        "frame_height": 480,
        "frames": [
            {
                "index": 1,
                "detections": [
                    {"bbox": [10, 20, 110, 220], "score": 0.9, "class": "diver"},
                    {"bbox": [300, 40, 420, 240], "score": 0.8, "class": "diver", "identity": "a"},
                ],
            },
            {"index": 0, "detections": []},
        ],
    }
    doc.update(overrides)
    return doc


class TestParse:
    def test_round_trip(self, tmp_path):
        doc, warnings = parse_detections(sample_doc())
        assert warnings == []
        assert doc.video == "pool-A"
        assert sorted(doc.frames) == [0, 1]
        dets = doc.all_detections()
        assert [d.frame_index for d in dets] == [1, 1]
        assert dets[1].identity == "a"

        path = tmp_path / "out.json"
        write_detections(doc, path)
        again, _ = load_detections(path)
        assert doc_to_obj(again) == doc_to_obj(doc)

    def test_sorted_by_frame_then_order(self):
        raw = sample_doc()
        raw["frames"][1]["detections"] = [
            {"bbox": [0, 0, 5, 5], "score": 1.0, "class": "diver"}
        ]
        doc, _ = parse_detections(raw)
        dets = doc.all_detections()
        assert [d.frame_index for d in dets] == [0, 1, 1]

    def test_unknown_field_strict_vs_lenient(self):
        raw = sample_doc(extra="nope")
        with pytest.raises(SchemaError) as info:
            parse_detections(raw, strict=True)
        assert "extra" in str(info.value)
        _, warnings = parse_detections(raw, strict=False)
        assert any("extra" in w for w in warnings)

    def test_unknown_detection_field(self):
        raw = sample_doc()
        raw["frames"][0]["detections"][0]["confidence"] = 0.5
        with pytest.raises(SchemaError) as info:
            parse_detections(raw)
        assert "frames[0].detections[0]" in str(info.value)

    def test_missing_field_has_path(self):
        raw = sample_doc()
        del raw["frames"][0]["detections"][0]["score"]
        with pytest.raises(SchemaError) as info:
            parse_detections(raw)
        assert "frames[0].detections[0]" in str(info.value)

    def test_non_integral_bbox(self):
        raw = sample_doc()
        raw["frames"][0]["detections"][0]["bbox"] = [10.5, 20, 110, 220]
        with pytest.raises(SchemaError):
            parse_detections(raw, strict=True)
        doc, warnings = parse_detections(raw, strict=False)
        assert any("rounding" in w for w in warnings)
        assert doc.frames[1][0].box.x_min in (10, 11)

    def test_out_of_bounds_boxes_listed(self):
        raw = sample_doc()
        raw["frames"][0]["detections"][0]["bbox"] = [600, 20, 700, 220]
        raw["frames"][0]["detections"][1]["bbox"] = [0, -5, 10, 10]
        with pytest.raises(BoxOutOfBounds) as info:
            parse_detections(raw)
        assert len(info.value.boxes) == 2

    def test_duplicate_frame_index(self):
        raw = sample_doc()
        raw["frames"].append({"index": 1, "detections": []})
        with pytest.raises(SchemaError) as info:
            parse_detections(raw)
        assert "duplicate" in str(info.value)

    def test_score_domain(self):
        raw = sample_doc()
        raw["frames"][0]["detections"][0]["score"] = 1.5
        with pytest.raises(SchemaError):
            parse_detections(raw)

    def test_empty_identity_rejected(self):
        raw = sample_doc()
        raw["frames"][0]["detections"][0]["identity"] = ""
        with pytest.raises(SchemaError):
            parse_detections(raw)

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(SchemaError):
            load_detections(path)

    def test_ingest_flat_list(self, tmp_path):
        path = tmp_path / "dets.json"
        path.write_text(json.dumps(sample_doc()))
        dets = ingest_detections(path)
        assert len(dets) == 2

"""Configuration: one defaults table shared by the config file and CLI flags.

Config files are flat ``key = value`` lines with ``#`` comments. CLI flags
mirror the keys one-to-one (``--kmeans.seed 7``). Every value is validated
against its domain before any work begins.
"""

from __future__ import annotations

from .errors import ContractViolation


def _bool(raw):
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _k_value(raw):
    if isinstance(raw, int) and not isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text == "auto":
        return "auto"
    return int(text)


# key -> (parser, validator, default, help)
SCHEMA = {
    "spectrum.size": (int, lambda v: v >= 1, 128, "side of the square spectrum grid"),
    "spectrum.include_dc": (_bool, lambda v: True, True, "include the DC bin in the amplitude mean"),
    "canny.low": (int, lambda v: 0 <= v <= 255, 50, "low hysteresis threshold"),
    "canny.high": (int, lambda v: 0 <= v <= 255, 150, "high hysteresis threshold"),
    "canny.sigma": (float, lambda v: v > 0, 1.4, "Gaussian pre-smoothing sigma"),
    "rdp.epsilon": (float, lambda v: v >= 0, 2.0, "polyline simplification tolerance (pixels)"),
    "hull.threshold": (int, lambda v: 0 <= v <= 255, 50, "dark-pixel suppression threshold"),
    "shape.raw_centroids": (_bool, lambda v: True, False, "emit raw (unnormalized) edge/hull centroids"),
    "kmeans.k": (_k_value, lambda v: v == "auto" or v >= 1, "auto", "cluster count, or 'auto' for the max simultaneous detections"),
    "kmeans.seed": (int, lambda v: v >= 0, 0, "RNG seed for center initialization"),
    "kmeans.tol": (float, lambda v: v > 0, 1e-4, "max centroid displacement to declare convergence"),
    "kmeans.max_iter": (int, lambda v: v >= 1, 300, "iteration cap"),
    "kmeans.normalize": (_bool, lambda v: True, False, "z-score features before clustering"),
    "session.mode": (str, lambda v: v in ("batch", "online"), "batch", "cluster the whole session, or fit on a warm-up prefix"),
    "session.warmup_frames": (int, lambda v: v >= 1, 100, "frames used to fit the model in online mode"),
    "session.min_score": (float, lambda v: 0.0 <= v <= 1.0, 0.5, "detections below this score are skipped"),
}


class Config:
    """Validated configuration; attribute access via config['kmeans.seed']."""

    def __init__(self, values):
        self._values = dict(values)

    def __getitem__(self, key):
        return self._values[key]

    def as_dict(self):
        return dict(self._values)


def defaults() -> Config:
    return Config({key: spec[2] for key, spec in SCHEMA.items()})


def _convert(key, raw):
    if key not in SCHEMA:
        raise ContractViolation(f"unknown configuration key {key!r}")
    parser, validate, _, _ = SCHEMA[key]
    try:
        value = parser(raw)
    except (TypeError, ValueError) as exc:
        raise ContractViolation(f"bad value for {key}: {raw!r} ({exc})") from exc
    if not validate(value):
        raise ContractViolation(f"value {value!r} outside the domain of {key}")
    return value


def parse_config_file(path) -> dict:
    """Flat key = value lines; # starts a comment."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ContractViolation(f"{path}:{lineno}: expected 'key = value', got {text!r}")
            key, raw = (part.strip() for part in text.split("=", 1))
            values[key] = _convert(key, raw)
    return values


def build_config(file_path=None, overrides=None) -> Config:
    """defaults < config file < explicit overrides."""
    values = {key: spec[2] for key, spec in SCHEMA.items()}
    if file_path is not None:
        values.update(parse_config_file(file_path))
    if overrides:
        for key, raw in overrides.items():
            values[key] = _convert(key, raw)
    if values["canny.low"] >= values["canny.high"]:
        raise ContractViolation(
            f"canny.low must be below canny.high, got {values['canny.low']} >= {values['canny.high']}"
        )
    return Config(values)

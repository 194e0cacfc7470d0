"""Exception types shared across the toolkit."""


class DiverIdError(Exception):
    """Base class for all toolkit errors."""


class ContractViolation(DiverIdError):
    """An argument broke a documented precondition (wrong color space, bad sigma, ...)."""


class BoxOutOfBounds(DiverIdError):
    """A bounding box does not fit inside its parent frame."""

    def __init__(self, message, boxes=None):
        super().__init__(message)
        self.boxes = list(boxes) if boxes is not None else []


class DegenerateRegion(DiverIdError):
    """A box is too small to split into quadrants."""


class DegenerateHull(DiverIdError):
    """Fewer than 3 points, or all points collinear: no proper hull exists."""


class ZeroMass(DiverIdError):
    """A crop with zero total intensity has no defined moments."""


class InsufficientData(DiverIdError):
    """Not enough vectors for the requested operation (k > n, n < 2, ...)."""


class InsufficientNames(DiverIdError):
    """The provided name list is shorter than the number of nonempty clusters."""


class EmptySession(DiverIdError):
    """The session contained no usable detections."""


class SchemaError(DiverIdError):
    """A detections document violated the file schema.

    ``path`` points at the offending field, e.g. ``frames[3].detections[1].bbox``.
    """

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class FrameMismatch(DiverIdError):
    """Assignments and ground truth do not cover the same frames."""

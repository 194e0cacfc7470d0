"""Hot-loop kernels with a compiled core and a NumPy fallback.

The compiled extension is preferred when it imported successfully; set
``DIVERID_KERNELS=python`` or ``DIVERID_KERNELS=compiled`` to force a
backend. Both expose the same functions with identical semantics.
"""

import os

from . import _pykernels

_forced = os.environ.get("DIVERID_KERNELS", "").strip().lower()
_impl = None
if _forced not in ("", "python", "compiled"):
    raise ImportError(f"DIVERID_KERNELS must be 'python' or 'compiled', got {_forced!r}")
if _forced != "python":
    try:
        from . import _cykernels as _impl
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = None
if _impl is None:
    _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

TAN_22_5 = _pykernels.TAN_22_5
TAN_67_5 = _pykernels.TAN_67_5

sep_convolve = _impl.sep_convolve
sobel = _impl.sobel
nonmax_suppress = _impl.nonmax_suppress
hysteresis = _impl.hysteresis
dft2d = _impl.dft2d
moment_sums = _impl.moment_sums
trace_borders = _impl.trace_borders


def backend_modules():
    """All importable backend modules, keyed by name. Used by tests and benchmarks."""
    modules = {"python": _pykernels}
    try:
        from . import _cykernels

        modules["compiled"] = _cykernels
    except ImportError:
        pass
    return modules

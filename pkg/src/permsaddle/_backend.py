"""Kernel selection.

The compiled ``_kernels`` extension is preferred; if it was not built (or
``PERMSADDLE_PURE_PYTHON`` is set to a non-empty value) the NumPy fallback
is used.  Both produce identical arrays, so the choice only affects speed.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _fallback


def _select() -> ModuleType:
    if os.environ.get("PERMSADDLE_PURE_PYTHON"):
        return _fallback
    try:
        from . import _kernels
    except ImportError:
        return _fallback
    return _kernels


kernels = _select()
BACKEND: str = kernels.NAME


def available_backends() -> dict[str, ModuleType]:
    found = {"python": _fallback}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found

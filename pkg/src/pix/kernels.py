"""Backend selection for the mod-p scanning loops.

The compiled extension is used when it was built; set ``PIX_PURE_PYTHON=1`` to
force the pure-Python fallback.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py


def _load() -> tuple[ModuleType, str]:
    if os.environ.get("PIX_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "compiled"


_impl, BACKEND = _load()

count_points = _impl.count_points
first_smooth_z = _impl.first_smooth_z
first_square_value = _impl.first_square_value
roots = _impl.roots


def available_backends() -> dict[str, ModuleType]:
    out = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out

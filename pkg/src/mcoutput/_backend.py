"""Kernel backend selection: compiled extension if present, numpy otherwise.

Set ``MCOUTPUT_PURE=1`` to force the pure-numpy kernels (useful for the
backend-comparison benchmark and for debugging).
"""

import os

from . import _kernels_py

if os.environ.get("MCOUTPUT_PURE", "").strip() not in ("", "0"):
    kernels = _kernels_py
    BACKEND = "pure"
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        kernels = _kernels_py
        BACKEND = "pure"
    else:
        kernels = _compiled
        BACKEND = "compiled"


def backend():
    """Name of the active kernel backend: ``"compiled"`` or ``"pure"``."""
    return BACKEND


def get_kernels(name=None):
    """Kernel module for ``name`` ("compiled"/"pure"), default the active one."""
    if name is None:
        return kernels
    if name == "pure":
        return _kernels_py
    if name == "compiled":
        from . import _kernels as compiled  # ImportError if not built

        return compiled
    raise ValueError(f"unknown backend {name!r}")

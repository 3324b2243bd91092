"""Kernel selection.

The compiled kernel is used when it imports; set ``EHD_PURE_PYTHON=1`` to
force the pure-Python fallback.
"""

import os

from . import _kernel_py

_FORCE_PURE = os.environ.get("EHD_PURE_PYTHON", "").strip().lower() in ("1", "true", "yes", "on")

compiled = None
if not _FORCE_PURE:
    try:
        from . import _kernel as compiled
    except ImportError:
        compiled = None

kernel = compiled if compiled is not None else _kernel_py
BACKEND = "cython" if compiled is not None else "python"


def get_kernel(name=None):
    """Return a kernel module by name (``"cython"``, ``"python"`` or default)."""
    if name is None:
        return kernel
    if name == "python":
        return _kernel_py
    if name == "cython":
        if compiled is None:
            raise ImportError("compiled kernel is not available")
        return compiled
    raise ValueError(f"unknown backend {name!r}")

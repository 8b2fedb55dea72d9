"""Kernel selection: the compiled extension when built, else pure Python.

Both kernels expose the same functions and produce bit-identical results;
``kernel`` is the one picked at import time.
"""

from __future__ import annotations

from . import _native

try:
    from . import _speedups as _compiled
except ImportError:
    _compiled = None

kernel = _compiled if _compiled is not None else _native


def backend_name() -> str:
    """Name of the kernel selected at import: 'compiled' or 'pure'."""
    return kernel.BACKEND


def available_backends() -> tuple[str, ...]:
    return ("compiled", "pure") if _compiled is not None else ("pure",)


def get_kernel(name: str = "auto"):
    """Kernel module by name; 'auto' is whatever import selected."""
    if name == "auto":
        return kernel
    if name == "pure":
        return _native
    if name == "compiled":
        if _compiled is None:
            raise ValueError("compiled kernel is not available in this build")
        return _compiled
    raise ValueError(f"unknown backend {name!r} (use auto, compiled, or pure)")

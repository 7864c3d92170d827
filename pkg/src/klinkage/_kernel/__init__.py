"""Kernel selection: compiled extension when present, pure Python otherwise.

Set KLINKAGE_KERNEL=py or KLINKAGE_KERNEL=c to force a backend; forcing "c"
raises if the extension was not built.
"""

from __future__ import annotations

import os

from . import pure


def _load():
    forced = os.environ.get("KLINKAGE_KERNEL", "").strip().lower()
    if forced not in ("", "c", "py"):
        raise ValueError(f"KLINKAGE_KERNEL must be 'c' or 'py', got {forced!r}")
    if forced != "py":
        try:
            from . import _cflow

            return _cflow
        except ImportError:
            if forced == "c":
                raise
    return pure


_impl = _load()

BACKEND_NAME: str = _impl.NAME
prepare = _impl.prepare
local_connectivity = _impl.local_connectivity


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _cflow  # noqa: F401

        names.append("c")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Explicit backend module for benchmarking and cross-checks."""
    if name in ("py", "python"):
        return pure
    if name == "c":
        from . import _cflow

        return _cflow
    raise ValueError(f"unknown kernel backend {name!r}")

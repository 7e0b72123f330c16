"""Kernel backend selection: compiled extension if available, pure Python otherwise."""

from __future__ import annotations

from . import _kernels_py

try:
    from . import _kernels as _impl  # type: ignore[attr-defined]

    if not _impl._self_test():  # pragma: no cover - defensive
        _impl = _kernels_py
except ImportError:
    _impl = _kernels_py

STATUS_OK = _kernels_py.STATUS_OK
STATUS_NO_ROOT = _kernels_py.STATUS_NO_ROOT
STATUS_PARTITION = _kernels_py.STATUS_PARTITION
STATUS_SINGULAR = _kernels_py.STATUS_SINGULAR

STATUS_NAMES = {
    STATUS_OK: "ok",
    STATUS_NO_ROOT: "no-root",
    STATUS_PARTITION: "partition-violation",
    STATUS_SINGULAR: "singular",
}

solve_point = _impl.solve_point
scan_chunk = _impl.scan_chunk


def backend_name() -> str:
    """Name of the kernel backend in use ('cython' or 'python')."""
    return _impl.BACKEND

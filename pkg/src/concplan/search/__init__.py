"""Greedy best-first search over grounded classical problems.

The kernel (successor generation and heuristics) comes from the compiled
extension when it was built, otherwise from the pure-Python module. Set
``CONCPLAN_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("CONCPLAN_PURE") == "1":
    _backend = _kernels_py
else:
    try:
        from . import _kernels as _backend  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _backend = _kernels_py

Kernel = _backend.Kernel
BACKEND = _backend.BACKEND
PyKernel = _kernels_py.Kernel


def compiled_kernel():
    """The compiled Kernel class, or None if the extension is unavailable."""
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _kernels.Kernel


from .planner import SearchConfig, SearchResult, SearchStats, heuristic, solve  # noqa: E402

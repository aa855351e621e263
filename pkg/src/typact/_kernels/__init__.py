"""Kernel backend selection.

The compiled module is used when it imports; setting the environment
variable ``TYPACT_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _pykernels as python

BACKEND = "python"
compiled = None

if os.environ.get("TYPACT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        compiled = None

_impl = compiled if compiled is not None else python

sumset = _impl.sumset
half_cycle_sum = _impl.half_cycle_sum
max_leaving = _impl.max_leaving
centralizer_full = _impl.centralizer_full
frontier_max = _impl.frontier_max

__all__ = ["BACKEND", "centralizer_full", "compiled", "frontier_max", "half_cycle_sum", "max_leaving", "python", "sumset"]

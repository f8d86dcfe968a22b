"""Hot kernels: the compiled extension when it is built, otherwise numpy/Python.

Set ``DIGITOP_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as python

compiled = None
if not os.environ.get("DIGITOP_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else python

BACKEND = _impl.BACKEND
enumerate_assignments = _impl.enumerate_assignments
is_continuous = _impl.is_continuous
pair_violations = _impl.pair_violations
compatible_mask = _impl.compatible_mask

__all__ = [
    "BACKEND",
    "compatible_mask",
    "enumerate_assignments",
    "is_continuous",
    "pair_violations",
]

"""Hot numeric kernels with a JIT twin and a pure-numpy fallback.

The active implementation is fixed at import time from ``CORRDYN_BACKEND``
(see :mod:`corrdyn.backend`).  Both implementations stay importable for the
benchmark in :mod:`corrdyn.bench`.
"""

from __future__ import annotations

from .. import backend as _backend

BACKEND = _backend.selected_backend()

if BACKEND == "numba":
    _backend.apply_thread_cap()
    from . import numba_impl as _impl
else:
    from . import numpy_impl as _impl

fp_mul = _impl.fp_mul
fp_divmod = _impl.fp_divmod
aberth_iterate = _impl.aberth_iterate
escape_point = _impl.escape_point
escape_grid = _impl.escape_grid

__all__ = [
    "BACKEND",
    "fp_mul",
    "fp_divmod",
    "aberth_iterate",
    "escape_point",
    "escape_grid",
]

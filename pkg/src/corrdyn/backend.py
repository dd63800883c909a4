"""Kernel backend selection: numba JIT twins vs the pure-numpy fallback.

The environment variable ``CORRDYN_BACKEND`` chooses the implementation of
the hot kernels (finite-field polynomial arithmetic, the simultaneous root
iteration, the escape-time raster loop):

* ``auto`` (default) -- numba when it imports, numpy otherwise;
* ``numba``          -- force the JIT kernels, error if numba is missing;
* ``numpy``          -- force the vectorized fallback.

The variable is read once, at import of :mod:`corrdyn.kernels`.  Both
implementations are importable side by side (the benchmark compares them);
the flag only decides which one the library routes through.

``CORRDYN_THREADS`` caps internal parallelism.  The kernels are written
single-threaded for determinism, so the cap is forwarded to numba's thread
pool and otherwise has no effect.
"""

from __future__ import annotations

import os

ENV_BACKEND = "CORRDYN_BACKEND"
ENV_THREADS = "CORRDYN_THREADS"


def _numba_importable() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_AVAILABLE = _numba_importable()


def selected_backend() -> str:
    """Resolve the active backend name, ``"numba"`` or ``"numpy"``."""
    choice = os.environ.get(ENV_BACKEND, "auto").strip().lower()
    if choice in ("", "auto"):
        return "numba" if NUMBA_AVAILABLE else "numpy"
    if choice == "numba":
        if not NUMBA_AVAILABLE:
            raise RuntimeError(f"{ENV_BACKEND}=numba but numba is not importable")
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise ValueError(f"unknown {ENV_BACKEND}={choice!r}; use auto, numba or numpy")


def apply_thread_cap() -> int:
    """Clamp numba's thread pool to ``CORRDYN_THREADS`` if set.

    Returns the effective cap (0 means "not set").
    """
    raw = os.environ.get(ENV_THREADS, "").strip()
    if not raw:
        return 0
    cap = max(1, int(raw))
    if NUMBA_AVAILABLE:
        import numba

        try:
            numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))
        except ValueError:
            pass
    return cap

"""Benchmark the numba kernels against the pure-numpy fallback.

Run as ``python -m corrdyn.bench`` (add ``--quick`` for smaller sizes).
Imports both implementations directly, so the result is independent of the
CORRDYN_BACKEND selection.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import backend
from .kernels import numpy_impl


def _load_numba_impl():
    if not backend.NUMBA_AVAILABLE:
        return None
    from .kernels import numba_impl
    return numba_impl


def _time(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def _bench_case(name, args, nb_impl, getter, check):
    np_fn = getter(numpy_impl)
    t_np, r_np = _time(np_fn, *args)
    row = {"name": name, "numpy": t_np, "numba": None, "speedup": None}
    if nb_impl is not None:
        nb_fn = getter(nb_impl)
        nb_fn(*args)  # warm the JIT outside the timer
        t_nb, r_nb = _time(nb_fn, *args)
        row["numba"] = t_nb
        row["speedup"] = t_np / t_nb if t_nb > 0 else float("inf")
        check(r_np, r_nb)
    return row


def run(quick: bool = False):
    rng = np.random.Generator(np.random.Philox(key=20240601))
    nb_impl = _load_numba_impl()
    rows = []

    # F_p product at the working degree scale
    deg = 2000 if quick else 20000
    p = 3
    a = rng.integers(0, p, size=deg + 1).astype(np.int64)
    b = rng.integers(0, p, size=deg + 1).astype(np.int64)
    rows.append(_bench_case(
        f"fp_mul deg {deg} (p=3)", (a, b, p), nb_impl,
        lambda impl: impl.fp_mul,
        lambda x, y: np.testing.assert_array_equal(x, y)))

    # F_p division, unbalanced degrees as in the Euclidean loop
    dega = 2 * deg
    biga = rng.integers(0, p, size=dega + 1).astype(np.int64)
    bigb = a.copy()
    bigb[-1] = 1
    rows.append(_bench_case(
        f"fp_divmod deg {dega}/{deg}", (biga, bigb, p), nb_impl,
        lambda impl: impl.fp_divmod,
        lambda x, y: (np.testing.assert_array_equal(x[0], y[0]),
                      np.testing.assert_array_equal(x[1], y[1]))))

    # simultaneous root iteration, batched
    degr = 12
    coeffs = (rng.normal(size=degr + 1) + 1j * rng.normal(size=degr + 1))
    z0 = np.exp(2j * np.pi * np.arange(degr) / degr) * 0.7

    def run_aberth(impl):
        def body(c, z, it, tol):
            out = None
            for _ in range(200 if quick else 1000):
                out = impl.aberth_iterate(c, z, it, tol)
            return out[0]
        return body

    rows.append(_bench_case(
        f"aberth deg {degr} x{200 if quick else 1000}",
        (coeffs, z0, 80, 1e-12), nb_impl, run_aberth,
        lambda x, y: np.testing.assert_allclose(np.sort_complex(x),
                                                np.sort_complex(y), rtol=1e-6)))

    # escape-time raster
    n = 96 if quick else 192
    res = np.linspace(-4.5, 4.5, n)
    ims = np.linspace(-4.5, 4.5, n)
    rows.append(_bench_case(
        f"escape_grid {n}x{n} depth 20", (res, ims, 3, 2, 20, 4096), nb_impl,
        lambda impl: impl.escape_grid,
        lambda x, y: _check_grid(x, y)))

    return rows


def _check_grid(a, b):
    # float libm differences may flip rare boundary pixels; demand near-identity
    mismatch = int((a[0] != b[0]).sum())
    total = a[0].size
    if mismatch > max(2, total // 1000):
        raise AssertionError(f"backends disagree on {mismatch}/{total} pixels")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="smaller sizes")
    args = ap.parse_args()
    print(f"numba available: {backend.NUMBA_AVAILABLE}")
    print(f"selected backend: {backend.selected_backend()}")
    print("-" * 64)
    print(f"{'kernel':<34}{'numpy':>9}{'numba':>9}{'speedup':>10}")
    print("-" * 64)
    for row in run(quick=args.quick):
        numba_s = f"{row['numba']:.4f}" if row["numba"] is not None else "n/a"
        speed = f"{row['speedup']:.1f}x" if row["speedup"] is not None else "n/a"
        print(f"{row['name']:<34}{row['numpy']:>9.4f}{numba_s:>9}{speed:>10}")


if __name__ == "__main__":
    main()

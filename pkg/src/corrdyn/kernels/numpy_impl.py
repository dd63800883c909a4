"""Pure-numpy implementations of the hot kernels.

These are the fallback path selected by ``CORRDYN_BACKEND=numpy``.  The
numba twins in :mod:`corrdyn.kernels.numba_impl` follow the same arithmetic
step for step (same dedup grid, same child enumeration order, same
truncation rules) so the two backends agree on every integer output and to
float rounding on every real one.

Conventions shared by both backends:

* F_p polynomials are int64 arrays of residues in ``[0, p)``, ascending
  degree, leading coefficient of trimmed inputs nonzero.  Products are exact
  in int64 provided ``len * (p-1)**2 < 2**63``; callers enforce ``p < 2**21``.
* The escape kernels work on the family y^e = x^d + c with start point 0 and
  the certified radius R = (2 max(1,|c|))^(1/d): any vertex beyond R can
  never return, so dropping it is sound and an emptied frontier is an escape
  certificate.  Frontier points are deduplicated on a grid of cell R*1e-6;
  a frontier exceeding ``cap`` points returns "survived" with a saturation
  flag (the conservative direction).
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi

# Cell indices fit in 2^20 (|x|/cell <= ~1e6), so a (re, im) key fits in
# 2^41 and a (pixel, key) composite in 2^63 as long as npix < 2^20 (the
# renderer chunks rows to stay inside that).
_KEY_SHIFT = 1 << 21
_PIX_SHIFT = 1 << 42


# ---------------------------------------------------------------------------
# F_p polynomial arithmetic
# ---------------------------------------------------------------------------

def fp_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two F_p coefficient arrays (ascending degree), reduced."""
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return np.convolve(a, b) % p


def fp_divmod(a: np.ndarray, b: np.ndarray, p: int):
    """Quotient and remainder of a by b over F_p.

    ``b`` must be trimmed (nonzero leading coefficient).  The remainder is
    returned with length ``len(b) - 1`` and may carry leading zeros.
    """
    la = a.shape[0]
    lb = b.shape[0]
    if lb == 0:
        raise ZeroDivisionError("fp_divmod by zero polynomial")
    if la < lb:
        r = np.zeros(lb - 1, dtype=np.int64)
        r[:la] = a
        return np.zeros(0, dtype=np.int64), r
    r = a.copy()
    q = np.zeros(la - lb + 1, dtype=np.int64)
    inv_lead = pow(int(b[lb - 1]), p - 2, p)
    for k in range(la - lb, -1, -1):
        coef = (r[k + lb - 1] * inv_lead) % p
        q[k] = coef
        if coef:
            r[k:k + lb] = (r[k:k + lb] - coef * b) % p
    return q, r[:lb - 1].copy()


# ---------------------------------------------------------------------------
# Simultaneous complex root iteration (Aberth-Ehrlich)
# ---------------------------------------------------------------------------

def _cpolyval(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full_like(z, coeffs[-1])
    for k in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * z + coeffs[k]
    return acc


def _rpolyval(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    acc = np.full_like(x, coeffs[-1])
    for k in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * x + coeffs[k]
    return acc


def aberth_iterate(coeffs: np.ndarray, z: np.ndarray, max_iter: int, rtol: float):
    """Run Aberth-Ehrlich updates until every residual certifies.

    ``coeffs`` ascending complex128 with nonzero leading coefficient, ``z``
    the current root estimates.  Returns ``(z, residual, scale, iters,
    converged)`` where ``residual[j] = |p(z_j)|`` and ``scale[j] = sum_i
    |a_i| max(1,|z_j|)^i`` is the magnitude scale used for certification.
    """
    z = z.copy()
    deg = coeffs.shape[0] - 1
    dcoeffs = coeffs[1:] * np.arange(1, deg + 1, dtype=np.float64)
    abs_coeffs = np.abs(coeffs)
    residual = np.abs(_cpolyval(coeffs, z))
    scale = _rpolyval(abs_coeffs, np.maximum(1.0, np.abs(z)))
    iters = 0
    for iters in range(1, max_iter + 1):
        pz = _cpolyval(coeffs, z)
        residual = np.abs(pz)
        scale = _rpolyval(abs_coeffs, np.maximum(1.0, np.abs(z)))
        converged = residual <= rtol * scale
        if converged.all():
            return z, residual, scale, iters, True
        dpz = _cpolyval(dcoeffs, z)
        w = np.empty_like(z)
        ok = dpz != 0
        w[ok] = pz[ok] / dpz[ok]
        # stalled on a critical point of the polynomial: deterministic nudge
        w[~ok] = 0.5 * (1.0 + np.abs(z[~ok]))
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        diff[diff == 0] = 1e-12
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        sums = inv.sum(axis=1)
        denom = 1.0 - w * sums
        denom[np.abs(denom) < 1e-300] = 1.0
        delta = w / denom
        z = np.where(converged, z, z - delta)
    return z, residual, scale, iters, False


# ---------------------------------------------------------------------------
# Escape-time kernels for the unicritical family y^e = x^d + c
# ---------------------------------------------------------------------------

def _children(xre: np.ndarray, xim: np.ndarray, cre, cim, d: int, e: int):
    """All e-th root branches of x^d + c, row-major (parent, branch)."""
    wre = xre.copy()
    wim = xim.copy()
    for _ in range(d - 1):
        wre, wim = wre * xre - wim * xim, wre * xim + wim * xre
    wre = wre + cre
    wim = wim + cim
    rmod = np.hypot(wre, wim) ** (1.0 / e)
    theta = np.arctan2(wim, wre) / e
    ang = theta[:, None] + (TWO_PI / e) * np.arange(e)[None, :]
    yre = rmod[:, None] * np.cos(ang)
    yim = rmod[:, None] * np.sin(ang)
    return yre.ravel(), yim.ravel()


def _dedup_first(keys: np.ndarray) -> np.ndarray:
    """Ascending indices of the first occurrence of each distinct key."""
    _, idx = np.unique(keys, return_index=True)
    return np.sort(idx)


def escape_point(cre: float, cim: float, d: int, e: int, depth: int, cap: int):
    """Escape depth of the critical point 0 for y^e = x^d + c.

    Returns ``(k, saturated)``: ``k >= 1`` means the bounded frontier first
    emptied at step k (certified escape), ``k == 0`` means survived to
    ``depth`` (or saturated the cap, in which case ``saturated`` is True).
    """
    cmod = math.hypot(cre, cim)
    radius = (2.0 * max(1.0, cmod)) ** (1.0 / d)
    cell = radius * 1e-6
    xre = np.zeros(1)
    xim = np.zeros(1)
    for k in range(1, depth + 1):
        yre, yim = _children(xre, xim, cre, cim, d, e)
        keep = np.hypot(yre, yim) <= radius
        yre = yre[keep]
        yim = yim[keep]
        if yre.shape[0] == 0:
            return k, False
        keys = (np.rint(yre / cell).astype(np.int64) * _KEY_SHIFT
                + np.rint(yim / cell).astype(np.int64))
        sel = _dedup_first(keys)
        if sel.shape[0] > cap:
            return 0, True
        xre = yre[sel]
        xim = yim[sel]
    return 0, False


def escape_grid(res: np.ndarray, ims: np.ndarray, d: int, e: int,
                depth: int, cap: int):
    """Vectorized :func:`escape_point` over the pixel grid res x ims.

    Returns ``(karr, satarr)`` of shape ``(len(ims), len(res))``.  All live
    frontiers advance together in flat (pixel, point) arrays; dedup keys are
    prefixed with the pixel id so first-occurrence order per pixel matches
    the scalar kernel.
    """
    width = res.shape[0]
    height = ims.shape[0]
    npix = width * height
    karr = np.zeros((height, width), dtype=np.int32)
    satarr = np.zeros((height, width), dtype=np.bool_)

    cre_flat = np.tile(res, height)
    cim_flat = np.repeat(ims, width)
    radius = (2.0 * np.maximum(1.0, np.hypot(cre_flat, cim_flat))) ** (1.0 / d)
    cell = radius * 1e-6

    pid = np.arange(npix, dtype=np.int64)
    xre = np.zeros(npix)
    xim = np.zeros(npix)
    active = np.ones(npix, dtype=np.bool_)

    for k in range(1, depth + 1):
        if pid.shape[0] == 0:
            break
        yre, yim = _children(xre, xim, cre_flat[pid], cim_flat[pid], d, e)
        cpid = np.repeat(pid, e)
        keep = np.hypot(yre, yim) <= radius[cpid]
        yre, yim, cpid = yre[keep], yim[keep], cpid[keep]

        # pixels active before the step with no surviving children escaped
        alive = np.zeros(npix, dtype=np.bool_)
        alive[cpid] = True
        escaped = active & ~alive
        karr.ravel()[np.nonzero(escaped)[0]] = k
        active &= alive

        if cpid.shape[0] == 0:
            pid = cpid
            break
        keys = (np.rint(yre / cell[cpid]).astype(np.int64) * _KEY_SHIFT
                + np.rint(yim / cell[cpid]).astype(np.int64))
        sel = _dedup_first(cpid * _PIX_SHIFT + keys)
        cpid, yre, yim = cpid[sel], yre[sel], yim[sel]

        counts = np.bincount(cpid, minlength=npix)
        sat = counts > cap
        if sat.any():
            satarr.ravel()[np.nonzero(sat)[0]] = True
            active &= ~sat
            keep = ~sat[cpid]
            cpid, yre, yim = cpid[keep], yre[keep], yim[keep]
        pid, xre, xim = cpid, yre, yim
    return karr, satarr

"""Numba JIT twins of the kernels in :mod:`corrdyn.kernels.numpy_impl`.

Every function mirrors the numpy fallback step for step: same child
enumeration order, same dedup grid and first-occurrence rule, same
truncation.  Integer outputs are identical across backends; float outputs
agree to libm rounding.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi
_KEY_SHIFT = 1 << 21
_IDX_SHIFT = 1 << 16


# ---------------------------------------------------------------------------
# F_p polynomial arithmetic
# ---------------------------------------------------------------------------

@njit(cache=True)
def _pow_mod(base: np.int64, exp: np.int64, p: np.int64) -> np.int64:
    r = np.int64(1)
    b = base % p
    while exp > 0:
        if exp & 1:
            r = (r * b) % p
        b = (b * b) % p
        exp >>= 1
    return r


@njit(cache=True)
def fp_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(la + lb - 1, dtype=np.int64)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                out[i + j] += ai * b[j]
    return out % p


@njit(cache=True)
def fp_divmod(a: np.ndarray, b: np.ndarray, p: int):
    la = a.shape[0]
    lb = b.shape[0]
    if la < lb:
        r = np.zeros(lb - 1, dtype=np.int64)
        r[:la] = a
        return np.zeros(0, dtype=np.int64), r
    r = a.copy()
    q = np.zeros(la - lb + 1, dtype=np.int64)
    inv_lead = _pow_mod(b[lb - 1], p - 2, p)
    for k in range(la - lb, -1, -1):
        coef = (r[k + lb - 1] * inv_lead) % p
        q[k] = coef
        if coef:
            for j in range(lb):
                r[k + j] = (r[k + j] - coef * b[j]) % p
    return q, r[:lb - 1].copy()


# ---------------------------------------------------------------------------
# Simultaneous complex root iteration (Aberth-Ehrlich)
# ---------------------------------------------------------------------------

@njit(cache=True)
def aberth_iterate(coeffs: np.ndarray, z: np.ndarray, max_iter: int, rtol: float):
    z = z.copy()
    n = z.shape[0]
    deg = coeffs.shape[0] - 1
    dcoeffs = np.empty(deg, dtype=np.complex128)
    for k in range(deg):
        dcoeffs[k] = coeffs[k + 1] * (k + 1)
    abs_coeffs = np.abs(coeffs)
    residual = np.empty(n)
    scale = np.empty(n)
    iters = 0
    for iters in range(1, max_iter + 1):
        pz = np.empty(n, dtype=np.complex128)
        allok = True
        for j in range(n):
            acc = coeffs[deg] + 0j
            for k in range(deg - 1, -1, -1):
                acc = acc * z[j] + coeffs[k]
            pz[j] = acc
            residual[j] = abs(acc)
            x = max(1.0, abs(z[j]))
            s = abs_coeffs[deg]
            for k in range(deg - 1, -1, -1):
                s = s * x + abs_coeffs[k]
            scale[j] = s
            if residual[j] > rtol * s:
                allok = False
        if allok:
            return z, residual, scale, iters, True
        for j in range(n):
            if residual[j] <= rtol * scale[j]:
                continue
            acc = dcoeffs[deg - 1] + 0j
            for k in range(deg - 2, -1, -1):
                acc = acc * z[j] + dcoeffs[k]
            if acc != 0:
                w = pz[j] / acc
            else:
                w = 0.5 * (1.0 + abs(z[j])) + 0j
            ssum = 0.0 + 0j
            for k in range(n):
                if k != j:
                    dz = z[j] - z[k]
                    if dz == 0:
                        dz = 1e-12 + 0j
                    ssum += 1.0 / dz
            denom = 1.0 - w * ssum
            if abs(denom) < 1e-300:
                denom = 1.0 + 0j
            z[j] = z[j] - w / denom
    return z, residual, scale, iters, False


# ---------------------------------------------------------------------------
# Escape-time kernels for the unicritical family y^e = x^d + c
# ---------------------------------------------------------------------------

@njit(cache=True)
def escape_point(cre: float, cim: float, d: int, e: int, depth: int, cap: int):
    cmod = math.hypot(cre, cim)
    radius = (2.0 * max(1.0, cmod)) ** (1.0 / d)
    cell = radius * 1e-6
    xre = np.zeros(1)
    xim = np.zeros(1)
    for k in range(1, depth + 1):
        n = xre.shape[0]
        tot = n * e
        yre = np.empty(tot)
        yim = np.empty(tot)
        m = 0
        for i in range(n):
            wre = xre[i]
            wim = xim[i]
            for _ in range(d - 1):
                t = wre * xre[i] - wim * xim[i]
                wim = wre * xim[i] + wim * xre[i]
                wre = t
            wre += cre
            wim += cim
            rmod = math.hypot(wre, wim) ** (1.0 / e)
            theta = math.atan2(wim, wre) / e
            for j in range(e):
                ang = theta + (TWO_PI / e) * j
                cr = rmod * math.cos(ang)
                ci = rmod * math.sin(ang)
                if math.hypot(cr, ci) <= radius:
                    yre[m] = cr
                    yim[m] = ci
                    m += 1
        if m == 0:
            return k, False
        if m >= _IDX_SHIFT:
            return 0, True
        comp = np.empty(m, dtype=np.int64)
        keys = np.empty(m, dtype=np.int64)
        for i in range(m):
            kk = (np.int64(round(yre[i] / cell)) * _KEY_SHIFT
                  + np.int64(round(yim[i] / cell)))
            keys[i] = kk
            comp[i] = kk * _IDX_SHIFT + i
        order = np.argsort(comp)
        sel = np.empty(m, dtype=np.int64)
        cnt = 0
        prev = np.int64(0)
        for t in range(m):
            o = order[t]
            if t == 0 or keys[o] != prev:
                sel[cnt] = o
                cnt += 1
                prev = keys[o]
        if cnt > cap:
            return 0, True
        sel2 = np.sort(sel[:cnt])
        nxre = np.empty(cnt)
        nxim = np.empty(cnt)
        for i in range(cnt):
            nxre[i] = yre[sel2[i]]
            nxim[i] = yim[sel2[i]]
        xre = nxre
        xim = nxim
    return 0, False


@njit(cache=True)
def escape_grid(res: np.ndarray, ims: np.ndarray, d: int, e: int,
                depth: int, cap: int):
    karr = np.zeros((ims.shape[0], res.shape[0]), dtype=np.int32)
    satarr = np.zeros((ims.shape[0], res.shape[0]), dtype=np.bool_)
    for iy in range(ims.shape[0]):
        for ix in range(res.shape[0]):
            k, sat = escape_point(res[ix], ims[iy], d, e, depth, cap)
            karr[iy, ix] = k
            satarr[iy, ix] = sat
    return karr, satarr

"""Brute-force resultant oracle for the unicritical parameter polynomials.

Computes R_0(w, c) = w, R_{k+1}(w, c) = Res_z(R_k(z, c), z^p + c - w^e)
literally, as Sylvester-matrix determinants over F_p[w, c] (fraction-free
Bareiss elimination), and returns the monic normalization of R_n(0, c).
This is the validation twin of the fast recursion in
:mod:`corrdyn.unicritical`; the two must agree coefficientwise.

The oracle is deliberately budgeted: bivariate degrees explode, so only
n <= 4 is supported.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceededError
from .fppoly import FpPoly, is_prime

ORACLE_MAX_N = 4


# ---------------------------------------------------------------------------
# Dense bivariate polynomials over F_p: arr[i, j] = coeff of w^i c^j
# ---------------------------------------------------------------------------

def _b_trim(arr: np.ndarray) -> np.ndarray:
    if arr.size == 0:
        return np.zeros((0, 0), dtype=np.int64)
    rows = arr.shape[0]
    while rows > 0 and not arr[rows - 1].any():
        rows -= 1
    if rows == 0:
        return np.zeros((0, 0), dtype=np.int64)
    cols = arr.shape[1]
    sub = arr[:rows]
    while cols > 0 and not sub[:, cols - 1].any():
        cols -= 1
    return np.ascontiguousarray(sub[:, :cols])


def _b_is_zero(arr: np.ndarray) -> bool:
    return arr.size == 0


def _b_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if _b_is_zero(a) or _b_is_zero(b):
        return np.zeros((0, 0), dtype=np.int64)
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1),
                   dtype=np.int64)
    for i in range(a.shape[0]):
        if not a[i].any():
            continue
        for k in range(b.shape[0]):
            if b[k].any():
                out[i + k, :] += np.convolve(a[i], b[k])
    return _b_trim(out % p)


def _b_sub(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    rows = max(a.shape[0], b.shape[0], 1)
    cols = max(a.shape[1] if a.size else 1, b.shape[1] if b.size else 1, 1)
    out = np.zeros((rows, cols), dtype=np.int64)
    if a.size:
        out[:a.shape[0], :a.shape[1]] = a
    if b.size:
        out[:b.shape[0], :b.shape[1]] -= b
    return _b_trim(out % p)


def _b_divexact(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact division in F_p[w][c], long division along the w axis.

    Long division works here because the quotient exists in the domain:
    each intermediate leading w-coefficient is divisible by lead_w(b).
    """
    if _b_is_zero(a):
        return a
    if _b_is_zero(b):
        raise ZeroDivisionError("bivariate division by zero")
    dw_b = b.shape[0] - 1
    lead_b = FpPoly(p, b[dw_b])
    dw_a = a.shape[0] - 1
    if dw_a < dw_b:
        raise ArithmeticError("inexact bivariate division")
    qrows = dw_a - dw_b + 1
    # generous column workspace: intermediate remainders can be wider than a
    cols = a.shape[1] + qrows * max(b.shape[1], 1) + 1
    rem = np.zeros((a.shape[0], cols), dtype=np.int64)
    rem[:, :a.shape[1]] = a
    q = np.zeros((qrows, cols), dtype=np.int64)
    for k in range(qrows - 1, -1, -1):
        lead_r = FpPoly(p, rem[k + dw_b])
        if lead_r.is_zero():
            continue
        qc, rc = lead_r.divmod(lead_b)
        if not rc.is_zero():
            raise ArithmeticError("inexact bivariate division")
        qarr = qc.coeffs
        q[k, :qarr.shape[0]] = qarr
        # rem -= (qc * w^k) * b
        for i in range(b.shape[0]):
            if b[i].any():
                prod = np.convolve(qarr, b[i]) % p
                rem[k + i, :prod.shape[0]] = (rem[k + i, :prod.shape[0]] - prod) % p
    if _b_trim(rem).size:
        raise ArithmeticError("inexact bivariate division")
    return _b_trim(q)


def _b_const(p: int, value: int) -> np.ndarray:
    if value % p == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array([[value % p]], dtype=np.int64)


# ---------------------------------------------------------------------------
# Bareiss determinant of a matrix of bivariate polynomials
# ---------------------------------------------------------------------------

def _bareiss_det(mat, p: int) -> np.ndarray:
    n = len(mat)
    m = [row[:] for row in mat]
    sign = 1
    prev = _b_const(p, 1)
    for k in range(n - 1):
        if _b_is_zero(m[k][k]):
            pivot_row = -1
            for i in range(k + 1, n):
                if not _b_is_zero(m[i][k]):
                    pivot_row = i
                    break
            if pivot_row < 0:
                return np.zeros((0, 0), dtype=np.int64)
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _b_sub(_b_mul(m[k][k], m[i][j], p),
                             _b_mul(m[i][k], m[k][j], p), p)
                if k == 0:
                    m[i][j] = num
                else:
                    m[i][j] = _b_divexact(num, prev, p) if not _b_is_zero(num) else num
            m[i][k] = np.zeros((0, 0), dtype=np.int64)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    if sign < 0:
        det = _b_sub(np.zeros((0, 0), dtype=np.int64), det, p)
    return det


def _sylvester_det(a_z, b_z, p: int) -> np.ndarray:
    """Res_z of two z-polynomials with bivariate coefficients.

    ``a_z`` and ``b_z`` are lists of bivariate arrays, ascending z-degree
    with nonzero leading entry.  Uses the classical Sylvester matrix, rows
    of ``a_z`` first, so the determinant equals
    lc(a)^deg(b) * prod_{a(alpha)=0} b(alpha).
    """
    m = len(a_z) - 1
    n = len(b_z) - 1
    if m == 0:
        raise ArithmeticError("degenerate resultant: constant first argument")
    size = m + n
    zero = np.zeros((0, 0), dtype=np.int64)
    mat = [[zero for _ in range(size)] for _ in range(size)]
    a_desc = a_z[::-1]
    b_desc = b_z[::-1]
    for r in range(n):
        for t in range(m + 1):
            mat[r][r + t] = a_desc[t]
    for r in range(m):
        for t in range(n + 1):
            mat[n + r][r + t] = b_desc[t]
    return _bareiss_det(mat, p)


# ---------------------------------------------------------------------------
# The oracle
# ---------------------------------------------------------------------------

def _w_rows(arr: np.ndarray):
    """Rows of a bivariate array as z-coefficients (substituting w -> z)."""
    if _b_is_zero(arr):
        return [np.zeros((0, 0), dtype=np.int64)]
    rows = []
    for i in range(arr.shape[0]):
        rows.append(_b_trim(arr[i:i + 1].copy()))
    while len(rows) > 1 and _b_is_zero(rows[-1]):
        rows.pop()
    return rows


def resultant_oracle(p: int, e: int, n: int) -> FpPoly:
    """The parameter polynomial of critical return time dividing n, by resultants.

    Returns the monic polynomial in c whose roots (over the algebraic
    closure of F_p) are exactly the c for which the correspondence
    y^e = x^p + c has a path 0 -> ... -> 0 of length n.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not (1 <= e < p):
        raise ValueError("need 1 <= e < p")
    if not (1 <= n <= ORACLE_MAX_N):
        raise BudgetExceededError(
            f"resultant oracle supports 1 <= n <= {ORACLE_MAX_N}, got {n}")

    # B(z) = z^p + c - w^e, entries bivariate in (w, c)
    b0 = np.zeros((e + 1, 2), dtype=np.int64)
    b0[0, 1] = 1           # +c
    b0[e, 0] = (p - 1)     # -w^e
    b_z = [_b_trim(b0)] + [np.zeros((0, 0), dtype=np.int64)] * (p - 1) \
        + [_b_const(p, 1)]

    # B(z) with w = 0: z^p + c, univariate entries
    b0_w0 = np.zeros((1, 2), dtype=np.int64)
    b0_w0[0, 1] = 1
    b_z_w0 = [_b_trim(b0_w0)] + [np.zeros((0, 0), dtype=np.int64)] * (p - 1) \
        + [_b_const(p, 1)]

    # R_0 = w
    r = np.zeros((2, 1), dtype=np.int64)
    r[1, 0] = 1
    r = _b_trim(r)

    for step in range(n - 1):
        r = _sylvester_det(_w_rows(r), b_z, p)

    # last elimination with w specialized to 0 first (the leading
    # z-coefficients do not involve w, so specialization commutes with Res)
    final = _sylvester_det(_w_rows(r), b_z_w0, p)
    if _b_is_zero(final):
        return FpPoly.zero(p)
    coeffs = final[0] if final.shape[0] >= 1 else np.zeros(1, dtype=np.int64)
    return FpPoly(p, coeffs).monic()

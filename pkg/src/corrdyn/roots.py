"""Complex root finding by simultaneous (Aberth-Ehrlich) iteration.

Returns all roots with multiplicity, certified by the residual criterion
|p(r)| <= tol * scale(r) with scale the coefficient-magnitude bound
sum_i |a_i| max(1,|r|)^i.  Multiple roots come out as residual clusters;
they are merged to their centroid with the multiplicity-adjusted radius
~tol^(1/m) (the attainable accuracy for an m-fold root at working
precision).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import kernels
from .errors import RootFindingError

DEFAULT_TOL = 1e-12
_MAX_ITER = 400
_RESTART_PHASES = (0.40, 1.17, 2.31, 3.53)
_CLUSTER_K = 6.0


def polyval(coeffs, z):
    acc = coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def polyder(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[0]
    if n <= 1:
        return np.zeros(1, dtype=coeffs.dtype)
    return coeffs[1:] * np.arange(1, n, dtype=np.float64)


def _initial_guesses(coeffs: np.ndarray, phase: float) -> np.ndarray:
    deg = coeffs.shape[0] - 1
    lead = abs(coeffs[-1])
    radius = 0.0
    for k in range(deg):
        ck = abs(coeffs[k])
        if ck:
            radius = max(radius, (ck / lead) ** (1.0 / (deg - k)))
    radius = max(0.5 * radius, 1e-3)
    angles = 2.0 * math.pi * (np.arange(deg) + 0.5) / deg + phase
    return radius * np.exp(1j * angles)


def _cluster(points: list, tol: float) -> list:
    """Recursive multiplicity clustering; returns list of (centroid, count)."""
    m = len(points)
    if m == 1:
        return [(points[0], 1)]
    radius = _CLUSTER_K * tol ** (1.0 / m)

    # single-linkage components at the multiplicity-m radius
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            thr = radius * max(1.0, abs(points[i]), abs(points[j]))
            if abs(points[i] - points[j]) <= thr:
                pi, pj = find(i), find(j)
                if pi != pj:
                    parent[pi] = pj
    comps: dict = {}
    for i in range(m):
        comps.setdefault(find(i), []).append(points[i])
    groups = list(comps.values())
    if len(groups) == 1 and m > 1:
        centroid = sum(points) / m
        return [(centroid, m)]
    out = []
    for g in groups:
        out.extend(_cluster(g, tol))
    return out


def roots_complex(coeffs, tol: float = DEFAULT_TOL) -> np.ndarray:
    """All deg(p) roots with multiplicity, sorted by (real, imag).

    ``coeffs`` ascending, any numeric type.  Raises
    :class:`~corrdyn.errors.RootFindingError` with the residuals when the
    iteration cannot certify after restarts.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    while c.shape[0] > 1 and c[-1] == 0:
        c = c[:-1]
    deg = c.shape[0] - 1
    if deg < 1:
        raise ValueError("degree must be >= 1")
    if c[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")

    # factor out exact roots at the origin
    nzero = 0
    while nzero < deg and c[nzero] == 0:
        nzero += 1
    c = c[nzero:]
    deg_red = c.shape[0] - 1
    found = [0j] * nzero

    if deg_red == 1:
        found.append(-c[0] / c[1])
    elif deg_red == 2:
        # stable closed form; c[0] != 0 after the origin-root strip
        disc = c[1] * c[1] - 4.0 * c[2] * c[0]
        sq = cmath.sqrt(disc)
        q = -(c[1] + sq) if abs(c[1] + sq) >= abs(c[1] - sq) else -(c[1] - sq)
        q *= 0.5
        r1 = q / c[2]
        r2 = c[0] / q
        for centroid, count in _cluster([complex(r1), complex(r2)], tol):
            found.extend([centroid] * count)
    elif deg_red >= 3:
        last_residual = None
        last_scale = None
        ok = False
        for phase in _RESTART_PHASES:
            z0 = _initial_guesses(c, phase)
            z, residual, scale, _, converged = kernels.aberth_iterate(
                c, z0, _MAX_ITER, tol)
            last_residual, last_scale = residual, scale
            if converged:
                ok = True
                break
        if not ok:
            raise RootFindingError(
                f"no residual certificate after {_MAX_ITER} iterations x "
                f"{len(_RESTART_PHASES)} restarts (degree {deg_red})",
                residuals=np.asarray(last_residual),
                scale=np.asarray(last_scale))
        for centroid, count in _cluster([complex(v) for v in z], tol):
            found.extend([centroid] * count)

    out = np.array(sorted(found, key=lambda w: (w.real, w.imag)),
                   dtype=np.complex128)
    return out


def bounded_all_roots(coeffs) -> float:
    """A radius containing every root (Fujiwara-type, from |e c_j / lead|)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    deg = c.shape[0] - 1
    lead = abs(c[-1])
    r = 0.0
    for k in range(deg):
        ck = abs(c[k])
        if ck:
            r = max(r, (deg * ck / lead) ** (1.0 / (deg - k)))
    return r


def smallest_arg_root(value: complex, order: int) -> complex:
    """The order-th root of ``value`` with smallest non-negative argument."""
    if order == 1:
        return value
    mod = abs(value) ** (1.0 / order)
    base = cmath.phase(value)  # (-pi, pi]
    best = None
    best_arg = None
    for k in range(order):
        ang = (base + 2.0 * math.pi * k) / order
        ang_norm = ang % (2.0 * math.pi)
        if best is None or ang_norm < best_arg - 1e-15:
            best = mod * cmath.exp(1j * ang)
            best_arg = ang_norm
    return best

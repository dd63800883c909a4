"""Places of Q, p-adic valuations and Newton polygons.

Valuations are exact: integers/Fractions with ``math.inf`` as the explicit
sentinel for v(0) (named :data:`INFINITE_VALUATION`; it is never a numeric
stand-in like 10^9, and compares correctly against Fractions).  The
normalization is |p|_v = 1/p, so log|x|_v = -v_p(x) log p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .fppoly import is_prime

INFINITE_VALUATION = math.inf

ARCHIMEDEAN = "archimedean"
P_ADIC = "p-adic"


@dataclass(frozen=True)
class Place:
    """A place of Q: the archimedean one or a p-adic one."""

    kind: str
    prime: int | None = None

    def __post_init__(self):
        if self.kind == ARCHIMEDEAN:
            if self.prime is not None:
                raise ValueError("archimedean place carries no prime")
        elif self.kind == P_ADIC:
            if self.prime is None or not is_prime(self.prime):
                raise ValueError("p-adic place needs a prime")
        else:
            raise ValueError(f"unknown place kind {self.kind!r}")

    @classmethod
    def archimedean(cls) -> "Place":
        return cls(ARCHIMEDEAN)

    @classmethod
    def padic(cls, p: int) -> "Place":
        return cls(P_ADIC, p)

    @property
    def is_archimedean(self) -> bool:
        return self.kind == ARCHIMEDEAN

    def __str__(self):
        return "inf" if self.is_archimedean else str(self.prime)


def padic_valuation(x, p: int):
    """v_p(x) for a rational x, with v_p(0) = +infinity."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    x = Fraction(x)
    if x == 0:
        return INFINITE_VALUATION
    v = 0
    num = abs(x.numerator)
    while num % p == 0:
        num //= p
        v += 1
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def log_abs_padic(x, p: int) -> float:
    """log|x|_v at the p-adic place (−infinity for x = 0)."""
    v = padic_valuation(x, p)
    if v is INFINITE_VALUATION or v == INFINITE_VALUATION:
        return -math.inf
    return -v * math.log(p)


def newton_polygon_root_valuations(coeff_valuations):
    """Root valuations of a polynomial from its coefficient valuations.

    Input: v(a_0), ..., v(a_d) (Fractions/ints, ``INFINITE_VALUATION`` for
    missing terms); the leading valuation must be finite.  Output: the d
    root valuations (slopes of the lower convex hull of (i, v(a_i)), each
    with its horizontal-length multiplicity; roots at 0 reported as
    +infinity), sorted non-increasing.
    """
    vals = list(coeff_valuations)
    d = len(vals) - 1
    if d < 1:
        raise ValueError("need degree >= 1")
    if vals[d] == INFINITE_VALUATION:
        raise ValueError("leading coefficient must have finite valuation")
    pts = [(i, Fraction(v)) for i, v in enumerate(vals)
           if v != INFINITE_VALUATION]
    i_min = pts[0][0]
    out = [INFINITE_VALUATION] * i_min  # zero roots

    # lower convex hull, left to right
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = (y2 - y1) / (x2 - x1)
        slopes.extend([-slope] * (x2 - x1))
    slopes.sort(reverse=True)
    out.extend(slopes)
    return out

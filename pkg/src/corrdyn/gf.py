"""Arithmetic in the finite extension fields F_{p^k}.

Elements are encoded as integers in [0, p^k): the base-p digits are the
coefficients of the residue polynomial in the generator.  The modulus is
chosen deterministically as the first monic irreducible of degree k in the
integer-encoding order, so certificates are reproducible across runs.
"""

from __future__ import annotations

import numpy as np

from .fppoly import FpPoly, is_irreducible, is_prime


def least_irreducible(p: int, k: int) -> FpPoly:
    """First monic irreducible of degree k by ascending integer encoding."""
    if k == 1:
        return FpPoly.x(p)
    for enc in range(p ** k):
        coeffs = _digits(enc, p, k) + [1]
        f = FpPoly(p, coeffs)
        if is_irreducible(f):
            return f
    raise RuntimeError("unreachable: irreducibles of every degree exist")


def _digits(enc: int, p: int, k: int):
    out = []
    for _ in range(k):
        out.append(enc % p)
        enc //= p
    return out


class GF:
    """The field F_{p^k} with elements as integer encodings."""

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("k must be positive")
        self.p = p
        self.k = k
        self.size = p ** k
        self.modulus = least_irreducible(p, k)
        # reduction table: x^(k+j) mod modulus for j = 0..k-2
        self._red = []
        xk = FpPoly.monomial(p, k) % self.modulus
        cur = xk
        for _ in range(max(0, k - 1)):
            arr = np.zeros(k, dtype=np.int64)
            arr[:cur.coeffs.shape[0]] = cur.coeffs
            self._red.append(arr)
            cur = (cur * FpPoly.x(p)) % self.modulus

    # -- encoding ----------------------------------------------------------

    def encode(self, coeffs) -> int:
        enc = 0
        for c in reversed(list(coeffs)):
            enc = enc * self.p + (int(c) % self.p)
        return enc

    def decode(self, enc: int):
        return tuple(_digits(enc, self.p, self.k))

    def elements(self):
        return range(self.size)

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((-(a % p)) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da = np.array(_digits(a, p, k), dtype=np.int64)
        db = np.array(_digits(b, p, k), dtype=np.int64)
        prod = np.convolve(da, db) % p
        out = prod[:k].copy()
        if prod.shape[0] > k:
            for j in range(prod.shape[0] - k):
                cj = prod[k + j]
                if cj:
                    out = (out + cj * self._red[j]) % p
        return self.encode(out)

    def pow(self, a: int, n: int) -> int:
        result = 1 if self.k == 0 else self.encode([1] + [0] * (self.k - 1))
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def eval_fp_poly(self, poly: FpPoly, x: int) -> int:
        """Evaluate an F_p[c] polynomial at a field element (Horner)."""
        if poly.p != self.p:
            raise ValueError("modulus mismatch")
        acc = 0
        for c in poly.coeffs[::-1]:
            acc = self.add(self.mul(acc, x), self.encode([int(c)] + [0] * (self.k - 1)))
        return acc

"""Dense polynomial arithmetic over F_p.

Polynomials are stored as trimmed int64 coefficient arrays, ascending
degree, residues in [0, p).  The zero polynomial has an empty array and
degree -1.  Multiplication and division route through the kernel backend;
the algorithms here are the quadratic schoolbook ones, which stay well
inside the time budget at the degree cap (~6*10^4) this package targets.

The text format used by the CLI and fixtures is
``p=<prime>; coeffs=<c0>,<c1>,...,<cD>`` (ascending degree).
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import CorrdynError

MAX_MODULUS = 1 << 21  # keeps int64 convolution exact at the degree budget


class ModulusMismatchError(CorrdynError, ValueError):
    """Raised when two operands live over different primes."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _trim(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[0]
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


class FpPoly:
    """A dense polynomial over F_p."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs, _checked: bool = False):
        if not _checked:
            if not is_prime(p):
                raise ValueError(f"modulus {p} is not prime")
            if p >= MAX_MODULUS:
                raise ValueError(f"modulus {p} exceeds the supported bound {MAX_MODULUS}")
            arr = np.asarray(list(coeffs), dtype=np.int64) % p
            arr = _trim(arr)
        else:
            arr = coeffs
        self.p = p
        self.coeffs = arr

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "FpPoly":
        return cls(p, np.zeros(0, dtype=np.int64), _checked=is_prime(p))

    @classmethod
    def one(cls, p: int) -> "FpPoly":
        return cls(p, [1])

    @classmethod
    def x(cls, p: int) -> "FpPoly":
        return cls(p, [0, 1])

    @classmethod
    def monomial(cls, p: int, degree: int, coeff: int = 1) -> "FpPoly":
        c = np.zeros(degree + 1, dtype=np.int64)
        c[degree] = coeff % p
        return cls(p, c)

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def is_zero(self) -> bool:
        return self.coeffs.shape[0] == 0

    def is_constant(self) -> bool:
        return self.coeffs.shape[0] <= 1

    def leading(self) -> int:
        if self.is_zero():
            return 0
        return int(self.coeffs[-1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpPoly):
            return NotImplemented
        return (self.p == other.p
                and self.coeffs.shape == other.coeffs.shape
                and bool(np.all(self.coeffs == other.coeffs)))

    def __hash__(self):
        return hash((self.p, self.coeffs.tobytes()))

    def __repr__(self):
        return f"FpPoly(p={self.p}, coeffs={self.coeffs.tolist()})"

    def _check(self, other: "FpPoly"):
        if self.p != other.p:
            raise ModulusMismatchError(f"moduli differ: {self.p} vs {other.p}")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        n = max(self.coeffs.shape[0], other.coeffs.shape[0])
        out = np.zeros(n, dtype=np.int64)
        out[:self.coeffs.shape[0]] = self.coeffs
        out[:other.coeffs.shape[0]] += other.coeffs
        return FpPoly(self.p, _trim(out % self.p), _checked=True)

    def __sub__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        n = max(self.coeffs.shape[0], other.coeffs.shape[0])
        out = np.zeros(n, dtype=np.int64)
        out[:self.coeffs.shape[0]] = self.coeffs
        out[:other.coeffs.shape[0]] -= other.coeffs
        return FpPoly(self.p, _trim(out % self.p), _checked=True)

    def __neg__(self) -> "FpPoly":
        return FpPoly(self.p, _trim((-self.coeffs) % self.p), _checked=True)

    def __mul__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        prod = kernels.fp_mul(self.coeffs, other.coeffs, self.p)
        return FpPoly(self.p, _trim(prod), _checked=True)

    def scale(self, c: int) -> "FpPoly":
        c %= self.p
        if c == 0:
            return FpPoly.zero(self.p)
        return FpPoly(self.p, _trim((self.coeffs * c) % self.p), _checked=True)

    def divmod(self, other: "FpPoly"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        q, r = kernels.fp_divmod(self.coeffs, other.coeffs, self.p)
        return (FpPoly(self.p, _trim(q), _checked=True),
                FpPoly(self.p, _trim(r), _checked=True))

    def __floordiv__(self, other: "FpPoly") -> "FpPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "FpPoly") -> "FpPoly":
        return self.divmod(other)[1]

    def __pow__(self, n: int) -> "FpPoly":
        if n < 0:
            raise ValueError("negative power")
        result = FpPoly.one(self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def pow_mod(self, n: int, mod: "FpPoly") -> "FpPoly":
        """self^n reduced modulo ``mod`` (square and multiply)."""
        self._check(mod)
        result = FpPoly.one(self.p) % mod
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            n >>= 1
        return result

    def monic(self) -> "FpPoly":
        if self.is_zero():
            return self
        lead = self.leading()
        if lead == 1:
            return self
        return self.scale(pow(lead, self.p - 2, self.p))

    def derivative(self) -> "FpPoly":
        if self.coeffs.shape[0] <= 1:
            return FpPoly.zero(self.p)
        n = self.coeffs.shape[0]
        out = (self.coeffs[1:] * (np.arange(1, n, dtype=np.int64) % self.p)) % self.p
        return FpPoly(self.p, _trim(out), _checked=True)

    def evaluate(self, x: int) -> int:
        x %= self.p
        acc = 0
        for c in self.coeffs[::-1]:
            acc = (acc * x + int(c)) % self.p
        return acc

    def pth_root(self) -> "FpPoly":
        """Inverse of Frobenius on polynomials of the form q(c^p).

        Valid whenever every exponent with a nonzero coefficient is a
        multiple of p (in particular whenever the derivative vanishes).
        """
        if self.is_zero():
            return self
        if np.any(self.coeffs[np.arange(self.coeffs.shape[0]) % self.p != 0]):
            raise ValueError("polynomial is not a p-th power composition")
        return FpPoly(self.p, self.coeffs[::self.p].copy(), _checked=True)

    # -- text format --------------------------------------------------------

    def to_text(self) -> str:
        coeffs = self.coeffs.tolist() if not self.is_zero() else [0]
        return f"p={self.p}; coeffs=" + ",".join(str(c) for c in coeffs)

    @classmethod
    def from_text(cls, text: str) -> "FpPoly":
        parts = [s.strip() for s in text.strip().split(";")]
        if len(parts) != 2 or not parts[0].startswith("p=") or not parts[1].startswith("coeffs="):
            raise ValueError(f"bad FpPoly text: {text!r}")
        p = int(parts[0][2:])
        coeffs = [int(tok) for tok in parts[1][len("coeffs="):].split(",")]
        if any(c < 0 or c >= p for c in coeffs):
            raise ValueError("coefficients must lie in [0, p)")
        return cls(p, coeffs)


# ---------------------------------------------------------------------------
# gcd, radical, factorization
# ---------------------------------------------------------------------------

def fp_gcd(a: FpPoly, b: FpPoly) -> FpPoly:
    """Monic gcd by the Euclidean algorithm (quadratic in the degree)."""
    a._check(b)
    x, y = a, b
    while not y.is_zero():
        x, y = y, x % y
    return x.monic()


def fp_radical(a: FpPoly) -> FpPoly:
    """Product of the distinct monic irreducible factors of ``a``.

    Squarefree part via gcd with the derivative; exponents divisible by p
    survive that gcd entirely, so they are stripped and recovered through
    the p-th-root step.  The two parts are coprime by construction.
    """
    if a.is_zero():
        raise ValueError("radical of the zero polynomial")
    a = a.monic()
    if a.is_constant():
        return FpPoly.one(a.p)
    d = a.derivative()
    if d.is_zero():
        return fp_radical(a.pth_root())
    g = fp_gcd(a, d)
    w = (a // g).monic()  # each factor with exponent not divisible by p, once
    y = g
    while True:
        h = fp_gcd(y, w)
        if h.is_constant():
            break
        y = y // h
    # y is now a p-th power composition carrying the p | exponent factors
    if y.is_constant():
        return w
    return (w * fp_radical(y.pth_root())).monic()


def is_squarefree(a: FpPoly) -> bool:
    if a.is_zero():
        return False
    d = a.derivative()
    if d.is_zero():
        return a.is_constant()
    return fp_gcd(a, d).is_constant()


def frobenius_power(mod: FpPoly, k: int) -> FpPoly:
    """c^(p^k) reduced modulo ``mod`` (k rounds of Frobenius)."""
    x = FpPoly.x(mod.p) % mod
    for _ in range(k):
        x = x.pow_mod(mod.p, mod)
    return x


def is_irreducible(f: FpPoly) -> bool:
    """Rabin irreducibility test."""
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    f = f.monic()
    p = f.p
    x = FpPoly.x(p)
    xq = frobenius_power(f, n)
    if xq != x % f:
        return False
    for q in sorted({q for q in _prime_factors(n)}):
        xr = frobenius_power(f, n // q)
        if not fp_gcd(xr - (x % f), f).is_constant():
            return False
    return True


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _equal_degree_split(f: FpPoly, d: int, rng_state: list) -> FpPoly:
    """Cantor-Zassenhaus split of a squarefree product of degree-d factors."""
    p = f.p
    n = f.degree
    while True:
        # deterministic linear-congruential probe sequence
        rng_state[0] = (rng_state[0] * 6364136223846793005 + 1442695040888963407) % (1 << 63)
        coeffs = []
        s = rng_state[0]
        for _ in range(n):
            s = (s * 2862933555777941757 + 3037000493) % (1 << 63)
            coeffs.append(s % p)
        a = FpPoly(p, coeffs)
        if a.degree < 1:
            continue
        g = fp_gcd(a, f)
        if not g.is_constant():
            return g
        b = a.pow_mod((p ** d - 1) // 2, f) - FpPoly.one(p)
        g = fp_gcd(b, f)
        if not g.is_constant() and g.degree < n:
            return g


def fp_factor(a: FpPoly):
    """Factor into monic irreducibles; returns a list of (factor, exponent).

    Distinct-degree splitting followed by Cantor-Zassenhaus on each degree
    class (p odd), with multiplicities recovered by trial division.  Only
    desk-scale inputs are expected here (this supports the test oracles and
    period searches, not the bulk recursion work).
    """
    if a.is_zero():
        raise ValueError("factor of the zero polynomial")
    p = a.p
    if p == 2:
        raise NotImplementedError("factorization implemented for odd p only")
    rad = fp_radical(a)
    pieces = []
    x = FpPoly.x(p)
    h = x % rad
    v = rad
    d = 0
    while v.degree > 0:
        d += 1
        if d > v.degree // 2:
            pieces.append((v, v.degree))
            break
        h = h.pow_mod(p, v)
        g = fp_gcd(h - (x % v), v)
        if not g.is_constant():
            pieces.append((g, d))
            v = v // g
            h = h % v
    irreducibles = []
    rng_state = [0x5DEECE66D]
    for prod, d in pieces:
        stack = [prod]
        while stack:
            f = stack.pop()
            if f.degree == d:
                irreducibles.append(f.monic())
                continue
            g = _equal_degree_split(f, d, rng_state)
            stack.append(g)
            stack.append(f // g)
    irreducibles.sort(key=lambda f: (f.degree, f.coeffs.tolist()))
    out = []
    rem = a.monic()
    for f in irreducibles:
        mult = 0
        while True:
            q, r = rem.divmod(f)
            if not r.is_zero():
                break
            rem = q
            mult += 1
        out.append((f, mult))
    return out


def fp_valuation(a: FpPoly, pi: FpPoly) -> int:
    """Exact pi-adic valuation of ``a`` by repeated trial division."""
    if a.is_zero():
        raise ValueError("valuation of the zero polynomial")
    if pi.degree < 1:
        raise ValueError("valuation at a constant")
    v = 0
    cur = a
    while True:
        q, r = cur.divmod(pi)
        if not r.is_zero():
            return v
        v += 1
        cur = q

"""Variable-separated correspondences g(y) = f(x): data model and one-step
dynamics.

A correspondence is a pair of polynomials with deg f = d > deg g = e >= 1.
Coefficients are either exact rationals (Fractions) or complex floats; the
two kinds never mix inside one object.  The normal form is the pair of
parameter tuples (s, t) with f' = prod (x - s_i), g' = prod (y - t_j),
leading coefficients 1/d and 1/e and zero constant terms.

Text format (rational coefficients, ascending degree):
``d=<d>;e=<e>;f=<c0>,...,<cd>;g=<c0>,...,<ce>`` with entries ``num/den``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ExtensionRequiredError
from .fppoly import FpPoly
from .roots import polyval, roots_complex, smallest_arg_root

RATIONAL = "rational"
COMPLEX = "complex"


def _classify(coeffs) -> str:
    if all(isinstance(c, (Fraction, int)) for c in coeffs):
        return RATIONAL
    return COMPLEX


def _poly_trim(coeffs: list) -> list:
    n = len(coeffs)
    while n > 1 and coeffs[n - 1] == 0:
        n -= 1
    return list(coeffs[:n])


def poly_from_roots(roots, lead=1):
    """Monic-times-``lead`` polynomial with the given roots (generic ring)."""
    coeffs = [lead]
    for r in roots:
        coeffs = [0] + coeffs
        for k in range(len(coeffs) - 1):
            coeffs[k] = coeffs[k] - r * coeffs[k + 1]
    return coeffs


def poly_compose_affine(coeffs, scale, shift):
    """Coefficients of p(scale*x + shift), by descending Horner steps."""
    acc = [coeffs[-1]]
    for c in list(coeffs[-2::-1]):
        # acc * (shift + scale*x) + c
        new = [shift * a for a in acc] + [0]
        for k, a in enumerate(acc):
            new[k + 1] += scale * a
        new[0] += c
        acc = new
    return acc


@dataclass(frozen=True)
class AffineMap:
    """z -> scale*z + shift with scale != 0."""

    scale: complex
    shift: complex

    def __post_init__(self):
        if self.scale == 0:
            raise ValueError("affine map must be invertible")

    def __call__(self, z):
        return self.scale * z + self.shift

    def inverse(self) -> "AffineMap":
        return AffineMap(1 / self.scale, -self.shift / self.scale)


class Correspondence:
    """The curve g(y) = f(x) with d = deg f > deg g = e >= 1."""

    def __init__(self, f_coeffs, g_coeffs):
        f = _poly_trim(list(f_coeffs))
        g = _poly_trim(list(g_coeffs))
        if len(f) - 1 <= len(g) - 1 or len(g) - 1 < 1:
            raise ValueError("need deg f > deg g >= 1")
        if f[-1] == 0 or g[-1] == 0:
            raise ValueError("leading coefficients must be nonzero")
        kf, kg = _classify(f), _classify(g)
        if kf != kg:
            raise ValueError("f and g must share a coefficient kind")
        if kf == RATIONAL:
            f = [Fraction(c) for c in f]
            g = [Fraction(c) for c in g]
        else:
            f = [complex(c) for c in f]
            g = [complex(c) for c in g]
        self.f = tuple(f)
        self.g = tuple(g)
        self.kind = kf

    @property
    def d(self) -> int:
        return len(self.f) - 1

    @property
    def e(self) -> int:
        return len(self.g) - 1

    @property
    def bidegree(self):
        return (self.d, self.e)

    def f_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.f], dtype=np.complex128)

    def g_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.g], dtype=np.complex128)

    def __repr__(self):
        return f"Correspondence(d={self.d}, e={self.e}, kind={self.kind})"

    # -- constructors / text format -----------------------------------------

    @classmethod
    def unicritical(cls, d: int, e: int, c) -> "Correspondence":
        """y^e = x^d + c."""
        if isinstance(c, (Fraction, int)):
            f = [Fraction(c)] + [Fraction(0)] * (d - 1) + [Fraction(1)]
            g = [Fraction(0)] * e + [Fraction(1)]
        else:
            f = [complex(c)] + [0j] * (d - 1) + [1 + 0j]
            g = [0j] * e + [1 + 0j]
        return cls(f, g)

    def to_text(self) -> str:
        if self.kind != RATIONAL:
            raise ValueError("text format carries rational coefficients only")

        def fmt(c: Fraction) -> str:
            return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

        return (f"d={self.d};e={self.e};"
                f"f={','.join(fmt(c) for c in self.f)};"
                f"g={','.join(fmt(c) for c in self.g)}")

    @classmethod
    def from_text(cls, text: str) -> "Correspondence":
        fields = dict(part.split("=", 1) for part in text.strip().split(";"))
        d = int(fields["d"])
        e = int(fields["e"])
        f = [Fraction(tok) for tok in fields["f"].split(",")]
        g = [Fraction(tok) for tok in fields["g"].split(",")]
        if len(f) != d + 1 or len(g) != e + 1:
            raise ValueError("coefficient count does not match the declared bidegree")
        return cls(f, g)


class NormalForm:
    """Parameter tuples (s, t): f_s' = prod (x - s_i), g_t' = prod (y - t_j),
    leading coefficients 1/d, 1/e, zero constant terms."""

    def __init__(self, s, t):
        s = list(s)
        t = list(t)
        kind = _classify(s + t) if (s or t) else RATIONAL
        if kind == RATIONAL:
            s = [Fraction(v) for v in s]
            t = [Fraction(v) for v in t]
        else:
            s = [complex(v) for v in s]
            t = [complex(v) for v in t]
        self.s = tuple(s)
        self.t = tuple(t)
        self.kind = kind

    @property
    def d(self) -> int:
        return len(self.s) + 1

    @property
    def e(self) -> int:
        return len(self.t) + 1

    def __repr__(self):
        return f"NormalForm(d={self.d}, e={self.e}, kind={self.kind})"

    def _antiderivative_of_root_product(self, roots, degree):
        one = Fraction(1) if self.kind == RATIONAL else 1.0
        prod = poly_from_roots(roots, lead=one)
        # integrate with zero constant term
        out = [0 * one]
        for k, c in enumerate(prod):
            out.append(c / (k + 1))
        return out

    def to_correspondence(self) -> Correspondence:
        f = self._antiderivative_of_root_product(self.s, self.d)
        g = self._antiderivative_of_root_product(self.t, self.e)
        return Correspondence(f, g)


@dataclass(frozen=True)
class PathPrefix:
    """A finite path x_0 -> ... -> x_n with g(x_{i+1}) = f(x_i)."""

    vertices: tuple

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def last(self):
        return self.vertices[-1]

    def shifted(self) -> "PathPrefix":
        if len(self.vertices) < 2:
            raise ValueError("cannot shift a length-0 prefix")
        return PathPrefix(self.vertices[1:])

    def max_residual(self, corr: Correspondence) -> float:
        """max_i |g(x_{i+1}) - f(x_i)| / max(1, |f(x_i)|)."""
        f = corr.f_complex()
        g = corr.g_complex()
        worst = 0.0
        for x, y in zip(self.vertices, self.vertices[1:]):
            fx = polyval(f, complex(x))
            gy = polyval(g, complex(y))
            worst = max(worst, abs(gy - fx) / max(1.0, abs(fx)))
        return worst


# ---------------------------------------------------------------------------
# one-step dynamics
# ---------------------------------------------------------------------------

def branch_step(corr: Correspondence, x, tol: float = 1e-12) -> np.ndarray:
    """The e roots (with multiplicity) of g(y) = f(x), sorted by (re, im)."""
    f = corr.f_complex()
    g = corr.g_complex()
    w = polyval(f, complex(x))
    h = g.copy()
    h[0] -= w
    return roots_complex(h, tol)


def branch_step_fp(g: FpPoly, f: FpPoly, x: int):
    """Exact roots with multiplicity of g(y) = f(x) over F_p (may be < e)."""
    p = g.p
    w = f.evaluate(x)
    h = g - FpPoly(p, [w])
    roots = []
    for r in range(p):
        lin = FpPoly(p, [(-r) % p, 1])
        while True:
            q, rem = h.divmod(lin)
            if rem.is_zero():
                roots.append(r)
                h = q
            else:
                break
    return sorted(roots)


def extend(prefix: PathPrefix, corr: Correspondence, tol: float = 1e-12):
    """All one-step extensions of the prefix (one per root, multiset)."""
    roots = branch_step(corr, prefix.last(), tol)
    return [PathPrefix(prefix.vertices + (complex(r),)) for r in roots]


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def _sub_polys(f, g):
    n = max(len(f), len(g))
    zero = f[0] * 0
    out = [zero] * n
    for i, c in enumerate(f):
        out[i] = out[i] + c
    for i, c in enumerate(g):
        out[i] = out[i] - c
    return _poly_trim(out)


def _rational_roots(coeffs):
    """All rational roots (with multiplicity) of a Fraction polynomial."""
    c = _poly_trim([Fraction(v) for v in coeffs])
    deg = len(c) - 1
    roots = []
    while deg >= 1 and c[0] == 0:
        roots.append(Fraction(0))
        c = c[1:]
        deg -= 1
    if deg < 1:
        return roots
    den_lcm = 1
    for v in c:
        den_lcm = den_lcm * v.denominator // math.gcd(den_lcm, v.denominator)
    ints = [int(v * den_lcm) for v in c]
    a0, ad = abs(ints[0]), abs(ints[-1])

    def divisors(n):
        out = []
        k = 1
        while k * k <= n:
            if n % k == 0:
                out.append(k)
                out.append(n // k)
            k += 1
        return sorted(set(out))

    candidates = sorted({Fraction(sp * pnum, qden)
                         for pnum in divisors(a0)
                         for qden in divisors(ad)
                         for sp in (1, -1)})
    for cand in candidates:
        while True:
            val = Fraction(0)
            for coef in c[::-1]:
                val = val * cand + coef
            if val != 0 or len(c) <= 1:
                break
            # deflate by (x - cand)
            newc = [Fraction(0)] * (len(c) - 1)
            acc = Fraction(0)
            for k in range(len(c) - 1, 0, -1):
                acc = c[k] + acc * cand
                newc[k - 1] = acc
            c = newc
            roots.append(cand)
    return roots


def _rational_nth_root(x: Fraction, n: int):
    """A rational n-th root of x, or None."""
    if n == 1:
        return x
    if x == 0:
        return Fraction(0)
    sign = 1
    if x < 0:
        if n % 2 == 0:
            return None
        sign = -1
        x = -x

    def iroot(m: int):
        r = round(m ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == m:
                return cand
        return None

    rn = iroot(x.numerator)
    rd = iroot(x.denominator)
    if rn is None or rd is None:
        return None
    return sign * Fraction(rn, rd)


def normalize(corr: Correspondence, tol: float = 1e-12):
    """Equivalent normal form plus the witnessing affine maps.

    Returns ``(nf, pre, post)`` with pre the coordinate change psi and post
    the value change phi, so that phi(f(x)) = F(psi(x)) and phi(g(y)) =
    G(psi(y)) coefficientwise.  Conventions: the common point of smallest
    magnitude (ties by argument), and the scale root of smallest
    non-negative argument.  Over the rationals the needed roots may not
    exist; that raises :class:`~corrdyn.errors.ExtensionRequiredError`
    rather than extending the field.
    """
    d, e = corr.d, corr.e
    if corr.kind == RATIONAL:
        return _normalize_rational(corr)
    f = corr.f_complex()
    g = corr.g_complex()
    diff = _sub_polys(list(f), list(g))
    common = roots_complex(np.array(diff, dtype=np.complex128), tol)
    a = min(common, key=lambda w: (abs(w), cmath.phase(w) % (2 * math.pi)))
    big_a = polyval(f, a)

    f1 = poly_compose_affine(list(f), 1.0 + 0j, a)
    g1 = poly_compose_affine(list(g), 1.0 + 0j, a)
    f1[0] -= big_a
    g1[0] -= big_a

    ratio = (e * g1[-1]) / (d * f1[-1])
    beta = smallest_arg_root(complex(ratio), d - e)
    alpha = 1.0 / (e * g1[-1] * beta ** e)

    F = [alpha * c * beta ** k for k, c in enumerate(f1)]
    G = [alpha * c * beta ** k for k, c in enumerate(g1)]
    Fp_ = np.array(F[1:], dtype=np.complex128) * np.arange(1, d + 1)
    Gp_ = np.array(G[1:], dtype=np.complex128) * np.arange(1, e + 1)
    s = roots_complex(Fp_, tol)
    t = roots_complex(Gp_, tol) if e >= 2 else np.zeros(0, dtype=np.complex128)

    pre = AffineMap(1.0 / beta, -a / beta)
    post = AffineMap(alpha, -alpha * big_a)
    return NormalForm(list(s), list(t)), pre, post


def _normalize_rational(corr: Correspondence):
    d, e = corr.d, corr.e
    f = list(corr.f)
    g = list(corr.g)
    diff = _sub_polys(f, g)
    commons = _rational_roots(diff)
    if not commons:
        raise ExtensionRequiredError("no rational common point g(a) = f(a)")
    a = min(commons, key=lambda w: (abs(w), 0 if w >= 0 else 1))
    big_a = Fraction(0)
    for c in f[::-1]:
        big_a = big_a * a + c

    f1 = poly_compose_affine(f, Fraction(1), a)
    g1 = poly_compose_affine(g, Fraction(1), a)
    f1[0] -= big_a
    g1[0] -= big_a

    ratio = Fraction(e, 1) * g1[-1] / (Fraction(d, 1) * f1[-1])
    beta = _rational_nth_root(ratio, d - e)
    if beta is None or beta == 0:
        raise ExtensionRequiredError(
            f"scale equation beta^{d - e} = {ratio} has no rational solution")
    alpha = 1 / (e * g1[-1] * beta ** e)

    F = [alpha * c * beta ** k for k, c in enumerate(f1)]
    G = [alpha * c * beta ** k for k, c in enumerate(g1)]
    Fp_ = [c * (k + 1) for k, c in enumerate(F[1:])]
    Gp_ = [c * (k + 1) for k, c in enumerate(G[1:])]
    s = _rational_roots(Fp_)
    t = _rational_roots(Gp_)
    if len(s) != d - 1 or len(t) != e - 1:
        raise ExtensionRequiredError("derivative roots are not all rational")

    pre = AffineMap(Fraction(1) / beta, -a / beta)
    post = AffineMap(alpha, -alpha * big_a)
    return NormalForm(s, t), pre, post


# ---------------------------------------------------------------------------
# critical points
# ---------------------------------------------------------------------------

def critical_points(obj, tol: float = 1e-12) -> np.ndarray:
    """The d*e - 1 critical x-values with multiplicity, sorted by (re, im).

    Roots of f' together with, for each critical value w of g (i.e. each
    g(t_j) with g'(t_j) = 0), the d roots of f(x) = w.
    """
    if isinstance(obj, NormalForm):
        nf = obj
        corr = nf.to_correspondence()
        f = corr.f_complex()
        g = corr.g_complex()
        crit_y = [complex(v) for v in nf.t]
        out = [complex(v) for v in nf.s]
    else:
        corr = obj
        f = corr.f_complex()
        g = corr.g_complex()
        fp_ = f[1:] * np.arange(1, corr.d + 1)
        gp_ = g[1:] * np.arange(1, corr.e + 1)
        out = [complex(v) for v in roots_complex(fp_, tol)]
        crit_y = ([complex(v) for v in roots_complex(gp_, tol)]
                  if corr.e >= 2 else [])
    for yc in crit_y:
        w = polyval(g, yc)
        h = f.copy()
        h[0] -= w
        out.extend(complex(v) for v in roots_complex(h, tol))
    return np.array(sorted(out, key=lambda z: (z.real, z.imag)),
                    dtype=np.complex128)

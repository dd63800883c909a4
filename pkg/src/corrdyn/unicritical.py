"""Exact F_p computations for the unicritical family y^e = x^p + c.

The parameter polynomial f_n in F_p[c] vanishes exactly at the c for which
the critical vertex 0 returns to itself in n steps.  Unrolling the n-step
return condition through the p-power map gives the recursion

    f_0 = 0,    f_{k+1}(c) = c^(p^k) - (-1)^e f_k(c)^e,

monic of degree p^(n-1) for n >= 1.  The sign on the power term matters for
odd e; it is pinned down independently by the resultant oracle
(:mod:`corrdyn.resultants`) and by exhaustive cycle searches over small
fields (criterion tests), both of which this recursion must match.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, CertificateValidationError
from .fppoly import (
    FpPoly,
    MAX_MODULUS,
    fp_gcd,
    fp_radical,
    fp_valuation,
    frobenius_power,
    is_irreducible,
    is_prime,
)
from .gf import GF

DEFAULT_DEGREE_CAP = 60000
DEFAULT_ENUM_BUDGET = 10 ** 6


@dataclass(frozen=True)
class UnicriticalFamily:
    """The correspondence family y^e = x^p + c over F_p (requires e < p)."""

    p: int
    e: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= MAX_MODULUS:
            raise ValueError(f"p={self.p} exceeds the supported bound")
        if not (1 <= self.e < self.p):
            raise ValueError("need 1 <= e < p")


def fn_poly(fam: UnicriticalFamily, n: int,
            degree_cap: int = DEFAULT_DEGREE_CAP) -> FpPoly:
    """The n-th parameter polynomial f_n(c) over F_p."""
    if n < 0:
        raise ValueError("n must be >= 0")
    p, e = fam.p, fam.e
    if n >= 1 and p ** (n - 1) > degree_cap:
        raise BudgetExceededError(
            f"deg f_{n} = {p}^{n - 1} exceeds the degree cap {degree_cap}")
    f = FpPoly.zero(p)
    for k in range(n):
        power = FpPoly.monomial(p, p ** k)
        fe = f ** e
        f = power - fe if e % 2 == 0 else power + fe
    return f


def fn_sequence(fam: UnicriticalFamily, n: int,
                degree_cap: int = DEFAULT_DEGREE_CAP):
    """[f_1, ..., f_n] sharing the incremental computation."""
    if n >= 1 and fam.p ** (n - 1) > degree_cap:
        raise BudgetExceededError(
            f"deg f_{n} = {fam.p}^{n - 1} exceeds the degree cap {degree_cap}")
    out = []
    p, e = fam.p, fam.e
    f = FpPoly.zero(p)
    for k in range(n):
        power = FpPoly.monomial(p, p ** k)
        fe = f ** e
        f = power - fe if e % 2 == 0 else power + fe
        out.append(f)
    return out


def valuation_profile(fam: UnicriticalFamily, n: int, r: int, pi: FpPoly,
                      degree_cap: int = DEFAULT_DEGREE_CAP) -> int:
    """v_pi(f_n) for an irreducible pi whose least dividing index is r.

    Precondition checked by trial division: pi | f_r and pi does not divide
    any earlier f_j.  A violation raises with the true least index.
    """
    if pi.p != fam.p:
        raise ValueError("modulus mismatch")
    if not is_irreducible(pi):
        raise ValueError("pi is not irreducible")
    seq = fn_sequence(fam, max(n, r), degree_cap=degree_cap)
    true_r = None
    for j, fj in enumerate(seq[:r], start=1):
        if (fj % pi).is_zero():
            true_r = j
            break
    if true_r != r:
        raise ValueError(
            f"least index with pi | f_r is {true_r}, not the claimed {r}")
    return fp_valuation(seq[n - 1], pi) if n >= 1 else 0


def _proper_divisors(n: int):
    return [m for m in range(1, n) if n % m == 0]


def has_primitive_prime_factor(fam: UnicriticalFamily, n: int,
                               degree_cap: int = DEFAULT_DEGREE_CAP):
    """Whether f_n has an irreducible factor dividing no earlier f_m.

    Only indices m | n can share factors with f_n (the least-index
    valuation pattern, property-tested in the suite), so the earlier
    radicals are only collected over
    proper divisors.  Returns ``(flag, witness)`` with ``witness`` the
    product of the primitive prime factors.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    seq = fn_sequence(fam, n, degree_cap=degree_cap)
    rad_n = fp_radical(seq[n - 1])
    acc = FpPoly.one(fam.p)
    for m in _proper_divisors(n):
        acc = acc * fp_radical(seq[m - 1])
    g = fp_gcd(rad_n, acc)
    witness = (rad_n // g).monic()
    return witness.degree >= 1, witness


def bound_threshold(fam: UnicriticalFamily, horizon: int = 400) -> int:
    """Least N such that the degree-count envelope forces a primitive factor
    for every n >= N.

    The envelope compares deg f_n = p^(n-1) against
    e^(n-1) p + n p^((n+1)/2): when the left side is strictly larger, the
    shared-factor degrees cannot exhaust f_n, so a primitive prime factor
    must exist.  Below the threshold, primitivity is decided directly by
    :func:`has_primitive_prime_factor`.  Exact integer arithmetic (the half
    power is compared by squaring).
    """
    p, e = fam.p, fam.e

    def concludes(n: int) -> bool:
        a = p ** (n - 1) - p * e ** (n - 1)
        return a > 0 and a * a > n * n * p ** (n + 1)

    failures = [n for n in range(1, horizon + 1) if not concludes(n)]
    if failures and failures[-1] >= horizon - 1:
        raise BudgetExceededError("threshold scan horizon too small")
    return (failures[-1] + 1) if failures else 1


def envelope_ratio(fam: UnicriticalFamily, n: int) -> float:
    """RHS/LHS of the envelope at n (sanity diagnostics for the scan)."""
    p, e = fam.p, fam.e
    lhs = p ** (n - 1)
    rhs_sq = (p * e ** (n - 1)) ** 2 + n * n * p ** (n + 1)
    # loose float: only used for monotone-decay sanity checks
    return (rhs_sq ** 0.5) / lhs


@dataclass(frozen=True)
class PeriodCertificate:
    """An exact-period witness: c in F_{p^k} with a critical cycle of length n.

    ``c`` and the cycle entries are coefficient tuples over the deterministic
    modulus (see :func:`corrdyn.gf.least_irreducible`).
    """

    p: int
    e: int
    k: int
    n: int
    modulus: FpPoly
    c: tuple
    cycle: tuple

    def serialize(self) -> str:
        mod = ":".join(str(int(x)) for x in self.modulus.coeffs.tolist())
        cval = ":".join(str(x) for x in self.c)
        cyc = ";".join(":".join(str(x) for x in elt) for elt in self.cycle)
        return f"{self.p},{self.e},{self.k},{self.n},modulus={mod},c={cval},cycle={cyc}"

    def validate(self) -> bool:
        """Re-verify the cycle and the absence of shorter critical cycles."""
        field = GF(self.p, self.k)
        if field.modulus != self.modulus:
            raise CertificateValidationError("modulus is not the canonical one")
        c_enc = field.encode(self.c)
        cyc = [field.encode(elt) for elt in self.cycle]
        if len(cyc) != self.n + 1 or cyc[0] != 0 or cyc[-1] != 0:
            raise CertificateValidationError("cycle endpoints/length wrong")
        for x, y in zip(cyc, cyc[1:]):
            if field.pow(y, self.e) != field.add(field.pow(x, self.p), c_enc):
                raise CertificateValidationError("cycle edge relation fails")
        lengths = critical_return_lengths(field, self.e, c_enc, self.n)
        if self.n not in lengths:
            raise CertificateValidationError("no critical cycle of the claimed length")
        if min(lengths) < self.n:
            raise CertificateValidationError(
                f"shorter critical cycle of length {min(lengths)} exists")
        return True


def _eth_preimages(field: GF, e: int):
    emap: dict = {}
    for y in field.elements():
        emap.setdefault(field.pow(y, e), []).append(y)
    return emap


def critical_return_lengths(field: GF, e: int, c_enc: int, max_len: int,
                            emap=None):
    """All m <= max_len admitting a path 0 -> ... -> 0 of length m."""
    if emap is None:
        emap = _eth_preimages(field, e)
    out = []
    level = {0}
    for m in range(1, max_len + 1):
        nxt = set()
        for x in level:
            w = field.add(field.pow(x, field.p), c_enc)
            nxt.update(emap.get(w, ()))
        if 0 in nxt:
            out.append(m)
        level = nxt
        if not level:
            break
    return out


def _bfs_cycle(field: GF, e: int, c_enc: int, n: int, emap):
    """Parent-tracked breadth-first levels; returns the cycle if valid."""
    parents = []
    level = {0: None}
    for m in range(1, n + 1):
        nxt: dict = {}
        for x in level:
            w = field.add(field.pow(x, field.p), c_enc)
            for y in emap.get(w, ()):
                if y not in nxt:
                    nxt[y] = x
        parents.append(nxt)
        if 0 in nxt and m < n:
            return None  # shorter critical cycle
        level = nxt
        if not level:
            return None
    if 0 not in parents[-1]:
        return None
    cyc = [0]
    cur = 0
    for m in range(n - 1, -1, -1):
        cur = parents[m][cur]
        cyc.append(cur)
    cyc.reverse()
    return cyc


def period_search(fam: UnicriticalFamily, n: int, k: int,
                  degree_cap: int = DEFAULT_DEGREE_CAP,
                  enum_budget: int = DEFAULT_ENUM_BUDGET):
    """Exact-period-n parameters in F_{p^k}, as validated certificates.

    Roots of the primitive witness of f_n restricted to F_{p^k} (gcd with
    the k-fold Frobenius fixed-point polynomial), each re-validated by an
    independent breadth-first search over the critical path tree.
    """
    p, e = fam.p, fam.e
    if p ** k > enum_budget:
        raise BudgetExceededError(
            f"field size {p}^{k} exceeds the enumeration budget {enum_budget}")
    has_prim, witness = has_primitive_prime_factor(fam, n, degree_cap=degree_cap)
    if not has_prim:
        return []
    field = GF(p, k)
    # restrict the witness to roots lying in F_{p^k}
    x = FpPoly.x(p)
    xq = frobenius_power(witness, k)
    gk = fp_gcd(witness, xq - (x % witness))
    if gk.degree < 1:
        return []
    emap = _eth_preimages(field, e)
    certs = []
    for c_enc in field.elements():
        if field.eval_fp_poly(gk, c_enc) != 0:
            continue
        cyc = _bfs_cycle(field, e, c_enc, n, emap)
        if cyc is None:
            raise CertificateValidationError(
                f"witness root c={field.decode(c_enc)} failed BFS validation "
                f"for exact period {n}")
        cert = PeriodCertificate(
            p=p, e=e, k=k, n=n, modulus=field.modulus,
            c=field.decode(c_enc),
            cycle=tuple(field.decode(v) for v in cyc))
        certs.append(cert)
    return certs


def exhaustive_period_params(fam: UnicriticalFamily, n: int, k: int,
                             enum_budget: int = DEFAULT_ENUM_BUDGET):
    """Oracle: all c in F_{p^k} with a critical cycle of exact length n,
    found by trying every parameter with a breadth-first search."""
    p, e = fam.p, fam.e
    if p ** k > enum_budget:
        raise BudgetExceededError("field too large to enumerate")
    field = GF(p, k)
    emap = _eth_preimages(field, e)
    out = []
    for c_enc in field.elements():
        lengths = critical_return_lengths(field, e, c_enc, n, emap=emap)
        if lengths and lengths[0] == n:
            out.append(c_enc)
    return out

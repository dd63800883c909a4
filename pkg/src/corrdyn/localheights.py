"""Local theory at one place: escape thresholds, escape rates, certified
enclosures of minimal escape rates over path trees, and the local critical
bound.

All archimedean tail computations run in log space through certified
one-step modulus bounds: for log|x| in [lo, hi], every branch y of
g(y) = f(x) satisfies step_lo(lo, hi) <= log|y| <= step_hi(lo, hi), with

* |f(x)| in [ |a_d| r_lo^d - sum_{i<d} |a_i| r_hi^i , sum_i |a_i| r_hi^i ],
* all roots of b_e y^e + ... + b_1 y + c_0 inside the degree-adjusted
  Rouche radius max_j |e c_j / b_e|^(1/(e-j)), refined through
  |b_e||y|^e <= |c_0| + sum |b_j||y|^j (and >= for the lower bound).

Iterating the interval map and scaling by (e/d)^m yields an enclosure of
the escape rate of *every* continuation from x; the enclosure tightens
geometrically once the orbit is past the escape radius, which is what
makes the branch-and-bound search below certifiable.

Non-archimedean places are handled exactly through valuations and Newton
polygons; ties (equal minimal valuations that could cancel) are never
guessed: the enclosure widens and carries a flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .correspondence import (
    Correspondence,
    NormalForm,
    PathPrefix,
    branch_step,
    critical_points,
)
from .padic import (
    INFINITE_VALUATION,
    Place,
    newton_polygon_root_valuations,
    padic_valuation,
)

NEG_INF = -math.inf

CORRECTION_ARCHIMEDEAN = "archimedean"
CORRECTION_NONARCHIMEDEAN = "nonarchimedean"
CORRECTION_NONE = "none"


@dataclass
class EscapeInterval:
    """A certified enclosure [lo, hi] for an escape-rate quantity."""

    lo: float
    hi: float
    depth_used: int
    tie: bool = False

    def __post_init__(self):
        self.lo = max(self.lo, 0.0)
        self.hi = max(self.hi, self.lo)

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def serialize(self) -> str:
        return (f"lo={self.lo:.12g},hi={self.hi:.12g},"
                f"depth={self.depth_used},tie={'true' if self.tie else 'false'}")


@dataclass(frozen=True)
class LocalParams:
    """Escape threshold and certified escape radius at one place."""

    lam: float
    escape_radius: float
    place: Place


def _as_correspondence(obj) -> Correspondence:
    return obj.to_correspondence() if isinstance(obj, NormalForm) else obj


# ---------------------------------------------------------------------------
# the local threshold lambda(C, v)
# ---------------------------------------------------------------------------

def lambda_exponent_padic(corr: Correspondence, p: int) -> Fraction:
    """max(0, L) with lambda(C, p) = L * log p, as an exact Fraction."""
    if corr.kind != "rational":
        raise ValueError("p-adic threshold needs rational coefficients")
    d, e = corr.d, corr.e
    va = [padic_valuation(c, p) for c in corr.f]
    vb = [padic_valuation(c, p) for c in corr.g]
    terms = []
    for i in range(d):
        if va[i] != INFINITE_VALUATION:
            terms.append(Fraction(va[d] - va[i], d - i))
    for j in range(e):
        if vb[j] != INFINITE_VALUATION:
            terms.append(Fraction(vb[e] - vb[j]) * Fraction(e, d * (e - j)))
    terms.append(Fraction(va[d] - vb[e]) * Fraction(e, d - e))
    return max(max(terms), Fraction(0))


def lambda_local(obj, place: Place,
                 correction_side: str = CORRECTION_ARCHIMEDEAN) -> float:
    """The escape threshold built from coefficient ratios.

    log+ max{ |a_i/a_d|^(1/(d-i)), |b_j/b_e|^(e/(d(e-j))), |b_e/a_d|^(e/(d-e)) }
    plus log(2d) on the side named by ``correction_side``.  The default
    attaches the branch-count margin to the archimedean place, which is the
    orientation every escape argument here actually uses; flip it only for
    comparisons.
    """
    corr = _as_correspondence(obj)
    d, e = corr.d, corr.e
    if place.is_archimedean:
        f = corr.f_complex()
        g = corr.g_complex()
        lad = math.log(abs(f[d]))
        lbe = math.log(abs(g[e]))
        best = 0.0
        for i in range(d):
            if f[i] != 0:
                best = max(best, (math.log(abs(f[i])) - lad) / (d - i))
        for j in range(e):
            if g[j] != 0:
                best = max(best, (math.log(abs(g[j])) - lbe) * e / (d * (e - j)))
        best = max(best, (lbe - lad) * e / (d - e))
        lam = best
        if correction_side == CORRECTION_ARCHIMEDEAN:
            lam += math.log(2 * d)
        return lam
    lam = float(lambda_exponent_padic(corr, place.prime)) * math.log(place.prime)
    if correction_side == CORRECTION_NONARCHIMEDEAN:
        lam += math.log(2 * d)
    return lam


def local_params(obj, place: Place) -> LocalParams:
    lam = lambda_local(obj, place)
    return LocalParams(lam=lam, escape_radius=math.exp(lam) * 1.01, place=place)


# ---------------------------------------------------------------------------
# certified archimedean step bounds
# ---------------------------------------------------------------------------

def _logsumexp(terms) -> float:
    arr = np.asarray(terms, dtype=np.float64)
    if arr.size == 0:
        return NEG_INF
    m = arr.max()
    if m == NEG_INF:
        return NEG_INF
    return float(m + math.log(np.exp(arr - m).sum()))


def _logdiff(a: float, b: float):
    """log(e^a - e^b) for a > b, else None."""
    if a == NEG_INF or a <= b:
        return None
    if b == NEG_INF:
        return a
    return a + math.log1p(-math.exp(b - a))


class ArchStepBounds:
    """Certified log-modulus step and tail bounds at the archimedean place."""

    def __init__(self, corr: Correspondence):
        f = corr.f_complex()
        g = corr.g_complex()
        self.d = corr.d
        self.e = corr.e
        self.ed = corr.e / corr.d
        self.la = np.array([math.log(abs(c)) if c != 0 else NEG_INF for c in f])
        self.lb = np.array([math.log(abs(c)) if c != 0 else NEG_INF for c in g])
        self.loge = math.log(self.e) if self.e > 1 else 0.0

    def _f_hi(self, logr_hi: float) -> float:
        terms = [self.la[i] + (i * logr_hi if i else 0.0)
                 for i in range(self.d + 1) if self.la[i] != NEG_INF]
        return _logsumexp(terms)

    def _f_lo(self, logr_lo: float, logr_hi: float):
        top = self.la[self.d] + self.d * logr_lo
        rest = _logsumexp([self.la[i] + (i * logr_hi if i else 0.0)
                           for i in range(self.d) if self.la[i] != NEG_INF])
        return _logdiff(top, rest)

    def step_bounds(self, logr_lo: float, logr_hi: float):
        """(lo', hi') bounding log|y| over all branches, lo' may be None."""
        e = self.e
        f_hi = self._f_hi(logr_hi)
        f_lo = self._f_lo(logr_lo, logr_hi)
        c0_hi = float(np.logaddexp(f_hi, self.lb[0]))
        c0_lo = None if f_lo is None else _logdiff(f_lo, self.lb[0])
        lbe = self.lb[e]

        # Rouche-type outer radius, then two refinement passes
        cands = []
        if c0_hi != NEG_INF:
            cands.append((self.loge + c0_hi - lbe) / e)
        for j in range(1, e):
            if self.lb[j] != NEG_INF:
                cands.append((self.loge + self.lb[j] - lbe) / (e - j))
        if not cands:
            # every coefficient below the leading one vanishes: all roots 0
            return NEG_INF, NEG_INF
        hi = max(cands)
        for _ in range(2):
            mids = [self.lb[j] + j * hi for j in range(1, e)
                    if self.lb[j] != NEG_INF]
            upper = (_logsumexp([c0_hi] + mids) - lbe) / e
            if upper < hi:
                hi = upper
        lo = None
        if c0_lo is not None:
            mids = [self.lb[j] + j * hi for j in range(1, e)
                    if self.lb[j] != NEG_INF]
            num = _logdiff(c0_lo, _logsumexp(mids)) if mids else c0_lo
            if num is not None:
                lo = (num - lbe) / e
        return lo, hi

    def tail_enclosure(self, logr_lo: float, logr_hi: float,
                       max_iter: int = 300):
        """(g_lo, g_hi) bounding the escape rate of every path from any
        point x with log|x| in [logr_lo, logr_hi]."""
        ed = self.ed
        lo, hi = logr_lo, logr_hi
        track_lo = lo != NEG_INF
        u_lo = max(0.0, lo) if track_lo else 0.0
        u_hi = max(0.0, hi)
        fac = 1.0
        stable = 0
        for _ in range(max_iter):
            nlo, nhi = self.step_bounds(lo if track_lo else hi - 1e9, hi)
            if nlo is None:
                track_lo = False
            fac *= ed
            new_u_hi = fac * max(0.0, nhi)
            new_u_lo = fac * max(0.0, nlo) if track_lo else 0.0
            dh = abs(new_u_hi - u_hi)
            dl = abs(new_u_lo - u_lo) if track_lo else 0.0
            u_hi = new_u_hi
            if track_lo:
                u_lo = new_u_lo
                lo = nlo
            hi = nhi
            if dh < 1e-15 * (1.0 + abs(u_hi)) and dl < 1e-15 * (1.0 + abs(u_lo)):
                stable += 1
                if stable >= 3:
                    break
            else:
                stable = 0
            if hi > 1e100:
                # increments beyond this point are below double precision
                break
        g_lo = max(0.0, u_lo - 1e-12) if track_lo else 0.0
        g_hi = u_hi + 1e-12
        return g_lo, max(g_hi, g_lo)

    def point_enclosure(self, x: complex):
        logr = math.log(abs(x)) if x != 0 else NEG_INF
        return self.tail_enclosure(logr, logr)


# ---------------------------------------------------------------------------
# escape rate of a concrete path (archimedean)
# ---------------------------------------------------------------------------

def policy_min_modulus(step: int, x: complex, roots: np.ndarray) -> complex:
    return complex(roots[int(np.argmin(np.abs(roots)))])


def policy_max_modulus(step: int, x: complex, roots: np.ndarray) -> complex:
    return complex(roots[int(np.argmax(np.abs(roots)))])


def policy_index(i: int):
    def chooser(step: int, x: complex, roots: np.ndarray) -> complex:
        return complex(roots[min(i, len(roots) - 1)])
    return chooser


def policy_random(rng: np.random.Generator):
    def chooser(step: int, x: complex, roots: np.ndarray) -> complex:
        return complex(roots[int(rng.integers(len(roots)))])
    return chooser


def green(corr_or_nf, start, policy=policy_min_modulus, tol: float = 1e-9,
          max_depth: int = 200, root_tol: float = 1e-13):
    """Escape rate of one concrete path to within ``tol``.

    ``start`` is a PathPrefix or a single point.  Returns a float once the
    certified tail enclosure is narrower than ``tol`` (exactly 0.0 when the
    orbit is certified bounded within the budget); otherwise returns the
    enclosure as an :class:`EscapeInterval`.
    """
    corr = _as_correspondence(corr_or_nf)
    sb = ArchStepBounds(corr)
    if isinstance(start, PathPrefix):
        verts = [complex(v) for v in start.vertices]
    else:
        verts = [complex(start)]
    n = len(verts) - 1
    x = verts[-1]
    d = corr.d
    maxla = float(np.max(sb.la[np.isfinite(sb.la)]))
    glo, ghi = 0.0, math.inf
    while True:
        glo, ghi = sb.point_enclosure(x)
        fac = sb.ed ** n
        width = fac * (ghi - glo)
        if width <= tol:
            return 0.0 if glo <= 0.0 else fac * 0.5 * (glo + ghi)
        if n >= max_depth:
            break
        logr = math.log(abs(x)) if x != 0 else NEG_INF
        if logr != NEG_INF and d * logr + maxla > 700.0:
            break  # cannot take a concrete step in double precision
        roots = branch_step(corr, x, root_tol)
        x = policy(n, x, roots)
        n += 1
    fac = sb.ed ** n
    return EscapeInterval(fac * glo, fac * ghi, depth_used=n)


# ---------------------------------------------------------------------------
# minimal escape rate over the path tree (archimedean branch and bound)
# ---------------------------------------------------------------------------

def _merge_close(points, rel: float = 1e-9):
    """Merge points differing by < rel * max(1, |x|) (node dedup)."""
    pts = sorted((complex(p) for p in points), key=lambda z: (z.real, z.imag))
    out = []
    for z in pts:
        if out and abs(z - out[-1]) < rel * max(1.0, abs(z)):
            continue
        out.append(z)
    return out


def green_min(corr_or_nf, a, depth: int = 16, tol: float = 1e-9,
              node_cap: int = 20000, root_tol: float = 1e-13) -> EscapeInterval:
    """Certified enclosure of the minimal escape rate over paths from ``a``.

    Branch and bound on the path tree: every node carries the certified
    enclosure of all its continuations; nodes whose lower end cannot beat
    the best upper end are pruned, nodes with tight enclosures become
    leaves, the rest are expanded (up to ``depth`` levels and ``node_cap``
    nodes per level).
    """
    corr = _as_correspondence(corr_or_nf)
    sb = ArchStepBounds(corr)
    ed = sb.ed
    best_hi = math.inf
    lo_cands = []
    level = [complex(a)]
    depth_used = depth
    for k in range(depth + 1):
        level = _merge_close(level)
        nxt = []
        fac = ed ** k
        for x in level:
            glo, ghi = sb.point_enclosure(x)
            node_lo = fac * glo
            node_hi = fac * ghi
            best_hi = min(best_hi, node_hi)
            if node_lo >= best_hi:
                continue  # pruned: this subtree cannot contain the minimum
            if (k == depth or node_hi - node_lo <= 0.25 * tol
                    or len(nxt) > node_cap):
                lo_cands.append(node_lo)
                continue
            nxt.extend(complex(r) for r in branch_step(corr, x, root_tol))
        level = nxt
        if not level:
            depth_used = k
            break
    lo = min(lo_cands) if lo_cands else best_hi
    return EscapeInterval(min(lo, best_hi), best_hi, depth_used)


# ---------------------------------------------------------------------------
# non-archimedean minimal escape rate (exact valuation tracking)
# ---------------------------------------------------------------------------

class PadicLocal:
    """Valuation dynamics of one rational correspondence at one prime."""

    def __init__(self, corr: Correspondence, p: int):
        if corr.kind != "rational":
            raise ValueError("p-adic analysis needs rational coefficients")
        self.corr = corr
        self.p = p
        self.logp = math.log(p)
        self.d = corr.d
        self.e = corr.e
        self.ed = corr.e / corr.d
        self.va = [padic_valuation(c, p) for c in corr.f]
        self.vb = [padic_valuation(c, p) for c in corr.g]
        self.L = lambda_exponent_padic(corr, p)
        self.lam = float(self.L) * self.logp
        ratio = self.vb[self.e] - self.va[self.d]
        self.tail_const = max(0.0, float(ratio) * self.logp) / (self.d - self.e)
        finite_a = [v for v in self.va if v != INFINITE_VALUATION]
        finite_b = [v for v in self.vb if v != INFINITE_VALUATION]
        self.good_reduction = (min(finite_a) >= self.vb[self.e]
                               and min(finite_b) >= self.vb[self.e])

    # -- pointwise quantities ---------------------------------------------

    def upper(self, w) -> float:
        """Exact non-archimedean bound on the escape rate from valuation w."""
        logplus = 0.0 if w == INFINITE_VALUATION else max(0.0, -float(w) * self.logp)
        return max(logplus, self.lam) + self.tail_const

    def escaped(self, w) -> bool:
        return w != INFINITE_VALUATION and Fraction(w) < -self.L

    def _f_valuation(self, w):
        """(valuation of f(x), ambiguous flag) for v(x) = w."""
        vals = []
        for i, vai in enumerate(self.va):
            if vai == INFINITE_VALUATION:
                continue
            if w == INFINITE_VALUATION:
                if i == 0:
                    vals.append(Fraction(vai))
                continue
            vals.append(Fraction(vai) + i * Fraction(w))
        if not vals:
            return INFINITE_VALUATION, False
        m = min(vals)
        return m, vals.count(m) > 1

    def _c0_valuation(self, w):
        vf, amb = self._f_valuation(w)
        if amb:
            return None
        vb0 = self.vb[0]
        if vf == INFINITE_VALUATION and vb0 == INFINITE_VALUATION:
            return INFINITE_VALUATION
        if vf == INFINITE_VALUATION:
            return Fraction(vb0)
        if vb0 == INFINITE_VALUATION:
            return vf
        if Fraction(vb0) != vf:
            return min(Fraction(vb0), vf)
        return None  # equal minima may cancel

    def closed_form(self, w):
        """Exact escape value from valuation w, or None if not certified.

        Valid when the top monomial of f strictly dominates, the branch
        polynomial has a single strict Newton slope, and the valuation
        strictly decreases; all checks exact.
        """
        if w == INFINITE_VALUATION or not self.escaped(w):
            return None
        w = Fraction(w)
        d, e = self.d, self.e
        vad = Fraction(self.va[d])
        vbe = Fraction(self.vb[e])
        top = vad + d * w
        for i in range(d):
            if self.va[i] != INFINITE_VALUATION and top >= self.va[i] + i * w:
                return None
        if self.vb[0] != INFINITE_VALUATION and top >= self.vb[0]:
            return None
        for j in range(1, e):
            if self.vb[j] != INFINITE_VALUATION:
                if e * Fraction(self.vb[j]) <= (e - j) * top + j * vbe:
                    return None
        if w >= (vbe - vad) / (d - e):
            return None
        return self.logp * float(-w + (vbe - vad) / Fraction(d - e))

    def children(self, w):
        """Distinct branch valuations from v(x) = w, or None on a tie."""
        vc0 = self._c0_valuation(w)
        if vc0 is None:
            return None
        coeff_vals = [vc0] + [self.vb[j] for j in range(1, self.e + 1)]
        vals = newton_polygon_root_valuations(coeff_vals)
        out = []
        for v in vals:
            if v not in out:
                out.append(v)
        return out

    def enclosure(self, w, budget: int, memo=None, chain=frozenset()):
        """(lo, hi, tie) for the minimal escape rate over paths from v(x)=w.

        A valuation state revisited along the current chain closes a
        valuation cycle, i.e. a path whose moduli repeat: its rate is
        exactly 0, so the minimum through the revisited state is 0.
        Results that leaned on a revisit of a strict ancestor are
        chain-dependent and are not memoized.
        """
        if memo is None:
            memo = {}
        lo, hi, tie, _ = self._enclosure(w, budget, memo, chain)
        return lo, hi, tie

    def _enclosure(self, w, budget, memo, chain):
        if self.good_reduction and (w == INFINITE_VALUATION or Fraction(w) >= 0):
            return (0.0, 0.0, False, frozenset())
        exact = self.closed_form(w)
        if exact is not None:
            return (exact, exact, False, frozenset())
        if w in chain:
            return (0.0, 0.0, False, frozenset((w,)))
        if budget <= 0:
            return (0.0, self.upper(w), False, frozenset())
        key = (w, budget)
        if key in memo:
            return memo[key] + (frozenset(),)
        ch = self.children(w)
        if ch is None:
            res = (0.0, self.upper(w), True)
            hits: frozenset = frozenset()
        else:
            subchain = chain | {w}
            subs = [self._enclosure(c, budget - 1, memo, subchain) for c in ch]
            res = (self.ed * min(s[0] for s in subs),
                   self.ed * min(s[1] for s in subs),
                   any(s[2] for s in subs))
            hits = frozenset().union(*(s[3] for s in subs)) - {w}
        if not hits:
            memo[key] = res
        return res + (hits,)

    def enclosure_from_point(self, a: Fraction, budget: int, memo=None):
        """Enclosure from an exact rational start: the first step is exact.

        Evaluating f(a) in Q sidesteps monomial-valuation ties at the
        starting vertex; subsequent vertices are tracked by valuation.
        """
        a = Fraction(a)
        w = padic_valuation(a, self.p)
        if self.good_reduction and (w == INFINITE_VALUATION or Fraction(w) >= 0):
            return (0.0, 0.0, False)
        exact = self.closed_form(w)
        if exact is not None:
            return (exact, exact, False)
        if budget <= 0:
            return (0.0, self.upper(w), False)
        fa = Fraction(0)
        for c in self.corr.f[::-1]:
            fa = fa * a + c
        c0 = self.corr.g[0] - fa
        vc0 = padic_valuation(c0, self.p)
        coeff_vals = [vc0] + [self.vb[j] for j in range(1, self.e + 1)]
        vals = newton_polygon_root_valuations(coeff_vals)
        subs = [self.enclosure(v, budget - 1, memo) for v in dict.fromkeys(vals)]
        return (self.ed * min(s[0] for s in subs),
                self.ed * min(s[1] for s in subs),
                any(s[2] for s in subs))


def green_min_padic(corr_or_nf, a, p: int, depth: int = 24) -> EscapeInterval:
    """Certified enclosure of the minimal escape rate at a p-adic place.

    ``a`` is a rational starting point.  Exact arithmetic throughout;
    Newton polygon ties widen the enclosure and set the tie flag instead
    of guessing.
    """
    corr = _as_correspondence(corr_or_nf)
    pl = PadicLocal(corr, p)
    lo, hi, tie = pl.enclosure_from_point(Fraction(a), depth)
    return EscapeInterval(lo, hi, depth_used=depth, tie=tie)


# ---------------------------------------------------------------------------
# the local critical bound Lambda(C, v)
# ---------------------------------------------------------------------------

def _padic_critical_starts(obj, corr: Correspondence, p: int):
    """Exact start descriptors for every critical class.

    Returns a list of ("point", Fraction) and ("valuation", w, ambiguous)
    entries.  Path choices at distinct critical points are independent, so
    the minimal-rate searches run one critical class at a time.
    """
    d, e = corr.d, corr.e
    starts = []
    if isinstance(obj, NormalForm):
        for si in obj.s:
            starts.append(("point", si))
        branch_values = [(True, _eval_rational(corr.g, tj)) for tj in obj.t]
    else:
        # roots of f' by Newton polygon (exact)
        fp_vals = []
        for i in range(1, d + 1):
            c = corr.f[i] * i
            fp_vals.append(padic_valuation(c, p))
        for w in newton_polygon_root_valuations(fp_vals):
            starts.append(("valuation", w, False))
        # critical values of g at the rational roots of g'
        from .correspondence import _rational_roots  # local import, no cycle
        gp = [corr.g[j] * j for j in range(1, e + 1)]
        roots = _rational_roots(gp) if e >= 2 else []
        branch_values = [(True, _eval_rational(corr.g, r)) for r in roots]
        missing = (e - 1) - len(roots)
        if missing > 0:
            # irrational critical values of g: conservative bound via the
            # valuations of the roots of g' and the g coefficient terms
            gp_valuations = newton_polygon_root_valuations(
                [padic_valuation(c, p) for c in gp])
            for wt in gp_valuations[:missing]:
                vg_lb = _min_term_valuation(
                    [padic_valuation(c, p) for c in corr.g], wt)
                branch_values.append((False, vg_lb))
    for exact, gval in branch_values:
        if exact:
            vg = padic_valuation(gval, p)
            amb = False
        else:
            vg = gval
            amb = True
        # roots of f(x) - g_value: constant-term valuation
        va0 = padic_valuation(corr.f[0], p)
        if not amb:
            if va0 == INFINITE_VALUATION and vg == INFINITE_VALUATION:
                vc0 = INFINITE_VALUATION
            elif va0 == INFINITE_VALUATION:
                vc0 = vg
            elif vg == INFINITE_VALUATION:
                vc0 = va0
            elif Fraction(va0) != Fraction(vg):
                vc0 = min(Fraction(va0), Fraction(vg))
            else:
                vc0, amb = min(Fraction(va0), Fraction(vg)), True
        else:
            vc0 = min(va0, vg) if va0 != INFINITE_VALUATION else vg
        coeff_vals = [vc0] + [padic_valuation(corr.f[i], p)
                              for i in range(1, d + 1)]
        for w in newton_polygon_root_valuations(coeff_vals):
            starts.append(("valuation", w, amb))
    return starts


def _eval_rational(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


def _min_term_valuation(coeff_vals, w):
    vals = []
    for j, vj in enumerate(coeff_vals):
        if vj == INFINITE_VALUATION:
            continue
        if w == INFINITE_VALUATION:
            if j == 0:
                vals.append(Fraction(vj))
            continue
        vals.append(Fraction(vj) + j * Fraction(w))
    return min(vals) if vals else INFINITE_VALUATION


def lambda_capital(obj, place: Place, depth: int = 16, tol: float = 1e-9,
                   node_cap: int = 20000) -> EscapeInterval:
    """Enclosure of the local critical bound at one place.

    The infimum over one-path-per-critical-point choices of the maximal
    escape rate splits into independent per-critical-point minimal rates,
    whose maximum is enclosed here.
    """
    corr = _as_correspondence(obj)
    if place.is_archimedean:
        crits = _merge_close(critical_points(obj), rel=1e-9)
        lo = 0.0
        hi = 0.0
        depth_used = depth
        for c in crits:
            enc = green_min(corr, c, depth=depth, tol=tol, node_cap=node_cap)
            lo = max(lo, enc.lo)
            hi = max(hi, enc.hi)
            depth_used = min(depth_used, enc.depth_used)
        return EscapeInterval(lo, hi, depth_used)
    p = place.prime
    pl = PadicLocal(corr, p)
    starts = _padic_critical_starts(obj, corr, p)
    lo = 0.0
    hi = 0.0
    tie = False
    memo: dict = {}
    for start in starts:
        if start[0] == "point":
            slo, shi, stie = pl.enclosure_from_point(start[1], depth, memo)
        else:
            _, w, amb = start
            if amb:
                slo, shi, stie = 0.0, pl.upper(w), True
            else:
                slo, shi, stie = pl.enclosure(w, depth, memo)
        lo = max(lo, slo)
        hi = max(hi, shi)
        tie = tie or stie
    return EscapeInterval(lo, hi, depth, tie=tie)


# ---------------------------------------------------------------------------
# Monte-Carlo expected escape rate
# ---------------------------------------------------------------------------

def expected_green_mc(corr_or_nf, z, samples: int, depth: int = 40,
                      seed: int = 0, tol: float = 1e-9):
    """Sample mean and standard error of the escape rate over random paths.

    Each step picks a branch uniformly by multiplicity; randomness flows
    from a counter-based generator keyed by ``seed``.  Failed root solves
    are resampled and reported.
    """
    from .errors import RootFindingError

    corr = _as_correspondence(corr_or_nf)
    rng = np.random.Generator(np.random.Philox(key=seed))
    values = []
    failures = 0
    attempts = 0
    while len(values) < samples:
        attempts += 1
        if attempts > 10 * samples + 100:
            raise RootFindingError(
                f"resample budget exhausted: {failures} root failures")
        try:
            g = green(corr, complex(z), policy=policy_random(rng), tol=tol,
                      max_depth=depth)
        except RootFindingError:
            failures += 1
            continue
        values.append(g.mid if isinstance(g, EscapeInterval) else g)
    arr = np.asarray(values)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return mean, stderr, failures

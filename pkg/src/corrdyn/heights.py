"""Global heights over Q: the weighted height of a normal form, the
critical height as a finite sum of local enclosures, and the comparison
harness.

Coefficients are restricted to Q, so the sum over places is finite and
every local degree weight is 1: outside the archimedean place, the primes
up to d and the primes dividing a coordinate, all local terms vanish
exactly (good reduction), which :func:`support_places` enumerates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .correspondence import Correspondence, NormalForm, PathPrefix, branch_step
from .errors import RootFindingError
from .localheights import (
    EscapeInterval,
    lambda_capital,
    _merge_close,
)
from .padic import Place, padic_valuation
from .correspondence import critical_points
from .fppoly import is_prime


def _require_rational_nf(nf: NormalForm):
    if not isinstance(nf, NormalForm) or nf.kind != "rational":
        raise ValueError("expected a rational normal form")


def _primes_upto(n: int):
    return [p for p in range(2, n + 1) if is_prime(p)]


def _coordinate_primes(values):
    out = set()
    for v in values:
        for part in (abs(v.numerator), v.denominator):
            part = int(part)
            d = 2
            while d * d <= part:
                if part % d == 0:
                    out.add(d)
                    while part % d == 0:
                        part //= d
                d += 1
            if part > 1:
                out.add(part)
    return out


def support_places(nf: NormalForm):
    """Places that can contribute: archimedean, p <= d, and coordinate primes."""
    _require_rational_nf(nf)
    primes = set(_primes_upto(nf.d))
    primes |= _coordinate_primes(list(nf.s) + list(nf.t))
    return [Place.archimedean()] + [Place.padic(p) for p in sorted(primes)]


def _support_places_corr(corr: Correspondence):
    if corr.kind != "rational":
        raise ValueError("rational coefficients required")
    primes = set(_primes_upto(corr.d))
    primes |= _coordinate_primes([c for c in corr.f if c != 0]
                                 + [c for c in corr.g if c != 0])
    return [Place.archimedean()] + [Place.padic(p) for p in sorted(primes)]


# ---------------------------------------------------------------------------
# the weighted height
# ---------------------------------------------------------------------------

def weil_height_breakdown(nf: NormalForm):
    """Per-place values of log max{1, ||s||_v, ||t||_v^(e/d)}."""
    _require_rational_nf(nf)
    d, e = nf.d, nf.e
    out = []
    arch = max([1.0] + [abs(float(v)) for v in nf.s]
               + [abs(float(v)) ** (e / d) for v in nf.t])
    out.append((Place.archimedean(), math.log(arch)))
    for place in support_places(nf)[1:]:
        p = place.prime
        exps = [Fraction(0)]
        svals = [padic_valuation(v, p) for v in nf.s if v != 0]
        tvals = [padic_valuation(v, p) for v in nf.t if v != 0]
        if svals:
            exps.append(-Fraction(min(svals)))
        if tvals:
            exps.append(-Fraction(min(tvals)) * Fraction(e, d))
        out.append((place, float(max(exps)) * math.log(p)))
    return out


def weil_height(nf: NormalForm) -> float:
    """Sum over all places of log max{1, ||s||_v, ||t||_v^(e/d)}."""
    return sum(v for _, v in weil_height_breakdown(nf))


# ---------------------------------------------------------------------------
# the critical height
# ---------------------------------------------------------------------------

def crit_height_breakdown(obj, depth: int = 16, tol: float = 1e-9,
                          node_cap: int = 20000):
    """Per-place enclosures of the local critical bound.

    ``obj`` is a rational NormalForm or a rational Correspondence (the
    latter covers inputs whose normal form needs irrational radicals).
    """
    if isinstance(obj, NormalForm):
        _require_rational_nf(obj)
        places = support_places(obj)
    else:
        places = _support_places_corr(obj)
    out = []
    for place in places:
        out.append((place, lambda_capital(obj, place, depth=depth, tol=tol,
                                          node_cap=node_cap)))
    return out


def crit_height(obj, depth: int = 16, tol: float = 1e-9,
                node_cap: int = 20000) -> EscapeInterval:
    """Interval sum of the local critical bounds over the support places."""
    breakdown = crit_height_breakdown(obj, depth=depth, tol=tol,
                                      node_cap=node_cap)
    lo = sum(enc.lo for _, enc in breakdown)
    hi = sum(enc.hi for _, enc in breakdown)
    tie = any(enc.tie for _, enc in breakdown)
    used = min(enc.depth_used for _, enc in breakdown)
    return EscapeInterval(lo, hi, used, tie=tie)


@dataclass
class HeightReport:
    """One sample of the critical-vs-weighted height comparison."""

    d: int
    e: int
    seed: int
    weil: float
    crit: EscapeInterval
    weil_breakdown: list
    crit_breakdown: list

    def record(self) -> str:
        return (f"{self.d},{self.e},{self.seed},{self.weil:.12g},"
                f"{self.crit.lo:.12g},{self.crit.hi:.12g},"
                f"places={len(self.crit_breakdown)}")


# ---------------------------------------------------------------------------
# preperiodic path certificates
# ---------------------------------------------------------------------------

def find_preperiodic_path(corr: Correspondence, a, depth: int = 12,
                          rel: float = 1e-6, node_budget: int = 50000,
                          root_tol: float = 1e-12):
    """An explicit path from ``a`` with a repeated vertex, or None.

    Depth-first search over branch choices; a vertex matching an earlier
    vertex of the same path within rel * max(1,|x|) closes the certificate.
    Evidence only (floating point), but the defining relations of the
    returned prefix re-verify to root-finder accuracy.
    """
    start = complex(a)
    stack = [(start,)]
    visited = 0
    while stack:
        path = stack.pop()
        visited += 1
        if visited > node_budget:
            return None
        x = path[-1]
        if len(path) > 1:
            for prev in path[:-1]:
                if abs(x - prev) <= rel * max(1.0, abs(x)):
                    return PathPrefix(path)
        if len(path) - 1 >= depth:
            continue
        try:
            roots = branch_step(corr, x, root_tol)
        except RootFindingError:
            continue
        for r in sorted(set(complex(v) for v in roots),
                        key=lambda z: (-abs(z), z.real, z.imag)):
            stack.append(path + (r,))
    return None


def pcc_certificates(obj, depth: int = 12, rel: float = 1e-6):
    """Preperiodic path certificates for every distinct critical value.

    Returns a list of (critical point, PathPrefix or None); all found
    certificates witness crit_height.lo = 0.
    """
    corr = obj.to_correspondence() if isinstance(obj, NormalForm) else obj
    crits = _merge_close(critical_points(obj), rel=1e-9)
    return [(c, find_preperiodic_path(corr, c, depth=depth, rel=rel))
            for c in crits]


# ---------------------------------------------------------------------------
# sampling harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleSpec:
    """Sampling specification for the comparison harness."""

    count: int
    d: int
    e: int
    height_lo: float
    height_hi: float
    seed: int = 0
    depth: int = 14
    tol: float = 1e-8


def sample_normal_form(spec: SampleSpec, index: int) -> NormalForm:
    """Deterministic sample: coordinates at scale T, T log-spaced across the
    configured height range, with occasional small denominators."""
    rng = np.random.Generator(np.random.Philox(key=(spec.seed << 32) + index))
    if spec.count > 1:
        frac = index / (spec.count - 1)
    else:
        frac = 0.0
    T = spec.height_lo * (spec.height_hi / spec.height_lo) ** frac
    d, e = spec.d, spec.e
    dens = [1, 1, 1, 2, 3, 5]
    s = []
    for _ in range(d - 1):
        mag = T * rng.uniform(0.35, 1.0)
        den = dens[int(rng.integers(len(dens)))]
        num = int(round(mag * den)) * (1 if rng.uniform() < 0.5 else -1)
        s.append(Fraction(num if num else 1, den))
    t = []
    t_scale = 0.5 * T ** (d / e)
    for _ in range(e - 1):
        mag = t_scale * rng.uniform(0.2, 1.0)
        num = int(round(mag)) * (1 if rng.uniform() < 0.5 else -1)
        t.append(Fraction(num if num else 1, 1))
    return NormalForm(s, t)


def comparison_report(spec: SampleSpec):
    """HeightReports for every sample; failures recorded, not fatal.

    Returns ``(reports, failures)`` where failures is a list of
    (index, message).
    """
    reports = []
    failures = []
    for i in range(spec.count):
        nf = sample_normal_form(spec, i)
        try:
            wb = weil_height_breakdown(nf)
            cb = crit_height_breakdown(nf, depth=spec.depth, tol=spec.tol)
            crit = EscapeInterval(sum(e_.lo for _, e_ in cb),
                                  sum(e_.hi for _, e_ in cb),
                                  min(e_.depth_used for _, e_ in cb),
                                  tie=any(e_.tie for _, e_ in cb))
            reports.append(HeightReport(
                d=spec.d, e=spec.e, seed=i,
                weil=sum(v for _, v in wb), crit=crit,
                weil_breakdown=wb, crit_breakdown=cb))
        except Exception as exc:  # noqa: BLE001 - per-sample isolation
            failures.append((i, f"{type(exc).__name__}: {exc}"))
    return reports, failures


def comparison_summary(reports) -> dict:
    diffs = [r.crit.mid - r.weil for r in reports]
    return {
        "count": len(reports),
        "diff_min": min(diffs) if diffs else float("nan"),
        "diff_max": max(diffs) if diffs else float("nan"),
        "diff_mean": sum(diffs) / len(diffs) if diffs else float("nan"),
    }

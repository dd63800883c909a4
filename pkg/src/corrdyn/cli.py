"""Command-line frontend.

Every subcommand emits line-oriented records on stdout (diagnostics on
stderr) and is deterministic for a fixed seed: all randomness flows from
``--seed`` through a counter-based generator.  Exit codes: 0 success,
1 input error, 2 budget exhaustion.

Scalar syntax: complex numbers as ``<re>+<im>i`` (no spaces), rationals as
``num/den``.  Correspondences are passed as a positional argument in the
text format ``d=..;e=..;f=c0,...,cd;g=c0,...,ce`` or built from
``--d --e --c`` for the unicritical family y^e = x^d + c.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .correspondence import (
    Correspondence,
    NormalForm,
    branch_step,
    critical_points,
    normalize,
)
from .errors import BudgetExceededError, CorrdynError
from .heights import (
    SampleSpec,
    comparison_report,
    comparison_summary,
    crit_height_breakdown,
    weil_height,
)
from .localheights import (
    EscapeInterval,
    expected_green_mc,
    green_min,
    green_min_padic,
    lambda_capital,
    local_params,
)
from .padic import Place
from .sdset import (
    DEFAULT_FRONTIER_CAP,
    RenderSpec,
    render,
    summary_record,
    witness_unicritical,
    write_pgm,
)
from .unicritical import (
    DEFAULT_DEGREE_CAP,
    UnicriticalFamily,
    bound_threshold,
    fn_poly,
    has_primitive_prime_factor,
    period_search,
)

_COMPLEX_RE = re.compile(
    r"^(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?$")

# subcommand -> module operation it exposes (the coverage contract)
SUBCOMMAND_OPS = {
    "normalize": "correspondence.normalize",
    "crit": "correspondence.critical_points",
    "branch": "correspondence.branch_step",
    "lambda": "localheights.lambda_local",
    "green-min": "localheights.green_min",
    "capital-lambda": "localheights.lambda_capital",
    "hweil": "heights.weil_height",
    "hcrit": "heights.crit_height",
    "compare-heights": "heights.comparison_report",
    "fn": "unicritical.fn_poly",
    "primitive": "unicritical.has_primitive_prime_factor",
    "bound-threshold": "unicritical.bound_threshold",
    "period-search": "unicritical.period_search",
    "member": "sdset.bounded_path_witness",
    "render": "sdset.render",
    "mc-green": "localheights.expected_green_mc",
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation: subcommand, flags, seed and budgets.

    All budgets must be positive; with the seed fixed, stochastic
    subcommands produce byte-identical output.
    """

    subcommand: str
    seed: int
    depth: int | None
    tol: float
    frontier_cap: int
    degree_cap: int
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        budgets = {"tol": self.tol, "frontier_cap": self.frontier_cap,
                   "degree_cap": self.degree_cap}
        if self.depth is not None:
            budgets["depth"] = self.depth
        for name, value in budgets.items():
            if value <= 0:
                raise UsageError(f"budget {name} must be positive, got {value}")


def _run_config(args) -> RunConfig:
    return RunConfig(subcommand=args.command, seed=args.seed, depth=args.depth,
                     tol=args.tol, frontier_cap=args.frontier_cap,
                     degree_cap=args.degree_cap,
                     flags={k: v for k, v in vars(args).items()
                            if k != "command"})


def parse_complex(token: str) -> complex:
    """``<re>``, ``<re>+<im>i`` or ``<re>-<im>i`` (no spaces)."""
    m = _COMPLEX_RE.match(token.strip())
    if not m:
        raise UsageError(f"cannot parse complex number {token!r}")
    real = float(m.group("re"))
    imag = float(m.group("im")) if m.group("im") else 0.0
    return complex(real, imag)


def parse_rational(token: str) -> Fraction:
    try:
        return Fraction(token.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse rational {token!r}: {exc}") from exc


def fmt(x: float) -> str:
    return f"{x:.12g}"


def fmt_complex(z: complex) -> str:
    re = z.real + 0.0  # normalize -0.0
    im = z.imag + 0.0
    return f"{re:.12g}{im:+.12g}i"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _corr_from_args(args) -> Correspondence:
    if getattr(args, "corr", None):
        return Correspondence.from_text(args.corr)
    if args.d is not None and args.e is not None and args.c is not None:
        return Correspondence.unicritical(args.d, args.e, parse_complex(args.c))
    raise UsageError("give a correspondence (positional) or --d/--e/--c")


def _nf_from_args(args) -> NormalForm:
    if args.s is None:
        raise UsageError("give --s (and --t for e > 2) as num/den lists")
    s = [parse_rational(v) for v in args.s.split(",")] if args.s else []
    t = [parse_rational(v) for v in args.t.split(",")] if args.t else []
    return NormalForm(s, t)


def _place_from_args(args) -> Place:
    if getattr(args, "p", None):
        return Place.padic(args.p)
    return Place.archimedean()


def build_parser() -> _Parser:
    top = _Parser(prog="corrdyn", description=__doc__)
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, help_, corr=False, nf=False):
        p = sub.add_parser(name, help=help_)
        if corr:
            p.add_argument("corr", nargs="?", default=None,
                           help="correspondence text d=..;e=..;f=..;g=..")
        if nf:
            p.add_argument("--s", default=None, help="s entries, num/den comma list")
            p.add_argument("--t", default="", help="t entries, num/den comma list")
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--e", type=int, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--p", type=int, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--c", type=str, default=None)
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--window", type=str, default="0,0,4.5",
                       help="cx,cy,hw")
        p.add_argument("--res", type=str, default="256x256", help="WxH")
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--frontier-cap", type=int, default=DEFAULT_FRONTIER_CAP)
        p.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
        p.add_argument("--count", type=int, default=30)
        p.add_argument("--height-range", type=str, default="1e2,1e6")
        return p

    add("normalize", "normal form and witnessing affine maps", corr=True)
    add("crit", "critical x-values with multiplicity", corr=True)
    add("branch", "one multi-valued step from --c", corr=True)
    add("lambda", "local escape threshold at a place", corr=True)
    add("green-min", "minimal escape rate enclosure from --c", corr=True)
    add("capital-lambda", "local critical bound enclosure", corr=True)
    add("hweil", "weighted height of a rational normal form", nf=True)
    add("hcrit", "critical height enclosure", corr=True, nf=True)
    add("compare-heights", "sampled critical-vs-weighted comparison")
    add("fn", "parameter polynomial f_n over F_p")
    add("primitive", "primitive prime factor test for f_n")
    add("bound-threshold", "degree-count threshold for guaranteed primitivity")
    add("period-search", "exact-period parameters in F_{p^k}")
    add("member", "bounded-path membership verdict for y^e = x^d + c")
    add("render", "raster of the bounded-path locus slice")
    add("mc-green", "Monte-Carlo expected escape rate from --c", corr=True)
    return top


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------

def _cmd_normalize(args, out):
    corr = _corr_from_args(args)
    nf, pre, post = normalize(corr)
    if nf.kind == "rational":
        sval = ";".join(str(v) for v in nf.s)
        tval = ";".join(str(v) for v in nf.t)
        prefmt = f"{pre.scale},{pre.shift}"
        postfmt = f"{post.scale},{post.shift}"
    else:
        sval = ";".join(fmt_complex(v) for v in nf.s)
        tval = ";".join(fmt_complex(v) for v in nf.t)
        prefmt = f"{fmt_complex(pre.scale)},{fmt_complex(pre.shift)}"
        postfmt = f"{fmt_complex(post.scale)},{fmt_complex(post.shift)}"
    out(f"d={nf.d},e={nf.e},s={sval},t={tval},pre={prefmt},post={postfmt}")


def _cmd_crit(args, out):
    corr = _corr_from_args(args)
    for z in critical_points(corr):
        out(f"crit={fmt_complex(complex(z))}")


def _corr_positional(args) -> Correspondence:
    if not getattr(args, "corr", None):
        raise UsageError(
            "this subcommand takes the correspondence as a positional "
            "text argument; --c is the scalar input")
    return Correspondence.from_text(args.corr)


def _cmd_branch(args, out):
    corr = _corr_positional(args)
    if args.c is None:
        raise UsageError("branch needs --c <point>")
    x = parse_complex(args.c)
    for y in branch_step(corr, x):
        out(f"y={fmt_complex(complex(y))}")


def _cmd_lambda(args, out):
    corr = _corr_from_args(args)
    place = _place_from_args(args)
    params = local_params(corr, place)
    out(f"place={place},lambda={fmt(params.lam)},"
        f"escape_radius={fmt(params.escape_radius)}")


def _cmd_green_min(args, out):
    corr = _corr_positional(args)
    if args.c is None:
        raise UsageError("green-min needs --c <start point>")
    depth = args.depth if args.depth is not None else 16
    if args.p:
        enc = green_min_padic(corr, parse_rational(args.c), args.p, depth)
    else:
        enc = green_min(corr, parse_complex(args.c), depth=depth, tol=args.tol)
    out(enc.serialize())


def _cmd_capital_lambda(args, out):
    corr = _corr_from_args(args)
    depth = args.depth if args.depth is not None else 16
    enc = lambda_capital(corr, _place_from_args(args), depth=depth, tol=args.tol)
    out(enc.serialize())


def _cmd_hweil(args, out):
    nf = _nf_from_args(args)
    out(f"hweil={fmt(weil_height(nf))}")


def _cmd_hcrit(args, out):
    obj = _nf_from_args(args) if args.s is not None else _corr_from_args(args)
    depth = args.depth if args.depth is not None else 16
    breakdown = crit_height_breakdown(obj, depth=depth, tol=args.tol)
    lo = sum(e.lo for _, e in breakdown)
    hi = sum(e.hi for _, e in breakdown)
    tie = any(e.tie for _, e in breakdown)
    used = min(e.depth_used for _, e in breakdown)
    out(EscapeInterval(lo, hi, used, tie=tie).serialize())
    for place, enc in breakdown:
        out(f"place={place},{enc.serialize()}")


def _cmd_compare_heights(args, out):
    lohi = args.height_range.split(",")
    if len(lohi) != 2:
        raise UsageError("--height-range wants lo,hi")
    if args.d is None or args.e is None:
        raise UsageError("compare-heights needs --d and --e")
    spec = SampleSpec(count=args.count, d=args.d, e=args.e,
                      height_lo=float(lohi[0]), height_hi=float(lohi[1]),
                      seed=args.seed,
                      depth=args.depth if args.depth is not None else 14,
                      tol=args.tol)
    reports, failures = comparison_report(spec)
    for r in reports:
        out(r.record())
    for idx, msg in failures:
        print(f"sample {idx} failed: {msg}", file=sys.stderr)
    summ = comparison_summary(reports)
    out(f"summary:count={summ['count']},diff_min={fmt(summ['diff_min'])},"
        f"diff_max={fmt(summ['diff_max'])},diff_mean={fmt(summ['diff_mean'])}")


def _cmd_fn(args, out):
    if args.p is None or args.e is None or args.n is None:
        raise UsageError("fn needs --p --e --n")
    fam = UnicriticalFamily(args.p, args.e)
    out(fn_poly(fam, args.n, degree_cap=args.degree_cap).to_text())


def _cmd_primitive(args, out):
    if args.p is None or args.e is None or args.n is None:
        raise UsageError("primitive needs --p --e --n")
    fam = UnicriticalFamily(args.p, args.e)
    flag, witness = has_primitive_prime_factor(fam, args.n,
                                               degree_cap=args.degree_cap)
    out(f"primitive={'true' if flag else 'false'},n={args.n}")
    out(witness.to_text())


def _cmd_bound_threshold(args, out):
    if args.p is None or args.e is None:
        raise UsageError("bound-threshold needs --p --e")
    fam = UnicriticalFamily(args.p, args.e)
    out(f"threshold={bound_threshold(fam)}")


def _cmd_period_search(args, out):
    if None in (args.p, args.e, args.n, args.k):
        raise UsageError("period-search needs --p --e --n --k")
    fam = UnicriticalFamily(args.p, args.e)
    certs = period_search(fam, args.n, args.k, degree_cap=args.degree_cap)
    if not certs:
        out(f"certificates=0,n={args.n},k={args.k}")
    for cert in certs:
        out(cert.serialize())


def _cmd_member(args, out):
    if None in (args.d, args.e, args.c):
        raise UsageError("member needs --d --e --c")
    depth = args.depth if args.depth is not None else 24
    verdict = witness_unicritical(args.d, args.e, parse_complex(args.c),
                                  depth, frontier_cap=args.frontier_cap)
    out(verdict.record())


def _cmd_render(args, out):
    if args.d is None or args.e is None:
        raise UsageError("render needs --d --e")
    win = args.window.split(",")
    res = args.res.lower().split("x")
    if len(win) != 3 or len(res) != 2:
        raise UsageError("--window wants cx,cy,hw and --res wants WxH")
    cx, cy, hw = (float(v) for v in win)
    spec = RenderSpec(d=args.d, e=args.e, center=complex(cx, cy),
                      half_width_re=hw, half_width_im=hw,
                      width=int(res[0]), height=int(res[1]),
                      depth=args.depth if args.depth is not None else 24,
                      frontier_cap=args.frontier_cap)
    image, summary = render(spec)
    if args.out:
        write_pgm(args.out, image)
        print(f"wrote {args.out}", file=sys.stderr)
    out(summary_record(summary))


def _cmd_mc_green(args, out):
    corr = _corr_positional(args)
    if args.c is None:
        raise UsageError("mc-green needs --c <start point>")
    samples = args.n if args.n is not None else 1000
    depth = args.depth if args.depth is not None else 40
    mean, stderr, failures = expected_green_mc(
        corr, parse_complex(args.c), samples, depth=depth, seed=args.seed,
        tol=args.tol)
    out(f"mean={fmt(mean)},stderr={fmt(stderr)},failures={failures},"
        f"samples={samples}")


_HANDLERS = {
    "normalize": _cmd_normalize,
    "crit": _cmd_crit,
    "branch": _cmd_branch,
    "lambda": _cmd_lambda,
    "green-min": _cmd_green_min,
    "capital-lambda": _cmd_capital_lambda,
    "hweil": _cmd_hweil,
    "hcrit": _cmd_hcrit,
    "compare-heights": _cmd_compare_heights,
    "fn": _cmd_fn,
    "primitive": _cmd_primitive,
    "bound-threshold": _cmd_bound_threshold,
    "period-search": _cmd_period_search,
    "member": _cmd_member,
    "render": _cmd_render,
    "mc-green": _cmd_mc_green,
}


def dispatch(argv, stdout=None) -> int:
    """Parse argv, run the subcommand, stream records; return the exit code."""
    stream = stdout if stdout is not None else sys.stdout

    def out(line: str):
        print(line, file=stream)

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _run_config(args)  # budget validation
        _HANDLERS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    except (CorrdynError, ValueError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

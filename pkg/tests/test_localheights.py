"""Local escape thresholds, escape rates and certified enclosures."""

import math
from fractions import Fraction

import numpy as np

from corrdyn.correspondence import Correspondence, NormalForm, PathPrefix, extend
from corrdyn.localheights import (
    ArchStepBounds,
    CORRECTION_NONE,
    EscapeInterval,
    expected_green_mc,
    green,
    green_min,
    green_min_padic,
    lambda_capital,
    lambda_local,
    local_params,
    policy_min_modulus,
)
from corrdyn.padic import Place

Y2X3P1 = Correspondence([1, 0, 0, 1], [0, 0, 1])
Y2X3P1_F = Correspondence([1.0, 0, 0, 1.0], [0, 0, 1.0])
PURE32 = NormalForm([0, 0], [0])  # (1/2) y^2 = (1/3) x^3


class TestLambdaLocal:
    def test_archimedean_pure_powers(self):
        lam = lambda_local(PURE32, Place.archimedean())
        assert math.isclose(lam, math.log(27 / 2), rel_tol=1e-12)

    def test_padic_unit_ratio(self):
        assert lambda_local(PURE32, Place.padic(7)) == 0.0

    def test_padic_p3(self):
        # |3/2|_3 = 1/3, squared is below 1: threshold 0
        assert lambda_local(PURE32, Place.padic(3)) == 0.0

    def test_correction_flag(self):
        lam_on = lambda_local(PURE32, Place.archimedean())
        lam_off = lambda_local(PURE32, Place.archimedean(),
                               correction_side=CORRECTION_NONE)
        assert math.isclose(lam_on - lam_off, math.log(6), rel_tol=1e-12)

    def test_escape_radius_margin(self):
        params = local_params(PURE32, Place.archimedean())
        assert params.escape_radius >= math.exp(params.lam)


class TestGreen:
    def test_doubling_map(self):
        val = green(Correspondence([0, 0, 1.0], [0, 1.0]), 2.0 + 0j, tol=1e-10)
        assert math.isclose(val, math.log(2), abs_tol=1e-10)

    def test_even_pair(self):
        val = green(Correspondence([0, 0, 0, 0, 1.0], [0, 0, 1.0]), 3.0 + 0j,
                    tol=1e-10)
        assert math.isclose(val, math.log(3), abs_tol=1e-10)

    def test_bounded_cycle_exactly_zero(self):
        # the 0 -> -1 -> 0 cycle: min-modulus policy reproduces it
        val = green(Y2X3P1_F, PathPrefix((0j, -1 + 0j)), tol=1e-6,
                    max_depth=80)
        assert val == 0.0

    def test_uncertified_returns_interval(self):
        out = green(Y2X3P1_F, 0j, tol=1e-15, max_depth=4)
        assert isinstance(out, EscapeInterval)
        assert out.lo == 0.0 and out.hi > 0


class TestGreenMin:
    def test_pcc_enclosure(self):
        enc = green_min(Y2X3P1_F, 0j, depth=12, tol=1e-9)
        lam = lambda_local(Y2X3P1_F, Place.archimedean())
        b0 = (math.log(2) + math.log(6))  # the coarse surviving-node constant
        assert enc.lo == 0.0
        assert enc.hi <= (2 / 3) ** 12 * (lam + b0)

    def test_escaping_parameter(self):
        corr = Correspondence([1e6, 0, 0, 1.0], [0, 0, 1.0])
        enc = green_min(corr, 0j, depth=12, tol=1e-9)
        assert enc.lo > 0

    def test_single_valued_degenerates_to_green(self):
        corr = Correspondence([10.0, 0, 1.0], [0, 1.0])
        enc = green_min(corr, 0j, depth=24, tol=1e-10)
        val = green(corr, 0j, tol=1e-10)
        assert enc.width <= 1e-10
        assert abs(enc.mid - val) <= 1e-9

    def test_monotone_in_depth(self):
        prev = None
        for depth in (6, 9, 12, 15):
            enc = green_min(Y2X3P1_F, 0j, depth=depth, tol=1e-12)
            if prev is not None:
                assert enc.hi <= prev.hi + 1e-15
                assert enc.lo >= prev.lo - 1e-15
            prev = enc

    def test_enclosure_consistent_with_enumeration(self):
        depth = 6
        enc = green_min(Y2X3P1_F, 0j, depth=depth, tol=1e-12)
        sb = ArchStepBounds(Y2X3P1_F)
        level = [PathPrefix((0j,))]
        for _ in range(depth):
            level = [q for p in level for q in extend(p, Y2X3P1_F)]
        lo_best = math.inf
        hi_best = math.inf
        for p in level:
            glo, ghi = sb.point_enclosure(p.last())
            fac = (2 / 3) ** depth
            lo_best = min(lo_best, fac * glo)
            hi_best = min(hi_best, fac * ghi)
        # the true minimum lies in both [enc.lo, enc.hi] and
        # [lo_best, hi_best]: the intervals must overlap
        assert max(enc.lo, lo_best) <= min(enc.hi, hi_best) + 1e-12


class TestTransformationLaw:
    def test_shift_scales_by_d_over_e(self):
        rng = np.random.Generator(np.random.Philox(key=41))
        tol = 1e-8
        checked = 0
        for d, e in [(3, 2), (5, 2), (5, 3)]:
            for _ in range(12):
                s = rng.normal(size=d - 1) + 1j * rng.normal(size=d - 1)
                t = rng.normal(size=e - 1) + 1j * rng.normal(size=e - 1)
                nf = NormalForm(list(s), list(t))
                corr = nf.to_correspondence()
                radius = local_params(corr, Place.archimedean()).escape_radius
                x0 = complex(radius * (1.5 + rng.uniform()),
                             radius * rng.uniform())
                prefix = PathPrefix((x0,))
                for _ in range(2):
                    prefix = extend(prefix, corr)[0]
                g_full = green(corr, prefix, tol=tol)
                g_shift = green(corr, prefix.shifted(), tol=tol)
                assert isinstance(g_full, float) and isinstance(g_shift, float)
                assert abs(g_shift - (d / e) * g_full) <= 10 * tol
                checked += 1
        assert checked == 36


class TestPadic:
    def test_good_reduction(self):
        enc = green_min_padic(Y2X3P1, Fraction(0), 5)
        assert (enc.lo, enc.hi) == (0.0, 0.0)

    def test_bad_reduction_escapes(self):
        corr = Correspondence([Fraction(1, 25), Fraction(0), Fraction(0),
                               Fraction(1)], [Fraction(0), Fraction(0), Fraction(1)])
        enc = green_min_padic(corr, Fraction(0), 5)
        assert enc.lo > 0
        # hand iteration: v(x_1) = -1, v(x_{n+1}) = (3/2) v(x_n), so
        # log|x_n| = (3/2)^(n-1) log 5 and the rate is (2/3) log 5
        want = (2 / 3) * math.log(5)
        assert math.isclose(enc.lo, want, rel_tol=1e-12)
        assert enc.width == 0.0

    def test_integral_start_stays_integral(self):
        corr = Correspondence([Fraction(0), Fraction(0), Fraction(1)],
                              [Fraction(0), Fraction(1)])  # y = x^2
        for p in (2, 3, 7):
            enc = green_min_padic(corr, Fraction(p), p)
            assert (enc.lo, enc.hi) == (0.0, 0.0)


class TestLambdaCapital:
    def test_pcc_example(self):
        enc = lambda_capital(Y2X3P1_F, Place.archimedean(), depth=14, tol=1e-9)
        assert enc.lo == 0.0 and enc.hi <= 1e-2

    def test_pure_powers_fixed_path(self):
        enc = lambda_capital(PURE32, Place.archimedean(), depth=10, tol=1e-9)
        assert enc.lo == 0.0 and enc.hi <= 1e-9

    def test_large_scale_tracks_threshold(self):
        rng = np.random.Generator(np.random.Philox(key=43))
        for scale in (1e4, 1e8):
            s = scale * (rng.normal(size=2) + 1j * rng.normal(size=2))
            t = (scale ** 1.5) * (rng.normal(size=1) + 1j * rng.normal(size=1))
            nf = NormalForm(list(s), list(t))
            lam = lambda_local(nf, Place.archimedean(),
                               correction_side=CORRECTION_NONE)
            enc = lambda_capital(nf, Place.archimedean(), depth=10, tol=1e-9)
            assert 0.5 <= enc.mid / lam <= 1.5

    def test_padic_pcc_is_exact_zero(self):
        for p in (2, 3, 7):
            enc = lambda_capital(Y2X3P1, Place.padic(p), depth=16)
            assert (enc.lo, enc.hi) == (0.0, 0.0)
            assert not enc.tie


class TestMonteCarlo:
    def test_single_branch_exact(self):
        corr = Correspondence([0, 0, 1.0], [0, 1.0])
        mean, stderr, failures = expected_green_mc(corr, 2.0, samples=50,
                                                   seed=3)
        assert math.isclose(mean, math.log(2), abs_tol=1e-9)
        assert stderr <= 1e-12 and failures == 0

    def test_symmetric_branches(self):
        corr = Correspondence([0, 0, 0, 0, 1.0], [0, 0, 1.0])
        mean, stderr, _ = expected_green_mc(corr, 3.0, samples=50, seed=5)
        assert math.isclose(mean, math.log(3), abs_tol=1e-9)

    def test_self_consistency(self):
        small = expected_green_mc(Y2X3P1_F, 10.0, samples=2000, seed=7)
        big = expected_green_mc(Y2X3P1_F, 10.0, samples=20000, seed=11)
        tol = 3 * math.hypot(small[1], big[1])
        assert abs(small[0] - big[0]) <= max(tol, 1e-6)


def test_escape_interval_serialization():
    enc = EscapeInterval(0.0, 0.5, 12, tie=True)
    assert enc.serialize() == "lo=0,hi=0.5,depth=12,tie=true"
    assert EscapeInterval(1.0, 1.0, 3).serialize() == "lo=1,hi=1,depth=3,tie=false"


class TestLambdaUpperBoundProperty:
    def test_concrete_assignment_bounds_from_escaping_family(self):
        # y^2 = x^3 + 10: every critical path escapes, greens are certified;
        # the enclosure's hi cannot exceed the best concrete assignment
        corr = Correspondence([10.0, 0, 0, 1.0], [0, 0, 1.0])
        from corrdyn.correspondence import critical_points
        tol = 1e-9
        enc = lambda_capital(corr, Place.archimedean(), depth=12, tol=tol)
        crits = sorted(set(np.round(critical_points(corr), 9).tolist()),
                       key=lambda z: (z.real, z.imag))
        worst = 0.0
        for c in crits:
            val = green(corr, complex(c), policy=policy_min_modulus, tol=tol)
            assert isinstance(val, float)
            worst = max(worst, val)
        assert enc.hi <= worst + 10 * tol

    def test_concrete_assignment_bounds_pcc(self):
        # bounded case: compare against the paths' certified upper bounds
        tol = 1e-9
        depth = 12
        enc = lambda_capital(Y2X3P1_F, Place.archimedean(), depth=depth,
                             tol=tol)
        from corrdyn.correspondence import critical_points
        crits = sorted(set(np.round(critical_points(Y2X3P1_F), 9).tolist()),
                       key=lambda z: (z.real, z.imag))
        worst_hi = 0.0
        for c in crits:
            out = green(Y2X3P1_F, complex(c), policy=policy_min_modulus,
                        tol=0.0, max_depth=depth)
            hi = out.hi if isinstance(out, EscapeInterval) else out
            worst_hi = max(worst_hi, hi)
        assert enc.hi <= worst_hi + tol

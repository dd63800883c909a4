"""The f_n recursion, valuation profiles, primitive factors, period searches."""

import pytest

from corrdyn.errors import BudgetExceededError
from corrdyn.fppoly import FpPoly, fp_factor, fp_valuation
from corrdyn.gf import GF, least_irreducible
from corrdyn.unicritical import (
    UnicriticalFamily,
    bound_threshold,
    critical_return_lengths,
    envelope_ratio,
    exhaustive_period_params,
    fn_poly,
    fn_sequence,
    has_primitive_prime_factor,
    period_search,
    valuation_profile,
)

FAM32 = UnicriticalFamily(3, 2)


class TestRecursion:
    def test_small_values(self):
        assert fn_poly(FAM32, 0).is_zero()
        assert fn_poly(FAM32, 1) == FpPoly(3, [0, 1])
        assert fn_poly(FAM32, 2) == FpPoly(3, [0, 0, 2, 1])
        assert fn_poly(FAM32, 3) == FpPoly(3, [0, 0, 0, 0, 2, 2, 2, 0, 0, 1])

    def test_degree_law(self):
        for p, e in [(3, 2), (5, 2), (5, 3), (7, 4)]:
            fam = UnicriticalFamily(p, e)
            for n, f in enumerate(fn_sequence(fam, 4), start=1):
                assert f.degree == p ** (n - 1)
                assert f.leading() == 1

    def test_degree_budget(self):
        with pytest.raises(BudgetExceededError):
            fn_poly(FAM32, 12, degree_cap=60000)

    def test_family_validation(self):
        with pytest.raises(ValueError):
            UnicriticalFamily(4, 2)
        with pytest.raises(ValueError):
            UnicriticalFamily(3, 3)


class TestValuationProfile:
    def test_examples(self):
        c = FpPoly(3, [0, 1])
        assert valuation_profile(FAM32, 2, 1, c) == 2
        assert valuation_profile(FAM32, 3, 1, c) == 4
        cm1 = FpPoly(3, [2, 1])  # c - 1, least index 2
        assert valuation_profile(FAM32, 3, 2, cm1) == 0

    def test_wrong_least_index_reported(self):
        c = FpPoly(3, [0, 1])
        with pytest.raises(ValueError, match="least index.*is 1"):
            valuation_profile(FAM32, 4, 2, c)

    def test_valuation_pattern(self):
        # v_pi(f_n) = e^(n/r - 1) v_pi(f_r) when r | n, else 0
        seq = fn_sequence(FAM32, 8)
        for r in range(1, 5):
            fr = seq[r - 1]
            for pi, _ in fp_factor(fr):
                least = next(j for j in range(1, r + 1)
                             if fp_valuation(seq[j - 1], pi) > 0)
                if least != r:
                    continue
                base = fp_valuation(fr, pi)
                for n in range(1, 9):
                    got = fp_valuation(seq[n - 1], pi)
                    want = (2 ** (n // r - 1)) * base if n % r == 0 else 0
                    assert got == want, (r, n, pi)

    def test_frobenius_congruence(self):
        # f_{r+j} = f_j^(p^r) modulo any primitive factor pi of f_r
        seq = fn_sequence(FAM32, 7)
        for r in range(1, 4):
            fr = seq[r - 1]
            for pi, _ in fp_factor(fr):
                least = next(j for j in range(1, r + 1)
                             if fp_valuation(seq[j - 1], pi) > 0)
                if least != r:
                    continue
                for j in range(1, 4):
                    lhs = seq[r + j - 1] % pi
                    rhs = seq[j - 1].pow_mod(3 ** r, pi)
                    assert lhs == rhs, (r, j)


class TestPrimitiveFactors:
    def test_n1(self):
        flag, witness = has_primitive_prime_factor(FAM32, 1)
        assert flag and witness == FpPoly(3, [0, 1])

    def test_n2(self):
        flag, witness = has_primitive_prime_factor(FAM32, 2)
        assert flag and witness == FpPoly(3, [2, 1])

    def test_all_up_to_seven(self):
        for n in range(1, 8):
            flag, witness = has_primitive_prime_factor(FAM32, n)
            assert flag, n
            assert witness.degree >= 1


class TestBoundThreshold:
    def test_reference_family(self):
        assert bound_threshold(FAM32) == 8

    def test_direct_evaluation_at_7_and_8(self):
        # the envelope comparison, evaluated by hand at the edge:
        # n=7: 3^6 = 729 <= 2^6*3 + 7*3^4 = 759 (cannot conclude)
        # n=8: 3^7 = 2187 > 2^7*3 + 8*sqrt(3^9) (concludes)
        a7 = 3 ** 6 - 3 * 2 ** 6
        assert not (a7 > 0 and a7 * a7 > 49 * 3 ** 8)
        a8 = 3 ** 7 - 3 * 2 ** 7
        assert a8 > 0 and a8 * a8 > 64 * 3 ** 9

    def test_other_family_by_direct_scan(self):
        fam = UnicriticalFamily(5, 2)
        got = bound_threshold(fam)

        def concludes(n):
            a = 5 ** (n - 1) - 5 * 2 ** (n - 1)
            return a > 0 and a * a > n * n * 5 ** (n + 1)

        failures = [n for n in range(1, 60) if not concludes(n)]
        assert got == failures[-1] + 1
        assert all(concludes(n) for n in range(got, 60))

    def test_ratio_decays(self):
        assert envelope_ratio(FAM32, 50) < 1e-6


class TestPeriodSearch:
    def test_n2_k1(self):
        certs = period_search(FAM32, 2, 1)
        assert len(certs) == 1
        cert = certs[0]
        assert cert.c == (1,)
        assert cert.cycle == ((0,), (2,), (0,))
        assert cert.validate()
        assert cert.serialize() == "3,2,1,2,modulus=0:1,c=1,cycle=0;2;0"

    def test_n1_k1(self):
        certs = period_search(FAM32, 1, 1)
        assert len(certs) == 1
        assert certs[0].c == (0,)
        assert certs[0].cycle == ((0,), (0,))

    def test_n3_small_fields_validate(self):
        for k in (1, 2, 3):
            for cert in period_search(FAM32, 3, k):
                assert cert.validate()

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("k", [1, 2])
    def test_agrees_with_exhaustive(self, n, k):
        certs = period_search(FAM32, n, k)
        field = GF(3, k)
        got = sorted(field.encode(c.c) for c in certs)
        want = sorted(exhaustive_period_params(FAM32, n, k))
        assert got == want

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            period_search(FAM32, 2, 20)


class TestGF:
    def test_least_irreducible_deterministic(self):
        assert least_irreducible(3, 1) == FpPoly(3, [0, 1])
        m2 = least_irreducible(3, 2)
        assert m2.degree == 2 and m2.leading() == 1
        # x^2 + 1 is the first irreducible of degree 2 over F_3
        assert m2 == FpPoly(3, [1, 0, 1])

    def test_field_arithmetic(self):
        field = GF(3, 2)
        # multiplicative group order 8: a^8 = 1 for a != 0
        one = field.encode([1, 0])
        for a in range(1, field.size):
            assert field.pow(a, 8) == one

    def test_return_lengths_match_bfs(self):
        field = GF(3, 1)
        # c = 1: cycle 0 -> 2 -> 0 of length 2 and nothing shorter
        lengths = critical_return_lengths(field, 2, field.encode([1]), 4)
        assert lengths[0] == 2

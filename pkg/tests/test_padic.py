"""Places, p-adic valuations and Newton polygons."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrdyn.padic import (
    INFINITE_VALUATION,
    Place,
    newton_polygon_root_valuations,
    padic_valuation,
)

INF = INFINITE_VALUATION


class TestPlace:
    def test_constructors(self):
        assert Place.archimedean().is_archimedean
        assert Place.padic(7).prime == 7
        assert str(Place.archimedean()) == "inf"

    def test_invariants(self):
        with pytest.raises(ValueError):
            Place("p-adic")
        with pytest.raises(ValueError):
            Place("p-adic", 6)
        with pytest.raises(ValueError):
            Place("archimedean", 3)


class TestValuation:
    def test_examples(self):
        assert padic_valuation(9, 3) == 2
        assert padic_valuation(0, 5) == INF
        assert padic_valuation(Fraction(4, 6), 3) == -1

    def test_normalization(self):
        # |p|_v = 1/p: log|x|_v = -v log p
        v = padic_valuation(Fraction(4, 6), 3)
        assert math.isclose(-v * math.log(3), math.log(3))


def _hull_oracle(points):
    """Independent lower-hull slope reader (brute force over all lines)."""
    out = []
    pts = sorted(points)
    i = 0
    while i < len(pts) - 1:
        best_j = None
        best_slope = None
        for j in range(i + 1, len(pts)):
            slope = Fraction(pts[j][1] - pts[i][1], pts[j][0] - pts[i][0])
            if best_slope is None or slope < best_slope or (
                    slope == best_slope and j > best_j):
                best_slope = slope
                best_j = j
        out.extend([-best_slope] * (pts[best_j][0] - pts[i][0]))
        i = best_j
    return sorted(out, reverse=True)


class TestNewtonPolygon:
    def test_single_slope(self):
        # y^2 - 9 at p=3: valuations [2, inf, 0] -> both roots at valuation 1
        assert newton_polygon_root_valuations([2, INF, 0]) == [1, 1]

    def test_zero_root_reported_infinite(self):
        # y^2 - 3y at p=3
        got = newton_polygon_root_valuations([INF, 1, 0])
        assert got[0] == INF and got[1] == 1

    def test_cubic_against_hull_oracle(self):
        # x^3 + 3x + 9 at p=3: valuations [2, 1, inf, 0]
        got = newton_polygon_root_valuations([2, 1, INF, 0])
        want = _hull_oracle([(0, Fraction(2)), (1, Fraction(1)),
                             (3, Fraction(0))])
        assert got == want == [1, Fraction(1, 2), Fraction(1, 2)]
        # valuations must sum to v(a_0) - v(a_d) = 2 (product of roots)
        assert sum(got) == 2

    def test_leading_must_be_finite(self):
        with pytest.raises(ValueError):
            newton_polygon_root_valuations([0, 1, INF])

    @given(st.data())
    @settings(max_examples=80, deadline=None)
    def test_sum_identity_and_min_bound(self, data):
        d = data.draw(st.integers(min_value=1, max_value=7))
        vals = [data.draw(st.one_of(
            st.just(INF),
            st.integers(min_value=-8, max_value=8)))
            for _ in range(d)]
        vals.append(data.draw(st.integers(min_value=-8, max_value=8)))
        got = newton_polygon_root_valuations(vals)
        assert len(got) == d
        finite = [v for v in got if v != INF]
        if vals[0] != INF:
            # sum of root valuations = v(a_0) - v(a_d)
            assert sum(finite) == Fraction(vals[0]) - Fraction(vals[-1])
        if finite:
            # non-archimedean max-root bound, no error term: the smallest
            # root valuation is >= min over i of (v(a_i)-v(a_d))/(d-i)
            bound = min(Fraction(v - vals[-1], d - i)
                        for i, v in enumerate(vals[:-1]) if v != INF)
            assert min(finite) >= bound
            assert min(finite) == bound  # attained exactly

"""The Sylvester-determinant oracle for the unicritical parameter polynomials."""

import pytest

from corrdyn.errors import BudgetExceededError
from corrdyn.fppoly import FpPoly
from corrdyn.resultants import resultant_oracle
from corrdyn.unicritical import UnicriticalFamily, fn_poly


def test_oracle_small_values():
    assert resultant_oracle(3, 2, 1) == FpPoly(3, [0, 1])          # c
    assert resultant_oracle(3, 2, 2) == FpPoly(3, [0, 0, 2, 1])    # c^3 - c^2
    assert resultant_oracle(5, 2, 1) == FpPoly(5, [0, 1])          # c


@pytest.mark.parametrize("p,e", [(3, 2), (5, 2), (5, 3)])
def test_oracle_matches_recursion(p, e):
    fam = UnicriticalFamily(p, e)
    for n in range(1, 5):
        assert resultant_oracle(p, e, n) == fn_poly(fam, n), (p, e, n)


def test_oracle_budget():
    with pytest.raises(BudgetExceededError):
        resultant_oracle(3, 2, 5)


def test_oracle_validates_inputs():
    with pytest.raises(ValueError):
        resultant_oracle(4, 2, 1)
    with pytest.raises(ValueError):
        resultant_oracle(3, 3, 1)

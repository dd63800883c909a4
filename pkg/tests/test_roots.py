"""The simultaneous-iteration complex root finder."""

import numpy as np
import pytest

from corrdyn.roots import roots_complex, smallest_arg_root


def _bisect_sqrt2(tol=1e-12):
    lo, hi = 1.0, 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid * mid < 2.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_exact_radicals():
    r = roots_complex([-1, 0, 1], tol=1e-12)
    np.testing.assert_allclose(sorted(v.real for v in r), [-1, 1], atol=1e-12)


def test_triple_root_cluster():
    r = roots_complex([0, 0, 0, 1], tol=1e-12)
    assert len(r) == 3
    assert max(abs(v) for v in r) <= 1e-4  # accuracy degrades as tol^(1/3)


def test_sqrt2_vs_bisection():
    want = _bisect_sqrt2()
    r = roots_complex([-2, 0, 1], tol=1e-13)
    got = max(v.real for v in r)
    assert abs(got - want) <= 1e-11


def test_multiplicity_count_and_residual():
    rng = np.random.Generator(np.random.Philox(key=5))
    for _ in range(40):
        deg = int(rng.integers(1, 9))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        coeffs[-1] += 3.0  # keep the leading coefficient well away from 0
        r = roots_complex(coeffs, tol=1e-11)
        assert len(r) == deg
        # sum and product against the coefficients
        s = np.sum(r)
        np.testing.assert_allclose(s, -coeffs[-2] / coeffs[-1], rtol=1e-8,
                                   atol=1e-8)
        prod = np.prod(r)
        np.testing.assert_allclose(prod, (-1) ** deg * coeffs[0] / coeffs[-1],
                                   rtol=1e-7, atol=1e-8)


def test_zero_roots_stripped_exactly():
    r = roots_complex([0, 0, 2, 1])
    assert sum(1 for v in r if v == 0) == 2


def test_input_validation():
    with pytest.raises(ValueError):
        roots_complex([1])
    with pytest.raises(ValueError):
        roots_complex([0])


def test_smallest_arg_root():
    # cube roots of 8: argument 0 wins
    assert abs(smallest_arg_root(8 + 0j, 3) - 2.0) < 1e-12
    # square roots of -4: 2i (argument pi/2) beats -2i (3pi/2)
    assert abs(smallest_arg_root(-4 + 0j, 2) - 2j) < 1e-12


def test_failure_carries_residuals(monkeypatch):
    from corrdyn import roots as roots_mod
    from corrdyn.errors import RootFindingError

    def never_converges(coeffs, z, max_iter, rtol):
        res = np.abs(z) + 1.0
        return z, res, res * 0 + 2.0, max_iter, False

    monkeypatch.setattr(roots_mod.kernels, "aberth_iterate", never_converges)
    with pytest.raises(RootFindingError) as info:
        roots_complex([1, 1, 1, 1], tol=1e-12)
    assert info.value.residuals is not None
    assert len(info.value.residuals) == 3

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from ellperiods.errors import SeriesPrecisionExhausted
from ellperiods.series import Series


@pytest.fixture(autouse=True)
def precision():
    with mp.workprec(128):
        yield


def mids(s):
    return [c.mid for c in s.coeffs]


def test_reversion_of_w_plus_w2():
    # w = u - u^2 + 2u^3 - 5u^4 + ... (signed Catalan numbers)
    g = Series([1, 1, 0, 0, 0, 0], 1).reverse()
    assert mids(g)[:6] == [1, -1, 2, -5, 14, -42]


def test_laurent_composition():
    h = Series([1, 2, 3, 0, 0], -1)          # 1/w + 2 + 3w
    inner = Series([1, -1, 2, -5, 14], 1)    # reversion of w + w^2
    out = h.compose(inner)
    assert out.val == -1
    assert mids(out)[:3] == [1, 3, 2]


def test_taylor_shift():
    # (w + 2)^2 at t = 2 -> coefficients of (u + 4)^2 = 16 + 8u + u^2 around u = 0
    s = Series.taylor([0, 0, 1], 4, 4)
    assert mids(s) == [16, 8, 1, 0]


def test_sqrt_and_inverse():
    s = Series([4, 4, 1, 0], 0)              # (2 + w)^2
    assert mids(s.sqrt()) == [2, 1, 0, 0]
    inv = Series([1, -1, 0, 0], 0).inverse()
    assert mids(inv) == [1, 1, 1, 1]


def test_sqrt_odd_valuation_rejected():
    with pytest.raises(SeriesPrecisionExhausted):
        Series([1, 0], 1).sqrt()


def test_truncation_is_reported():
    s = Series([1, 2], 0)
    with pytest.raises(SeriesPrecisionExhausted):
        s.coeff(2)


def test_scalar_addition_keeps_order():
    s = Series([0, 1, 2, 3], 0) + 5
    assert mids(s) == [5, 1, 2, 3]


coef = st.integers(-6, 6)


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=4, max_size=6), st.lists(coef, min_size=4, max_size=6))
def test_product_matches_polynomial_product(a, b):
    n = min(len(a), len(b))
    prod = [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]
    assert mids(Series(a) * Series(b)) == prod


@settings(max_examples=30, deadline=None)
@given(st.lists(coef, min_size=5, max_size=5))
def test_reverse_is_compositional_inverse(rest):
    f = Series([1] + rest, 1)
    g = f.reverse()
    comp = f.compose(g)
    vals = mids(comp)
    assert comp.val == 1
    assert abs(vals[0] - 1) < 1e-30
    assert all(abs(v) < 1e-25 for v in vals[1:5])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(-3, 3, max_denominator=4), min_size=3, max_size=5),
       st.fractions(-2, 2, max_denominator=3))
def test_taylor_derivative(coeffs, t):
    s = Series.taylor(coeffs, t, len(coeffs))
    d = [k * c for k, c in enumerate(coeffs)][1:]
    ds = Series.taylor(d, t, len(coeffs) - 1)
    got = mids(s.deriv())
    want = mids(ds)
    assert all(abs(x - y) < 1e-30 for x, y in zip(got, want))
    val = sum(Fraction(c) * t ** k for k, c in enumerate(coeffs))
    assert abs(s.coeffs[0].mid - float(val)) < 1e-12

import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from satsteer.ddouble import DD, two_prod, two_sum

mpmath.mp.prec = 300

# Magnitudes kept away from underflow: error-free transforms need normal products.
positive = st.floats(min_value=1e-60, max_value=1e60)
nonzero = st.builds(lambda x, neg: -x if neg else x, positive, st.booleans())
finite = st.one_of(st.just(0.0), nonzero)


def dd_of(x, y):
    return DD(x) + DD(y) * 2.0**-60


def mp_of(d):
    return mpmath.mpf(d.hi) + mpmath.mpf(d.lo)


def rel_err(d, exact):
    if exact == 0:
        return abs(mp_of(d))
    return abs((mp_of(d) - exact) / exact)


@given(finite, finite)
def test_two_sum_is_exact(a, b):
    s, e = two_sum(a, b)
    assert mpmath.mpf(s) + mpmath.mpf(e) == mpmath.mpf(a) + mpmath.mpf(b)


@given(finite, finite)
def test_two_prod_is_exact(a, b):
    p, e = two_prod(a, b)
    assert mpmath.mpf(p) + mpmath.mpf(e) == mpmath.mpf(a) * mpmath.mpf(b)


@given(finite, finite, finite, finite)
def test_add_and_sub(a, b, c, d):
    x, y = dd_of(a, b), dd_of(c, d)
    exact = mp_of(x) + mp_of(y)
    assert rel_err(x + y, exact) <= 1e-30 or abs(mp_of(x + y) - exact) <= 1e-30 * max(
        abs(mp_of(x)), abs(mp_of(y))
    )
    exact = mp_of(x) - mp_of(y)
    assert abs(mp_of(x - y) - exact) <= 1e-30 * max(abs(mp_of(x)), abs(mp_of(y)), 1e-300)


@given(finite, finite, finite, finite)
def test_mul(a, b, c, d):
    x, y = dd_of(a, b), dd_of(c, d)
    assert rel_err(x * y, mp_of(x) * mp_of(y)) <= 1e-30


@given(finite, finite, nonzero, finite)
def test_div(a, b, c, d):
    x, y = dd_of(a, b), dd_of(c, d)
    assert rel_err(x / y, mp_of(x) / mp_of(y)) <= 1e-30


@given(positive, st.floats(min_value=0, max_value=1))
def test_sqrt(a, b):
    x = dd_of(a, b * a)
    assert rel_err(x.sqrt(), mpmath.sqrt(mp_of(x))) <= 1e-30


def test_near_unity_difference_keeps_digits():
    # (1 + 1e-10)^2 - 1 in double-double retains the 1e-20 term
    x = (DD(1.0) + 1e-10) * (DD(1.0) + 1e-10) - 1
    assert rel_err(x, (1 + mpmath.mpf(1e-10)) ** 2 - 1) <= 1e-20


def test_mixed_operands_and_comparisons():
    x = DD(2.0)
    assert float(1 - x) == -1.0
    assert float(3 / x) == 1.5
    assert x > 1 and x < 3 and x >= 2 and x <= 2 and x == 2.0
    with pytest.raises(ZeroDivisionError):
        x / 0.0
    with pytest.raises(ValueError):
        DD(-1.0).sqrt()
    with pytest.raises(AttributeError):
        x.hi = 3.0
    assert DD(0.0).sqrt() == 0.0
    assert math.isclose(float(DD(2.0).sqrt()), math.sqrt(2.0))

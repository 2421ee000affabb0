"""Interval kernel: exactness, containment soundness, domain errors."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triblock.interval import (
    PI,
    SQRT2,
    Interval,
    IntervalError,
    as_interval,
    from_fraction,
    sqrt,
    square,
)


def exact(x: Interval):
    """Endpoints as exact rationals for oracle comparisons."""
    return Fraction(float(x.lo)), Fraction(float(x.hi))


def contains_fraction(x: Interval, q: Fraction) -> bool:
    lo, hi = exact(x)
    return lo <= q <= hi


class TestExactCases:
    def test_add_integer_endpoints(self):
        c = Interval(1.0, 2.0) + Interval(3.0, 4.0)
        assert float(c.lo) == 4.0 and float(c.hi) == 6.0

    def test_mul_sign_cases(self):
        c = Interval(-1.0, 1.0) * Interval(-1.0, 1.0)
        assert float(c.lo) == -1.0 and float(c.hi) == 1.0

    def test_point_one_plus_point_two(self):
        c = Interval(0.1) + Interval(0.2)
        assert float(c.hi) > float(c.lo)
        assert contains_fraction(c, Fraction(0.1) + Fraction(0.2))

    def test_sub(self):
        c = Interval(1.0, 2.0) - Interval(0.5, 1.5)
        assert float(c.lo) == -0.5 and float(c.hi) == 1.5

    def test_square_straddle(self):
        c = square(Interval(-2.0, 1.0))
        assert float(c.lo) == 0.0 and float(c.hi) == 4.0

    def test_pow(self):
        c = Interval(2.0) ** 3
        assert float(c.lo) == 8.0 == float(c.hi)
        c = Interval(3.0) ** -2
        assert contains_fraction(c, Fraction(1, 9))

    def test_exact_zero_product(self):
        c = Interval(0.0) * Interval(-1e308, 1e308)
        assert c.is_exact_zero()


class TestDomainErrors:
    def test_div_by_zero_interval(self):
        with pytest.raises(IntervalError):
            Interval(1.0) / Interval(-1.0, 1.0)

    def test_sqrt_negative(self):
        with pytest.raises(IntervalError):
            sqrt(Interval(-1.0, 4.0))

    def test_nan_rejected(self):
        with pytest.raises(IntervalError):
            Interval(float("nan"))

    def test_inverted_rejected(self):
        with pytest.raises(IntervalError):
            Interval(2.0, 1.0)


class TestConstants:
    def test_pi_enclosure(self):
        import mpmath

        mpmath.mp.dps = 60
        pi = Fraction(int(mpmath.floor(mpmath.pi * 10**55)), 10**55)
        lo, hi = exact(PI)
        assert lo <= pi <= hi
        assert float(PI.width) <= 2 * math.ulp(math.pi)

    def test_sqrt2_enclosure(self):
        lo, hi = exact(SQRT2)
        assert lo * lo <= 2 <= hi * hi


def _finite_floats():
    return st.floats(
        min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False
    )


@st.composite
def _intervals(draw):
    a = draw(_finite_floats())
    b = draw(_finite_floats())
    return Interval(min(a, b), max(a, b))


@st.composite
def _positive_intervals(draw):
    a = draw(st.floats(min_value=1e-12, max_value=1e12))
    b = draw(st.floats(min_value=1e-12, max_value=1e12))
    return Interval(min(a, b), max(a, b))


@given(_intervals(), _intervals())
@settings(max_examples=300, deadline=None)
def test_containment_add_mul(x, y):
    """Rational-endpoint oracle result lies inside every arithmetic result."""
    xl, xh = exact(x)
    yl, yh = exact(y)
    s = x + y
    assert contains_fraction(s, xl + yl) and contains_fraction(s, xh + yh)
    p = x * y
    for a in (xl, xh):
        for b in (yl, yh):
            assert contains_fraction(p, a * b)


@given(_intervals(), _positive_intervals())
@settings(max_examples=300, deadline=None)
def test_containment_div(x, y):
    xl, xh = exact(x)
    yl, yh = exact(y)
    q = x / y
    for a in (xl, xh):
        for b in (yl, yh):
            assert contains_fraction(q, a / b)


@given(_positive_intervals())
@settings(max_examples=300, deadline=None)
def test_containment_sqrt(x):
    r = sqrt(x)
    lo, hi = exact(r)
    xl, xh = exact(x)
    assert lo >= 0
    assert lo * lo <= xl and hi * hi >= xh


@given(_intervals(), _intervals(), st.floats(min_value=0, max_value=1e3))
@settings(max_examples=200, deadline=None)
def test_widening_monotone(x, y, pad):
    """Widening an operand never shrinks the result."""
    wide = Interval(float(x.lo) - pad, float(x.hi) + pad)
    for op in (lambda u, v: u + v, lambda u, v: u * v):
        narrow_result = op(x, y)
        wide_result = op(wide, y)
        assert float(wide_result.lo) <= float(narrow_result.lo)
        assert float(wide_result.hi) >= float(narrow_result.hi)


def test_sum_enclosure():
    rng = np.random.default_rng(7)
    v = rng.standard_normal(1000)
    s = Interval(v, v).sum()
    truth = sum(Fraction(t) for t in v.tolist())
    assert contains_fraction(s, truth)


def test_mixed_scalar_operands():
    c = 2.0 * Interval(1.0, 3.0) + 1
    assert float(c.lo) == 3.0 and float(c.hi) == 7.0
    c = 1.0 / Interval(2.0, 4.0)
    assert contains_fraction(c, Fraction(1, 3))


def test_extreme_magnitude_soundness():
    big = Interval(1e300)
    c = big * big
    assert float(c.hi) == float("inf")
    tiny = Interval(1e-320)
    c = tiny * tiny
    lo, hi = exact(c)
    assert lo <= Fraction(1e-320) ** 2 <= hi


def test_getitem_and_reshape():
    x = Interval(np.arange(6.0), np.arange(6.0) + 1.0)
    y = x.reshape(2, 3)[1, 2]
    assert float(y.lo) == 5.0 and float(y.hi) == 6.0


def test_as_interval_passthrough():
    x = Interval(1.0)
    assert as_interval(x) is x


def test_from_fraction_tight():
    q = Fraction(1, 3)
    x = from_fraction(q)
    assert contains_fraction(x, q)
    assert float(x.width) <= math.ulp(1 / 3) * 1.5

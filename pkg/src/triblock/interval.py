"""Interval arithmetic with outward rounding, vectorized over numpy arrays.

An :class:`Interval` holds two float64 arrays ``lo <= hi`` of identical
shape (0-d for scalars) and guarantees containment soundness: every
arithmetic result encloses the exact real result for all members of the
operand intervals.  Directed rounding comes from the error-free
transformations in :mod:`triblock._rounding`; no FPU mode is changed, so
instances are safe to share across threads.
"""

from __future__ import annotations

import math

import numpy as np

from . import _rounding as rnd


class IntervalError(ValueError):
    """Domain error: division by an interval containing zero, sqrt of a
    partially negative interval, or invalid endpoints."""


def _as_endpoint_arrays(lo, hi):
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    return lo, hi


class Interval:
    """Closed interval(s) [lo, hi] with outward-rounded arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo, hi = _as_endpoint_arrays(lo, hi)
        if lo.shape != hi.shape:
            lo, hi = np.broadcast_arrays(lo, hi)
            lo, hi = lo.copy(), hi.copy()
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise IntervalError("interval endpoints must not be NaN")
        if np.any(lo > hi):
            raise IntervalError("interval lower endpoint exceeds upper endpoint")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, lo, hi):
        """Internal constructor that skips validation (endpoints already sound)."""
        self = object.__new__(cls)
        self.lo = lo
        self.hi = hi
        return self

    # -- basic queries ------------------------------------------------

    @property
    def shape(self):
        return self.lo.shape

    @property
    def size(self):
        return self.lo.size

    @property
    def ndim(self):
        return self.lo.ndim

    def __len__(self):
        return len(self.lo)

    @property
    def mid(self):
        m = self.lo + 0.5 * (self.hi - self.lo)
        return np.where(np.isfinite(m), m, 0.5 * (self.lo + self.hi))

    @property
    def rad(self):
        """Upper bound on the distance from mid to either endpoint."""
        m = self.mid
        return np.maximum(rnd.next_up(m - self.lo), rnd.next_up(self.hi - m))

    @property
    def mag(self):
        """Entrywise max |x| over the interval."""
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    @property
    def width(self):
        return rnd.next_up(self.hi - self.lo)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(self.lo <= x) and np.all(x <= self.hi))

    def is_exact_zero(self) -> bool:
        return bool(np.all(self.lo == 0.0) and np.all(self.hi == 0.0))

    def __repr__(self):
        if self.lo.ndim == 0:
            return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"
        return f"Interval(shape={self.shape})"

    # -- shape manipulation -------------------------------------------

    def __getitem__(self, idx):
        return Interval._raw(self.lo[idx], self.hi[idx])

    def reshape(self, *shape):
        return Interval._raw(self.lo.reshape(*shape), self.hi.reshape(*shape))

    def ravel(self):
        return Interval._raw(self.lo.ravel(), self.hi.ravel())

    def copy(self):
        return Interval._raw(self.lo.copy(), self.hi.copy())

    def broadcast_to(self, shape):
        return Interval._raw(
            np.broadcast_to(self.lo, shape), np.broadcast_to(self.hi, shape)
        )

    # -- arithmetic ----------------------------------------------------

    def __neg__(self):
        return Interval._raw(-self.hi, -self.lo)

    def __add__(self, other):
        other = as_interval(other)
        lo, _ = rnd.add_rounded(self.lo, other.lo)
        _, hi = rnd.add_rounded(self.hi, other.hi)
        return Interval._raw(lo, hi)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-as_interval(other))

    def __rsub__(self, other):
        return (-self) + as_interval(other)

    def __mul__(self, other):
        other = as_interval(other)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lo1, hi1 = rnd.mul_rounded(a, c)
        lo2, hi2 = rnd.mul_rounded(a, d)
        lo3, hi3 = rnd.mul_rounded(b, c)
        lo4, hi4 = rnd.mul_rounded(b, d)
        lo = np.minimum(np.minimum(lo1, lo2), np.minimum(lo3, lo4))
        hi = np.maximum(np.maximum(hi1, hi2), np.maximum(hi3, hi4))
        return Interval._raw(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_interval(other)
        if np.any((other.lo <= 0.0) & (other.hi >= 0.0)):
            raise IntervalError("division by an interval containing zero")
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lo1, hi1 = rnd.div_rounded(a, c)
        lo2, hi2 = rnd.div_rounded(a, d)
        lo3, hi3 = rnd.div_rounded(b, c)
        lo4, hi4 = rnd.div_rounded(b, d)
        lo = np.minimum(np.minimum(lo1, lo2), np.minimum(lo3, lo4))
        hi = np.maximum(np.maximum(hi1, hi2), np.maximum(hi3, hi4))
        return Interval._raw(lo, hi)

    def __rtruediv__(self, other):
        return as_interval(other) / self

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool):
            raise TypeError("interval powers require an integer exponent")
        if n < 0:
            return as_interval(1.0) / self.__pow__(-n)
        if n == 0:
            return Interval._raw(
                np.ones_like(self.lo), np.ones_like(self.hi)
            )
        result = None
        base = self
        m = n
        while m:
            if m & 1:
                result = base if result is None else result * base
            m >>= 1
            if m:
                base = square(base)
        return result

    def sum(self, axis=None):
        """Enclosure of the exact (real) sum of the enclosed values."""
        lo, _ = rnd.sum_rounded(self.lo, axis=axis)
        _, hi = rnd.sum_rounded(self.hi, axis=axis)
        return Interval._raw(np.asarray(lo), np.asarray(hi))

    def hull(self, other):
        other = as_interval(other)
        return Interval._raw(
            np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi)
        )

    def max(self):
        """Enclosure of max over all entries."""
        return Interval._raw(np.max(self.lo), np.max(self.hi))


def as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval(x)


def square(x: Interval) -> Interval:
    """Tight enclosure of x^2 (never negative)."""
    x = as_interval(x)
    lo1, hi1 = rnd.mul_rounded(x.lo, x.lo)
    lo2, hi2 = rnd.mul_rounded(x.hi, x.hi)
    hi = np.maximum(hi1, hi2)
    straddles = (x.lo <= 0.0) & (x.hi >= 0.0)
    lo = np.where(straddles, 0.0, np.minimum(lo1, lo2))
    return Interval._raw(lo, hi)


def sqrt(x: Interval) -> Interval:
    x = as_interval(x)
    if np.any(x.lo < 0.0):
        raise IntervalError("sqrt of interval with negative lower endpoint")
    lo, _ = rnd.sqrt_rounded(x.lo)
    _, hi = rnd.sqrt_rounded(x.hi)
    return Interval._raw(lo, hi)


def zeros(shape=()) -> Interval:
    z = np.zeros(shape, dtype=np.float64)
    return Interval._raw(z, z.copy())


def stack(parts) -> Interval:
    """Concatenate 1-d intervals."""
    parts = [as_interval(p) for p in parts]
    return Interval._raw(
        np.concatenate([np.atleast_1d(p.lo) for p in parts]),
        np.concatenate([np.atleast_1d(p.hi) for p in parts]),
    )


def from_fraction(q) -> Interval:
    """Tightest interval containing an exact rational value."""
    from fractions import Fraction

    q = Fraction(q)
    f = float(q)
    if not math.isfinite(f):
        raise IntervalError("rational value overflows binary64")
    fq = Fraction(f)
    lo = f if fq <= q else float(rnd.next_down(f))
    hi = f if fq >= q else float(rnd.next_up(f))
    return Interval._raw(np.float64(lo), np.float64(hi))


# Verified enclosure of pi: float(math.pi) rounds pi down, so the next
# float up is a strict upper bound (checked against mpmath in the tests).
PI = Interval._raw(np.float64(math.pi), np.float64(rnd.next_up(math.pi)))
PI2 = square(PI)
PI4 = square(PI2)
SQRT2 = sqrt(Interval(2.0))

"""Directed-rounding primitives on top of round-to-nearest binary64.

The FPU rounding mode is never touched.  Instead, error-free
transformations (TwoSum, Dekker's TwoProd) recover the sign of the
rounding error of each round-to-nearest operation, and the result is
nudged one ulp outward only when the true result actually lies beyond
it.  Sums and products of exactly representable values therefore stay
exact, while every returned bound is a true directed-rounded bound.

All functions are numpy ufunc-style: they accept scalars or arrays and
broadcast.  Operands in extreme binades (|x| outside roughly
[2^-968, 2^996]) fall back to a blind one-ulp widening, which is always
sound.
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant
_SAFE_LO = 2.0 ** -968   # products smaller than this: widen blindly
_SAFE_HI = 2.0 ** 996    # operands larger than this: widen blindly
_INF = np.inf
_MAX = np.finfo(np.float64).max

# gamma_n = n*u/(1 - n*u) with u = 2^-53 bounds the relative error of any
# n-term floating dot product / sum, independent of evaluation order.
_UNIT = 2.0 ** -53


def next_down(x):
    return np.nextafter(x, -_INF)


def next_up(x):
    return np.nextafter(x, _INF)


def _two_sum(a, b):
    """Return (s, e) with s = fl(a+b) and s + e = a + b exactly."""
    s = a + b
    t = s - a
    e = (a - (s - t)) + (b - t)
    return s, e


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    """Return (p, e) with p = fl(a*b) and p + e = a*b exactly.

    Exact only when no overflow/underflow occurs in the intermediates;
    callers must mask out extreme binades.
    """
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _saturate(lo, hi):
    """Replace non-finite nearest-results by valid directed endpoints.

    fl(x) = +inf under round-to-nearest implies x > MAX, so MAX is a
    valid lower endpoint and +inf a valid upper one (mirrored for -inf).
    """
    lo = np.where(np.isnan(lo), -_INF, lo)
    hi = np.where(np.isnan(hi), _INF, hi)
    lo = np.where(lo == _INF, _MAX, lo)
    hi = np.where(hi == -_INF, -_MAX, hi)
    return lo, hi


def add_rounded(a, b):
    """Directed-rounded sum: (down(a+b), up(a+b)), exact endpoints."""
    with np.errstate(all="ignore"):
        return _add_rounded_impl(a, b)


def _add_rounded_impl(a, b):
    s, e = _two_sum(a, b)
    ok = np.isfinite(s) & np.isfinite(e)
    lo = np.where(e < 0, next_down(s), s)
    hi = np.where(e > 0, next_up(s), s)
    lo = np.where(ok, lo, next_down(s))
    hi = np.where(ok, hi, next_up(s))
    return _saturate(lo, hi)


def mul_rounded(a, b):
    """Directed-rounded product: (down(a*b), up(a*b))."""
    with np.errstate(all="ignore"):
        return _mul_rounded_impl(a, b)


def _mul_rounded_impl(a, b):
    p, e = _two_prod(a, b)
    ap, bp = np.abs(a), np.abs(b)
    ok = (
        np.isfinite(p)
        & (np.abs(p) > _SAFE_LO)
        & (ap < _SAFE_HI)
        & (bp < _SAFE_HI)
    )
    exact_zero = (a == 0.0) | (b == 0.0)
    lo = np.where(e < 0, next_down(p), p)
    hi = np.where(e > 0, next_up(p), p)
    lo = np.where(ok, lo, next_down(p))
    hi = np.where(ok, hi, next_up(p))
    lo = np.where(exact_zero, 0.0, lo)
    hi = np.where(exact_zero, 0.0, hi)
    lo, hi = _sign_clamp(a, b, lo, hi)
    return _saturate(lo, hi)


def _sign_clamp(a, b, lo, hi):
    """The sign of a*b (or a/b) is known from the operand signs; keep the
    widened endpoints from crossing zero spuriously."""
    nonneg = ((a >= 0) & (b >= 0)) | ((a <= 0) & (b <= 0))
    nonpos = ((a >= 0) & (b <= 0)) | ((a <= 0) & (b >= 0))
    lo = np.where(nonneg, np.maximum(lo, 0.0), lo)
    hi = np.where(nonpos, np.minimum(hi, 0.0), hi)
    return lo, hi


def div_rounded(a, b):
    """Directed-rounded quotient: (down(a/b), up(a/b)). b must avoid 0."""
    with np.errstate(all="ignore"):
        return _div_rounded_impl(a, b)


def _div_rounded_impl(a, b):
    q = a / b
    p, e = _two_prod(q, b)
    d = a - p  # exact by Sterbenz whenever p is within a factor 2 of a
    ok = (
        np.isfinite(q)
        & np.isfinite(p)
        & (np.abs(p) < _SAFE_HI)
        & (np.abs(p) > _SAFE_LO)
        & (np.abs(q) < _SAFE_HI)
        & (np.abs(b) < _SAFE_HI)
    )
    # a/b - q has the sign of (a - q*b)/b = (d - e)/b; comparisons are exact.
    resid_pos = d > e
    resid_neg = d < e
    pos_err = resid_pos ^ (b < 0)
    neg_err = resid_neg ^ (b < 0)
    lo = np.where(neg_err, next_down(q), q)
    hi = np.where(pos_err, next_up(q), q)
    exact_zero = (a == 0.0) & (b != 0.0)
    lo = np.where(ok, lo, next_down(q))
    hi = np.where(ok, hi, next_up(q))
    lo = np.where(exact_zero, 0.0, lo)
    hi = np.where(exact_zero, 0.0, hi)
    lo, hi = _sign_clamp(a, b, lo, hi)
    return _saturate(lo, hi)


def sqrt_rounded(x):
    """Directed-rounded square root of x >= 0."""
    with np.errstate(all="ignore"):
        return _sqrt_rounded_impl(x)


def _sqrt_rounded_impl(x):
    s = np.sqrt(x)
    p, e = _two_prod(s, s)
    ok = np.isfinite(s) & (s < _SAFE_HI) & ((p > _SAFE_LO) | (p == 0.0))
    # sign of s*s - x equals sign of (p - x) + e; p - x is exact (Sterbenz).
    d = p - x
    above = d > -e  # s*s > x
    below = d < -e  # s*s < x
    lo = np.where(above, next_down(s), s)
    hi = np.where(below, next_up(s), s)
    lo = np.where(ok, lo, next_down(s))
    hi = np.where(ok, hi, next_up(s))
    lo = np.maximum(lo, 0.0)
    return _saturate(lo, hi)


def gamma_bound(n):
    """Upper bound on gamma_n = n*u/(1-n*u), valid for n < 2^50."""
    t = n * _UNIT
    return next_up(next_up(t) / next_down(1.0 - next_up(t)))


def sum_rounded(x, axis=None):
    """Enclosure of the exact sum of the float array x along axis.

    Uses the order-independent bound |fl(sum) - sum| <= gamma_{n-1} sum|x|,
    so it is safe on top of numpy's pairwise summation.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size if axis is None else x.shape[axis]
    if n == 0:
        z = np.sum(x, axis=axis)
        return z, z
    s = np.sum(x, axis=axis)
    sa = np.sum(np.abs(x), axis=axis)
    g = gamma_bound(n)
    m = next_up(next_up(g * sa))
    lo = next_down(s - m)
    hi = next_up(s + m)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        lo, hi = _saturate(lo, hi)
    return lo, hi


def sum_upper_abs(x, axis=None):
    """Rigorous upper bound on sum(|x|) along axis (x any sign)."""
    _, hi = sum_rounded(np.abs(np.asarray(x, dtype=np.float64)), axis=axis)
    return hi


def dot_error_bound(n, prod_abs):
    """Entrywise bound on |fl(A@B) - A@B| given fl(|A|@|B|) = prod_abs.

    Valid for any summation order and with FMA contraction, assuming a
    conventional (non-Strassen) matrix product with n-term dot products.
    The tiny additive pad absorbs underflow in intermediate products.
    """
    g = gamma_bound(n + 2)
    # fl(|A|@|B|) underestimates |A|@|B| by at most a factor 1/(1-gamma).
    scale = next_up(g / next_down(1.0 - g))
    pad = n * 2.0 ** -1060
    return next_up(next_up(scale * prod_abs) + pad)

"""Verified dense linear algebra: rigorous matrix norm and inverse bounds.

Matrix products of large point matrices go through BLAS in round-to-nearest
and are then wrapped in a priori forward error bounds that hold for any
summation order (including FMA contraction).  The only assumption is a
conventional O(n^3) matrix product; Strassen-type algorithms would void the
bounds, and neither OpenBLAS nor MKL uses them for GEMM.
"""

from __future__ import annotations

import numpy as np

from . import _rounding as rnd
from .interval import Interval


class InverseBoundFailure(RuntimeError):
    """Raised when no invertibility certificate could be produced."""


def _check_finite(m: Interval):
    if not (np.all(np.isfinite(m.lo)) and np.all(np.isfinite(m.hi))):
        raise ValueError("matrix entries must be finite")


def _norm1_upper(g: np.ndarray) -> float:
    """Upper bound on the 1-norm of a nonnegative matrix g."""
    return float(np.max(rnd.sum_upper_abs(g, axis=0)))


def _norm_inf_upper(g: np.ndarray) -> float:
    return float(np.max(rnd.sum_upper_abs(g, axis=1)))


def _frobenius_upper(g: np.ndarray) -> float:
    sq = rnd.next_up(g * g)
    _, total = rnd.sum_rounded(sq)
    _, root = rnd.sqrt_rounded(np.float64(total))
    return float(root)


def _norm2_upper_nonneg(g: np.ndarray) -> float:
    """Upper bound on ||g'||_2 for any g' with |g'| <= g entrywise.

    min of sqrt(||g||_1 ||g||_inf) and ||g||_F; both dominate the 2-norm.
    """
    _, prod = rnd.mul_rounded(np.float64(_norm1_upper(g)), np.float64(_norm_inf_upper(g)))
    _, holder = rnd.sqrt_rounded(np.float64(prod))
    return min(float(holder), _frobenius_upper(g))


def norm2_upper_bound(m) -> float:
    """Rigorous upper bound on ||M'||_2 for every point matrix M' in M."""
    if isinstance(m, np.ndarray):
        m = Interval(m, m)
    _check_finite(m)
    return _norm2_upper_nonneg(m.mag)


def _matmul_abs_upper(a_abs: np.ndarray, b_abs: np.ndarray) -> np.ndarray:
    """Entrywise upper bound on a_abs @ b_abs for nonnegative factors."""
    n = a_abs.shape[1]
    p = a_abs @ b_abs
    return rnd.next_up(p + rnd.dot_error_bound(n, p))


def residual_magnitude_bound(a: Interval, r: np.ndarray) -> np.ndarray:
    """Entrywise upper bound on |I - A'R| over all point matrices A' in A."""
    n = a.lo.shape[0]
    am = a.mid
    ar = a.rad
    c = am @ r
    p = np.abs(am) @ np.abs(r)
    err = rnd.dot_error_bound(n, p)
    t = np.eye(n) - c
    # fl(I - C) is within one ulp of I - C entrywise.
    d0 = rnd.next_up(np.abs(t))
    spread = _matmul_abs_upper(ar, np.abs(r))
    return rnd.next_up(rnd.next_up(d0 + err) + spread)


def inverse_norm_upper_bound(a) -> float:
    """Certified bound K with ||A'^{-1}||_2 <= K for every A' in A.

    Computes a floating approximate inverse R of the midpoint matrix
    (plain LU with partial pivoting), verifies that the 2-norm of
    I - A R is bounded by some r < 1, and returns ||R||_2 / (1 - r), all
    in outward-rounded arithmetic (matrix-level Neumann series argument).

    Raises :class:`InverseBoundFailure` when no certificate is obtained,
    which signals a singular linearization or a too-small cutoff.
    """
    if isinstance(a, np.ndarray):
        a = Interval(a, a)
    _check_finite(a)
    if a.lo.ndim != 2 or a.lo.shape[0] != a.lo.shape[1]:
        raise ValueError("inverse bound requires a square matrix")
    try:
        r = np.linalg.inv(a.mid)
    except np.linalg.LinAlgError as exc:
        raise InverseBoundFailure(f"approximate inverse failed: {exc}") from exc
    if not np.all(np.isfinite(r)):
        raise InverseBoundFailure("approximate inverse is not finite")
    defect = _norm2_upper_nonneg(residual_magnitude_bound(a, r))
    if not defect < 1.0:
        raise InverseBoundFailure(
            f"no invertibility certificate: ||I - A R|| bound {defect:.3e} >= 1"
        )
    r_norm = _norm2_upper_nonneg(np.abs(r))
    den = rnd.next_down(1.0 - defect)
    return float(rnd.next_up(r_norm / den))

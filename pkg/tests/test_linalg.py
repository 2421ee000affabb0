"""Verified matrix norm and inverse-norm bounds against SVD oracles."""

import numpy as np
import pytest

from triblock.interval import Interval
from triblock.linalg import (
    InverseBoundFailure,
    inverse_norm_upper_bound,
    norm2_upper_bound,
    residual_magnitude_bound,
)


def test_norm2_identity():
    k = norm2_upper_bound(np.eye(5))
    assert 1.0 <= k <= 1.0 + 1e-12


def test_norm2_diagonal():
    assert norm2_upper_bound(np.diag([3.0, 4.0])) >= 4.0


def test_norm2_vs_svd_random():
    rng = np.random.default_rng(42)
    for _ in range(100):
        n = rng.integers(1, 21)
        m = rng.standard_normal((n, n)) * 10.0 ** float(rng.integers(-3, 4))
        assert norm2_upper_bound(m) >= np.linalg.norm(m, 2)


def test_norm2_interval_matrix():
    lo = np.array([[1.0, -2.0], [0.0, 1.0]])
    hi = lo + 0.5
    k = norm2_upper_bound(Interval(lo, hi))
    for _ in range(50):
        t = np.random.default_rng(1).uniform(size=lo.shape)
        assert k >= np.linalg.norm(lo + t * (hi - lo), 2)


def test_inverse_bound_diag24():
    k = inverse_norm_upper_bound(np.diag([2.0, 4.0]))
    assert 0.5 <= k <= 0.5 + 1e-10


def test_inverse_bound_identity():
    k = inverse_norm_upper_bound(np.eye(4))
    assert 1.0 <= k <= 1.0 + 1e-12


def test_inverse_bound_ill_conditioned():
    m = np.array([[1.0, 1e6], [0.0, 1.0]])
    k = inverse_norm_upper_bound(m)
    assert k >= np.linalg.norm(np.linalg.inv(m), 2)
    assert k >= 1e6


def test_inverse_bound_vs_oracle_random():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 30))
        # well-conditioned: diagonally dominant perturbation
        m = rng.standard_normal((n, n)) + np.eye(n) * (n + 2.0)
        k = inverse_norm_upper_bound(m)
        assert k >= np.linalg.norm(np.linalg.inv(m), 2)


def test_inverse_bound_failure_singular():
    m = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(InverseBoundFailure):
        inverse_norm_upper_bound(m)


def test_inverse_bound_failure_wide_interval():
    a = Interval(np.eye(3) - 2.0, np.eye(3) + 2.0)
    with pytest.raises(InverseBoundFailure):
        inverse_norm_upper_bound(a)


def test_residual_bound_contains_point_residual():
    rng = np.random.default_rng(11)
    n = 8
    m = rng.standard_normal((n, n)) + np.eye(n) * 4
    widen = 1e-12 * np.abs(m)
    a = Interval(m - widen, m + widen)
    r = np.linalg.inv(m)
    bound = residual_magnitude_bound(a, r)
    # sampled point matrices from A must have |I - A'R| within the bound
    for _ in range(20):
        t = rng.uniform(size=m.shape)
        point = a.lo + t * (a.hi - a.lo)
        resid = np.abs(np.eye(n) - point @ r)
        assert np.all(resid <= bound + 1e-17)


def test_non_square_rejected():
    with pytest.raises(ValueError):
        inverse_norm_upper_bound(np.ones((2, 3)))


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        norm2_upper_bound(np.array([[np.inf]]))

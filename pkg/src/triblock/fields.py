"""Fourier-cosine function algebra on the unit cube (0,1)^d, d = 1,2,3.

Fields are stored in the normalized basis phi_k = c_k prod_i cos(k_i pi x_i)
with c_0 = 1 and c_k = sqrt(2) for k > 0 per axis, so that {phi_k} is an
L^2-orthonormal family.  Coefficient tensors may be plain float64 arrays
(fast, non-rigorous) or :class:`~triblock.interval.Interval` arrays; every
operation dispatches on the coefficient type and, in the interval case,
returns rigorous enclosures.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _rounding as rnd
from .interval import PI, PI2, PI4, SQRT2, Interval, as_interval, sqrt, square


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class CosineField:
    """Finite cosine series; ``coeffs[k]`` multiplies phi_k."""

    coeffs: object  # np.ndarray (float64) or Interval

    def __post_init__(self):
        c = self.coeffs
        if isinstance(c, Interval):
            nd = c.ndim
        else:
            if not isinstance(c, np.ndarray) or c.dtype != np.float64:
                object.__setattr__(
                    self, "coeffs", np.asarray(c, dtype=np.float64)
                )
            nd = self.coeffs.ndim
        if not 1 <= nd <= 3:
            raise FieldError("fields live on (0,1)^d with d in {1,2,3}")

    @property
    def dim(self) -> int:
        return self.coeffs.ndim

    @property
    def degree_bound(self) -> tuple:
        return self.coeffs.shape

    @property
    def is_interval(self) -> bool:
        return isinstance(self.coeffs, Interval)

    def mean_coefficient(self):
        return self.coeffs[(0,) * self.dim]

    def is_zero_mean(self) -> bool:
        a0 = self.mean_coefficient()
        if isinstance(a0, Interval):
            return a0.is_exact_zero()
        return float(a0) == 0.0


def constant_field(value, dim: int) -> CosineField:
    shape = (1,) * dim
    if isinstance(value, Interval):
        return CosineField(Interval(np.full(shape, value.lo), np.full(shape, value.hi)))
    return CosineField(np.full(shape, float(value)))


def to_interval_field(u: CosineField) -> CosineField:
    if u.is_interval:
        return u
    return CosineField(Interval(u.coeffs))


def midpoint_field(u: CosineField) -> CosineField:
    if u.is_interval:
        return CosineField(np.asarray(u.coeffs.mid))
    return u


# -- index bookkeeping ----------------------------------------------------


def index_sqnorm_grid(shape) -> np.ndarray:
    """|k|^2 as an exact integer array over the coefficient grid."""
    out = np.zeros(shape, dtype=np.int64)
    for i, n in enumerate(shape):
        a = np.arange(n, dtype=np.int64) ** 2
        out = out + a.reshape([-1 if j == i else 1 for j in range(len(shape))])
    return out


def nonzero_count_grid(shape) -> np.ndarray:
    """Number of nonzero index components per grid entry (0..d)."""
    out = np.zeros(shape, dtype=np.int64)
    for i, n in enumerate(shape):
        a = (np.arange(n) > 0).astype(np.int64)
        out = out + a.reshape([-1 if j == i else 1 for j in range(len(shape))])
    return out


def kappa(k) -> Interval:
    """Enclosure of the Neumann Laplacian eigenvalue pi^2 |k|^2."""
    k = tuple(int(v) for v in np.atleast_1d(k))
    return PI2 * float(sum(v * v for v in k))


def kappa_grid(shape, interval: bool):
    sq = index_sqnorm_grid(shape).astype(np.float64)
    if interval:
        return PI2 * sq
    return math.pi ** 2 * sq


def modes_below(n_cut: int, dim: int) -> np.ndarray:
    """All multi-indices with |k|_inf < n_cut and k != 0, lexicographic."""
    if n_cut < 1:
        raise FieldError("cutoff must be a positive integer")
    grids = np.meshgrid(*[np.arange(n_cut)] * dim, indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=1)
    return flat[1:]  # row 0 is the zero multi-index


# -- normalization weights -------------------------------------------------

_SQRT2_POWERS_F = [math.sqrt(2.0) ** i for i in range(4)]


def _c_weights(shape, interval: bool):
    """c_k = sqrt(2)^(# nonzero components) over the grid."""
    cnt = nonzero_count_grid(shape)
    if not interval:
        return np.array(_SQRT2_POWERS_F)[cnt]
    powers = [as_interval(1.0), SQRT2, SQRT2 * SQRT2, SQRT2 * SQRT2 * SQRT2]
    lo = np.array([float(p.lo) for p in powers])[cnt]
    hi = np.array([float(p.hi) for p in powers])[cnt]
    return Interval(lo, hi)


# -- product ---------------------------------------------------------------


class _Accumulator:
    def __init__(self, shape, interval: bool):
        self.interval = interval
        self.lo = np.zeros(shape)
        self.hi = np.zeros(shape) if interval else self.lo

    def add(self, idx, term):
        if self.interval:
            lo, _ = rnd.add_rounded(self.lo[idx], term.lo)
            _, hi = rnd.add_rounded(self.hi[idx], term.hi)
            self.lo[idx] = lo
            self.hi[idx] = hi
        else:
            self.lo[idx] += term

    def value(self):
        if self.interval:
            return Interval(self.lo, self.hi)
        return self.lo


def _axis_segments(p: int, n: int):
    """Injective target/source slice pairs realizing q -> p+q and q -> |p-q|."""
    segs = [(slice(p, p + n), slice(0, n))]  # p + q
    segs.append((slice(0, p + 1), slice(p, None, -1) if p else slice(0, 1)))
    if p + 1 < n:  # q - p for q > p
        segs.append((slice(1, n - p), slice(p + 1, n)))
    return segs


def _is_zero_entry(x) -> bool:
    if isinstance(x, Interval):
        return x.is_exact_zero()
    return float(x) == 0.0


def product(u: CosineField, v: CosineField) -> CosineField:
    """Exact coefficients of the pointwise product u*v.

    Per axis, cos a cos b = (cos(a+b) + cos(a-b))/2 turns the product into
    index reflections; the c_k normalization is peeled off and restored
    around the convolution.  The result degree bound is the sum of the
    operand bounds minus one per axis.  Interval coefficients propagate.
    """
    if u.dim != v.dim:
        raise FieldError("product requires fields of equal dimension")
    interval = u.is_interval or v.is_interval
    if interval:
        u, v = to_interval_field(u), to_interval_field(v)
    uu = u.coeffs * _c_weights(u.degree_bound, interval)
    vv = v.coeffs * _c_weights(v.degree_bound, interval)
    if uu.size > vv.size:
        uu, vv = vv, uu
    d = u.dim
    out_shape = tuple(a + b - 1 for a, b in zip(uu.shape, vv.shape))
    acc = _Accumulator(out_shape, interval)
    half_d = 0.5 ** d
    seg_tables = [
        [_axis_segments(p, n) for p in range(m)]
        for m, n in zip(uu.shape, vv.shape)
    ]
    for p in np.ndindex(uu.shape):
        a = uu[p]
        if _is_zero_entry(a):
            continue
        scaled = a * half_d
        for combo in itertools.product(
            *[seg_tables[ax][p[ax]] for ax in range(d)]
        ):
            acc.add(
                tuple(c[0] for c in combo),
                scaled * vv[tuple(c[1] for c in combo)],
            )
    w = acc.value() / _c_weights(out_shape, interval)
    return CosineField(w)


# -- linear structure -------------------------------------------------------


def pad_to(u: CosineField, shape) -> CosineField:
    if tuple(u.degree_bound) == tuple(shape):
        return u
    pads = [(0, t - s) for s, t in zip(u.degree_bound, shape)]
    if any(p[1] < 0 for p in pads):
        raise FieldError("pad_to cannot shrink a field")
    if u.is_interval:
        return CosineField(
            Interval(np.pad(u.coeffs.lo, pads), np.pad(u.coeffs.hi, pads))
        )
    return CosineField(np.pad(u.coeffs, pads))


def add(u: CosineField, v: CosineField) -> CosineField:
    if u.dim != v.dim:
        raise FieldError("sum requires fields of equal dimension")
    shape = tuple(max(a, b) for a, b in zip(u.degree_bound, v.degree_bound))
    if u.is_interval or v.is_interval:
        u, v = to_interval_field(u), to_interval_field(v)
    return CosineField(pad_to(u, shape).coeffs + pad_to(v, shape).coeffs)


def scale(u: CosineField, s) -> CosineField:
    if isinstance(s, Interval) and not u.is_interval:
        u = to_interval_field(u)
    return CosineField(u.coeffs * s)


def shift_mean(u: CosineField, value) -> CosineField:
    """u + constant (adds to the k = 0 coefficient)."""
    return add(u, constant_field(value, u.dim))


def project(u: CosineField, n_cut: int) -> CosineField:
    """Galerkin projection: keep exactly the coefficients with |k|_inf < n_cut."""
    if n_cut < 1:
        raise FieldError("cutoff must be a positive integer")
    sl = tuple(slice(0, min(n_cut, s)) for s in u.degree_bound)
    if u.is_interval:
        return CosineField(
            Interval(u.coeffs.lo[sl].copy(), u.coeffs.hi[sl].copy())
        )
    return CosineField(u.coeffs[sl].copy())


def laplacian(u: CosineField) -> CosineField:
    """-Delta phi_k = kappa_k phi_k, so coefficients map to -kappa_k alpha_k."""
    kap = kappa_grid(u.degree_bound, u.is_interval)
    return CosineField(u.coeffs * (-kap))


# -- norms and bounds --------------------------------------------------------


def _interval_coeffs(u: CosineField) -> Interval:
    return u.coeffs if u.is_interval else Interval(u.coeffs)


def _nonneg(x: Interval) -> Interval:
    return Interval(np.maximum(x.lo, 0.0), np.maximum(x.hi, 0.0))


def hbar_norm(u: CosineField, ell: int) -> Interval:
    """Enclosure of the zero-mean scale norm (sum kappa^ell alpha_k^2)^(1/2).

    The k = 0 coefficient never enters; for negative order the field must
    be exactly zero-mean.
    """
    if ell < 0 and not u.is_zero_mean():
        raise FieldError("negative-order norms require a zero-mean field")
    a = _interval_coeffs(u)
    sq = index_sqnorm_grid(u.degree_bound)
    mask = sq > 0
    if not mask.any():
        return Interval(0.0)
    terms = square(a[mask])
    if ell != 0:
        kap = PI2 * sq[mask].astype(np.float64)
        terms = terms * kap ** ell
    return sqrt(_nonneg(terms.sum()))


def h_norm(u: CosineField, ell: int) -> Interval:
    """Enclosure of the full-space norm (sum (1 + kappa^ell) alpha_k^2)^(1/2)."""
    if ell < 1:
        raise FieldError("h_norm is defined for positive integer order")
    a = _interval_coeffs(u)
    sq = index_sqnorm_grid(u.degree_bound).astype(np.float64)
    weights = (PI2 * sq) ** ell + 1.0
    return sqrt(_nonneg((square(a) * weights).sum()))


def l2_norm(u: CosineField) -> Interval:
    return sqrt(_nonneg(square(_interval_coeffs(u)).sum()))


def sup_norm_upper(u: CosineField) -> Interval:
    """Rigorous upper bound on the sup norm.

    Takes the smaller of the coefficient bound sum |alpha_k| c_k (since
    |phi_k| <= c_k) and |alpha_0| + Cm_bar ||u - mean||_{H2bar} from the
    Sobolev embedding.
    """
    a = _interval_coeffs(u)
    cw = _c_weights(u.degree_bound, True)
    b1 = (Interval(a.mag) * cw).sum()
    d = u.dim
    idx0 = (0,) * d
    lo, hi = a.lo.copy(), a.hi.copy()
    mean_mag = float(max(abs(lo[idx0]), abs(hi[idx0])))
    lo[idx0] = 0.0
    hi[idx0] = 0.0
    b2 = as_interval(mean_mag) + sobolev_constants(d).cm_bar * hbar_norm(
        CosineField(Interval(lo, hi)), 2
    )
    return b2 if float(b2.hi) < float(b1.hi) else b1


def tail_norm_bound(u: CosineField, n_cut: int, ell: int, m: int) -> Interval:
    """Projection-tail estimate ||(I-P_N)u|| <= ||u||_{Hbar^m} / (pi N)^(m-ell)."""
    if ell > m:
        raise FieldError("tail bound requires ell <= m")
    base = hbar_norm(u, m)
    if m == ell:
        return base
    return base / (PI * float(n_cut)) ** (m - ell)


# -- Sobolev embedding constants (rigorous published values) ----------------


@dataclass(frozen=True)
class SobolevConstants:
    cm: float
    cm_bar: float
    cb: float
    ce: float


_CE_UPPER = float((sqrt(PI4 + 1.0) / PI2).hi)

_SOBOLEV_TABLE = {
    1: SobolevConstants(1.010947, 0.149072, 1.471443, _CE_UPPER),
    2: SobolevConstants(1.030255, 0.248740, 1.488231, _CE_UPPER),
    3: SobolevConstants(1.081202, 0.411972, 1.554916, _CE_UPPER),
}


def sobolev_constants(d: int) -> SobolevConstants:
    try:
        return _SOBOLEV_TABLE[d]
    except KeyError:
        raise FieldError(f"no embedding constants for dimension {d}") from None


# -- evaluation and serialization -------------------------------------------


def _basis_matrix(points, n: int) -> np.ndarray:
    x = np.asarray(points, dtype=np.float64)
    basis = np.cos(np.outer(x, np.arange(n)) * math.pi)
    basis[:, 1:] *= math.sqrt(2.0)
    return basis


def eval_on_grid(u: CosineField, axes_points) -> np.ndarray:
    """Float evaluation of (the midpoint of) u on a tensor grid of points."""
    c = np.asarray(u.coeffs.mid) if u.is_interval else u.coeffs
    d = u.dim
    if len(axes_points) != d:
        raise FieldError("one point array per axis required")
    mats = [_basis_matrix(axes_points[i], u.degree_bound[i]) for i in range(d)]
    if d == 1:
        return mats[0] @ c
    if d == 2:
        return np.einsum("ak,bl,kl->ab", mats[0], mats[1], c)
    return np.einsum("ak,bl,cm,klm->abc", mats[0], mats[1], mats[2], c)


def field_to_json(u: CosineField) -> dict:
    doc = {"dim": u.dim, "degreeBound": list(u.degree_bound)}
    if u.is_interval:
        doc["lo"] = u.coeffs.lo.ravel().tolist()
        doc["hi"] = u.coeffs.hi.ravel().tolist()
    else:
        doc["coeffs"] = u.coeffs.ravel().tolist()
    return doc


def field_from_json(doc: dict) -> CosineField:
    shape = tuple(int(s) for s in doc["degreeBound"])
    if int(doc["dim"]) != len(shape):
        raise FieldError("inconsistent dim/degreeBound in field document")
    if "coeffs" in doc:
        return CosineField(np.array(doc["coeffs"], dtype=np.float64).reshape(shape))
    lo = np.array(doc["lo"], dtype=np.float64).reshape(shape)
    hi = np.array(doc["hi"], dtype=np.float64).reshape(shape)
    return CosineField(Interval(lo, hi))

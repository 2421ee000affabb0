"""The triblock copolymer model: triple-well potential g, projected
nonlinearities (f1, f2) with derivatives, and homogeneous-state stability.

The nonlinearity is the projection of -grad F, F(u) = sum g(u_i) with
g(s) = 27 s^2 (1-s)^2 / 4, onto the plane u1 + u2 + u3 = 1, expressed in
the first two components with u3 = 1 - u1 - u2.  All polynomial
coefficient tables are expanded once over exact rationals and shared by
point, box (interval), and cosine-field evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from . import fields
from .fields import CosineField
from .interval import Interval, from_fraction


class ModelError(ValueError):
    pass


# -- mass vectors and parameters --------------------------------------------

_GIBBS_TOL = 1e-12


@dataclass(frozen=True)
class MassVector:
    """Total masses (mu1, mu2, mu3) in the Gibbs triangle; mu3 is derived."""

    mu1: float
    mu2: float
    mu3: float

    def __post_init__(self):
        if abs(self.mu1 + self.mu2 + self.mu3 - 1.0) > _GIBBS_TOL:
            raise ModelError("mass components must sum to one")
        if min(self.mu1, self.mu2, self.mu3) < -_GIBBS_TOL:
            raise ModelError("mass components must be nonnegative")

    @classmethod
    def of(cls, mu1: float, mu2: float, mu3: float | None = None) -> "MassVector":
        if mu3 is None:
            mu3 = 1.0 - mu1 - mu2
        return cls(float(mu1), float(mu2), float(mu3))

    def as_tuple(self):
        return (self.mu1, self.mu2, self.mu3)


@dataclass(frozen=True)
class ModelParams:
    """One problem instance: dimension, sigma, lambda = 1/eps^2, masses."""

    dim: int
    sigma: float
    lam: float
    mass: MassVector

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ModelError("solver and validation support dim 1 and 2")
        if not self.lam > 0.0:
            raise ModelError("lambda must be positive")
        if self.sigma < 0.0:
            raise ModelError("sigma must be nonnegative")

    @property
    def eps2(self) -> float:
        return 1.0 / self.lam


# -- the potential -----------------------------------------------------------


def g(s):
    """Double-well factor g(s) = 27 s^2 (1-s)^2 / 4 of the triple-well F."""
    return s * s * (1.0 - s) * (1.0 - s) * 6.75


def g_prime(s):
    return 13.5 * (s * (1.0 - s)) * (1.0 - 2.0 * s)


def g_double_prime(s):
    return 13.5 * (1.0 - 6.0 * (s * (1.0 - s)))


# -- exact bivariate polynomial tables for f and its derivatives -------------


def _poly_mul(p, q):
    out = {}
    for (a, b), ca in p.items():
        for (c, d), cb in q.items():
            key = (a + c, b + d)
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return out


def _poly_add(p, q, scale=Fraction(1)):
    out = dict(p)
    for key, c in q.items():
        out[key] = out.get(key, Fraction(0)) + scale * c
    return {k: v for k, v in out.items() if v != 0}


def _poly_compose_gprime(arg):
    """g'(arg) for a bivariate polynomial argument, exactly."""
    # g'(s) = (27/2) s - (81/2) s^2 + 27 s^3
    s1 = arg
    s2 = _poly_mul(arg, arg)
    s3 = _poly_mul(s2, arg)
    out = {}
    out = _poly_add(out, s1, Fraction(27, 2))
    out = _poly_add(out, s2, Fraction(-81, 2))
    out = _poly_add(out, s3, Fraction(27))
    return out


def _poly_diff(p, var: int):
    out = {}
    for (a, b), c in p.items():
        if var == 0 and a > 0:
            out[(a - 1, b)] = out.get((a - 1, b), Fraction(0)) + c * a
        if var == 1 and b > 0:
            out[(a, b - 1)] = out.get((a, b - 1), Fraction(0)) + c * b
    return {k: v for k, v in out.items() if v != 0}


_Z1 = {(1, 0): Fraction(1)}
_Z2 = {(0, 1): Fraction(1)}
_U3 = {(0, 0): Fraction(1), (1, 0): Fraction(-1), (0, 1): Fraction(-1)}

_GP1 = _poly_compose_gprime(_Z1)
_GP2 = _poly_compose_gprime(_Z2)
_GP3 = _poly_compose_gprime(_U3)

_THIRD = Fraction(1, 3)
_F_POLY = (
    _poly_add(_poly_add({}, _GP1, -2 * _THIRD), _poly_add(_GP2, _GP3), _THIRD),
    _poly_add(_poly_add({}, _GP2, -2 * _THIRD), _poly_add(_GP1, _GP3), _THIRD),
)
_DF_POLY = tuple(
    tuple(_poly_diff(_F_POLY[i], j) for j in range(2)) for i in range(2)
)
_D2F_POLY = tuple(
    tuple(tuple(_poly_diff(_DF_POLY[i][j], k) for k in range(2)) for j in range(2))
    for i in range(2)
)


def _table_float(poly):
    deg = max((max(a, b) for (a, b) in poly), default=0)
    rows = [
        [float(poly.get((a, b), Fraction(0))) for b in range(deg + 1)]
        for a in range(deg + 1)
    ]
    return rows


def _table_interval(poly):
    deg = max((max(a, b) for (a, b) in poly), default=0)
    rows = [
        [from_fraction(poly.get((a, b), Fraction(0))) for b in range(deg + 1)]
        for a in range(deg + 1)
    ]
    return rows


_F_TABLE_F = tuple(_table_float(p) for p in _F_POLY)
_F_TABLE_I = tuple(_table_interval(p) for p in _F_POLY)
_DF_TABLE_F = tuple(tuple(_table_float(p) for p in row) for row in _DF_POLY)
_DF_TABLE_I = tuple(tuple(_table_interval(p) for p in row) for row in _DF_POLY)
_D2F_TABLE_F = tuple(
    tuple(tuple(_table_float(p) for p in row) for row in plane)
    for plane in _D2F_POLY
)
_D2F_TABLE_I = tuple(
    tuple(tuple(_table_interval(p) for p in row) for row in plane)
    for plane in _D2F_POLY
)


def _is_interval_scalar(x) -> bool:
    return isinstance(x, Interval)


def _eval_table(table, u1, u2):
    """Horner evaluation of a coefficient table at scalars/arrays/intervals."""
    total = None
    for row in reversed(table):
        acc = None
        for c in reversed(row):
            acc = c if acc is None else acc * u2 + c
        total = acc if total is None else total * u1 + acc
    return total


def f_eval(u1, u2):
    """The projected nonlinearities (f1, f2) at scalar/array/interval points."""
    interval = _is_interval_scalar(u1) or _is_interval_scalar(u2)
    tables = _F_TABLE_I if interval else _F_TABLE_F
    return _eval_table(tables[0], u1, u2), _eval_table(tables[1], u1, u2)


def df_jacobian(u1, u2):
    """Partial derivatives d f_i / d z_j, as a 2x2 nested structure."""
    interval = _is_interval_scalar(u1) or _is_interval_scalar(u2)
    tables = _DF_TABLE_I if interval else _DF_TABLE_F
    out = [[_eval_table(tables[i][j], u1, u2) for j in range(2)] for i in range(2)]
    if interval:
        return out
    return np.array(out, dtype=np.float64)


def d2f_tensor(u1, u2):
    """Second partials d^2 f_i / d z_j d z_k, as a 2x2x2 nested structure."""
    interval = _is_interval_scalar(u1) or _is_interval_scalar(u2)
    tables = _D2F_TABLE_I if interval else _D2F_TABLE_F
    out = [
        [[_eval_table(tables[i][j][k], u1, u2) for k in range(2)] for j in range(2)]
        for i in range(2)
    ]
    if interval:
        return out
    return np.array(out, dtype=np.float64)


# -- compositions with cosine fields -----------------------------------------


def _eval_table_field(table, un1: CosineField, un2: CosineField, interval: bool):
    """Horner evaluation of a table at field arguments (exact composition)."""
    dim = un1.dim

    def lift(c):
        return fields.constant_field(c if interval else float(c), dim)

    total = None
    for row in reversed(table):
        acc = None
        for c in reversed(row):
            term = lift(c)
            acc = term if acc is None else fields.add(fields.product(acc, un2), term)
        total = acc if total is None else fields.add(fields.product(total, un1), acc)
    return total


def _shifted_components(w1: CosineField, w2: CosineField, mass: MassVector):
    u1 = fields.shift_mean(w1, mass.mu1)
    u2 = fields.shift_mean(w2, mass.mu2)
    return u1, u2


def f_field(w1: CosineField, w2: CosineField, mass: MassVector):
    """Exact cosine coefficients of f(mu + w); degree triples per axis."""
    interval = w1.is_interval or w2.is_interval
    u1, u2 = _shifted_components(w1, w2, mass)
    tables = _F_TABLE_I if interval else _F_TABLE_F
    return tuple(_eval_table_field(t, u1, u2, interval) for t in tables)


def df_field(w1: CosineField, w2: CosineField, mass: MassVector):
    """Exact cosine coefficients of Df(mu + w): 2x2 fields, degree doubles."""
    interval = w1.is_interval or w2.is_interval
    u1, u2 = _shifted_components(w1, w2, mass)
    tables = _DF_TABLE_I if interval else _DF_TABLE_F
    return [
        [_eval_table_field(tables[i][j], u1, u2, interval) for j in range(2)]
        for i in range(2)
    ]


# -- homogeneous state stability ---------------------------------------------


class StabilityTag(Enum):
    STABLE = "Stable"
    ONE_UNSTABLE = "OneUnstable"
    TWO_UNSTABLE = "TwoUnstable"


@dataclass(frozen=True)
class StabilityClass:
    tag: StabilityTag
    nu1: float
    nu2: float


def homogeneous_matrix(mass: MassVector) -> np.ndarray:
    """Linearization matrix of the projected nonlinearity at the mass vector."""
    a, b, c = (
        g_double_prime(mass.mu1),
        g_double_prime(mass.mu2),
        g_double_prime(mass.mu3),
    )
    m = np.array([[-2.0 * a, b], [a, -2.0 * b]]) / 3.0
    return m - (c / 3.0) * np.ones((2, 2))


def homogeneous_eigen(mass: MassVector):
    """Eigenvalues nu1 >= nu2 and eigenvectors of the homogeneous matrix.

    The characteristic discriminant is a sum of squares, so the spectrum
    is always real.
    """
    m = homogeneous_matrix(mass)
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = max(tr * tr - 4.0 * det, 0.0)
    root = math.sqrt(disc)
    nu1 = 0.5 * (tr + root)
    nu2 = 0.5 * (tr - root)

    def eigvec(nu):
        v1 = np.array([m[0, 1], nu - m[0, 0]])
        v2 = np.array([nu - m[1, 1], m[1, 0]])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        n = np.linalg.norm(v)
        return np.array([1.0, 0.0]) if n == 0.0 else v / n

    return (nu1, eigvec(nu1)), (nu2, eigvec(nu2))


def classify_stability(mass: MassVector) -> StabilityClass:
    (nu1, _), (nu2, _) = homogeneous_eigen(mass)
    if nu1 <= 0.0:
        tag = StabilityTag.STABLE
    elif nu2 <= 0.0:
        tag = StabilityTag.ONE_UNSTABLE
    else:
        tag = StabilityTag.TWO_UNSTABLE
    return StabilityClass(tag, nu1, nu2)


def lambda_jk(j: int, k, eps2: float, sigma: float, mass: MassVector) -> float:
    """Linearized eigenvalue kappa_k (nu_j - eps^2 kappa_k) - sigma at mu."""
    k = np.atleast_1d(np.asarray(k, dtype=np.int64))
    if not np.any(k != 0):
        raise ModelError("lambda_jk requires a nonzero mode")
    if j not in (1, 2):
        raise ModelError("j selects one of the two eigenvalues")
    kap = math.pi ** 2 * float(np.sum(k * k))
    (nu1, _), (nu2, _) = homogeneous_eigen(mass)
    nu = nu1 if j == 1 else nu2
    return kap * (nu - eps2 * kap) - sigma


def first_instability_lambda(mass: MassVector, sigma: float, k_max: int = 64):
    """Smallest lambda at which some lambda_{j,k} crosses zero (1D modes)."""
    best = math.inf
    (nu1, _), (nu2, _) = homogeneous_eigen(mass)
    for k in range(1, k_max + 1):
        kap = math.pi ** 2 * k * k
        for nu in (nu1, nu2):
            denom = kap * nu - sigma
            if denom > 0.0:
                best = min(best, kap * kap / denom)
    return best


def stability_grid(resolution: int):
    """Classify a barycentric grid over the Gibbs triangle.

    Returns a record array with fields mu1, mu2, nu1, nu2, cls (tag value);
    suitable for CSV export and raster painting.
    """
    if resolution < 2:
        raise ModelError("grid resolution must be at least 2")
    rows = []
    denom = resolution - 1
    for i in range(resolution):
        for j in range(resolution - i):
            mu1 = i / denom
            mu2 = j / denom
            sc = classify_stability(MassVector.of(mu1, mu2))
            rows.append((mu1, mu2, sc.nu1, sc.nu2, sc.tag.value))
    return np.array(
        rows,
        dtype=[
            ("mu1", "f8"),
            ("mu2", "f8"),
            ("nu1", "f8"),
            ("nu2", "f8"),
            ("cls", "U12"),
        ],
    )

"""Certified inverse-norm bounds for a family of fourth-order elliptic
operators acting on m scalars eta and n zero-mean functions v:

    scalar components:    sum_i alpha_ki eta_i + sum_j (a_kj, v_j)_{H2bar}
    function components:  -beta_k Lap^2 v_k - sum_i b_ki eta_i
                          - Lap sum_j c_kj v_j - sum_j gamma_kj v_j

The finite-dimensional projection onto modes |k|_inf < N has a scaled
matrix representation Btilde = D^-1 B D^-1 whose verified inverse norm
K_N, together with tail constants A and B of order 1/N^2, yields

    ||L^-1|| <= max(K_N, C_T) / (1 - tau),   tau >= sqrt(A^2 + B^2) < 1,

with C_T = 1/min beta.  All bound computations are interval-evaluated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _rounding as rnd
from . import fields
from .fields import CosineField, modes_below, sobolev_constants
from .interval import PI2, Interval, as_interval, sqrt, square
from .linalg import InverseBoundFailure, inverse_norm_upper_bound


class SpecError(ValueError):
    pass


# -- index sets ---------------------------------------------------------------

_PARITY_CHOICES = ("all", "even", "odd")


@dataclass(frozen=True)
class IndexSet:
    """Per-axis parity/stride descriptor of an admissible multi-index set.

    The default ("all", ...) admits every nonzero multi-index; "even"/"odd"
    restrict the respective axis, which is what symmetry-reduced subspaces
    need.  The zero multi-index is never admitted.
    """

    parity: tuple

    def __post_init__(self):
        if any(p not in _PARITY_CHOICES for p in self.parity):
            raise SpecError(f"parity entries must be one of {_PARITY_CHOICES}")

    @property
    def dim(self):
        return len(self.parity)

    def admits(self, modes: np.ndarray) -> np.ndarray:
        mask = np.any(modes != 0, axis=1)
        for ax, p in enumerate(self.parity):
            if p == "even":
                mask &= modes[:, ax] % 2 == 0
            elif p == "odd":
                mask &= modes[:, ax] % 2 == 1
        return mask


def full_index_set(dim: int) -> IndexSet:
    return IndexSet(("all",) * dim)


# -- operator specification ---------------------------------------------------


@dataclass(frozen=True)
class LinearOperatorSpec:
    """Coefficients, index sets and cutoff defining one operator instance.

    Field tables hold ``CosineField`` entries or ``None`` (zero).  Interval
    coefficient fields keep the assembly rigorous; plain float fields are
    promoted on use.
    """

    dim: int
    n_scalars: int
    n_functions: int
    cutoff: int
    beta: np.ndarray
    alpha: np.ndarray | None = None
    gamma: np.ndarray | None = None
    a_fields: tuple = ()
    b_fields: tuple = ()
    c_fields: tuple = ()
    index_sets: tuple = ()

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise SpecError("operator domain dimension must be 1, 2 or 3")
        if self.n_functions < 1:
            raise SpecError("the operator needs at least one function slot")
        if self.cutoff < 2:
            raise SpecError("cutoff must be at least 2")
        beta = np.asarray(self.beta, dtype=np.float64)
        object.__setattr__(self, "beta", beta)
        if beta.shape != (self.n_functions,) or not np.all(beta > 0.0):
            raise SpecError("beta must hold one positive constant per function")
        if self.alpha is None and self.n_scalars:
            raise SpecError("alpha matrix required when scalar slots exist")
        if self.alpha is not None:
            alpha = np.asarray(self.alpha, dtype=np.float64)
            if alpha.shape != (self.n_scalars, self.n_scalars):
                raise SpecError("alpha must be m x m")
            object.__setattr__(self, "alpha", alpha)
        gamma = (
            np.zeros((self.n_functions, self.n_functions))
            if self.gamma is None
            else np.asarray(self.gamma, dtype=np.float64)
        )
        if gamma.shape != (self.n_functions, self.n_functions):
            raise SpecError("gamma must be n x n")
        object.__setattr__(self, "gamma", gamma)
        if not self.index_sets:
            object.__setattr__(
                self,
                "index_sets",
                tuple(full_index_set(self.dim) for _ in range(self.n_functions)),
            )
        if len(self.index_sets) != self.n_functions:
            raise SpecError("one index set per function slot required")
        object.__setattr__(self, "a_fields", _as_table(self.a_fields, self.n_scalars, self.n_functions))
        object.__setattr__(self, "b_fields", _as_table(self.b_fields, self.n_functions, self.n_scalars))
        object.__setattr__(self, "c_fields", _as_table(self.c_fields, self.n_functions, self.n_functions))
        for row in self.a_fields:
            for a in row:
                if a is not None and any(
                    s > self.cutoff for s in a.degree_bound
                ):
                    raise SpecError(
                        "Riesz representatives must lie in the projected space"
                    )
        for row in self.b_fields:
            for b in row:
                if b is not None and not b.is_zero_mean():
                    raise SpecError("b fields must be zero-mean")


def _as_table(entries, rows: int, cols: int):
    if not entries:
        return tuple(tuple(None for _ in range(cols)) for _ in range(rows))
    table = tuple(tuple(row) for row in entries)
    if len(table) != rows or any(len(r) != cols for r in table):
        raise SpecError("coefficient field table has the wrong shape")
    return table


@dataclass(frozen=True)
class SpecLayout:
    """Mode lists, offsets and kappa enclosures for the matrix ordering:
    scalar slots first, then function components in lexicographic mode order."""

    modes: tuple
    offsets: tuple
    kappas: tuple
    total: int


def layout(spec: LinearOperatorSpec) -> SpecLayout:
    all_modes = modes_below(spec.cutoff, spec.dim)
    per = []
    for iset in spec.index_sets:
        sel = all_modes[iset.admits(all_modes)]
        if len(sel) == 0:
            raise SpecError("an index set admits no modes below the cutoff")
        per.append(sel)
    offsets = []
    pos = spec.n_scalars
    for sel in per:
        offsets.append(pos)
        pos += len(sel)
    kappas = tuple(
        PI2 * np.sum(sel.astype(np.float64) ** 2, axis=1) for sel in per
    )
    return SpecLayout(tuple(per), tuple(offsets), kappas, pos)


# -- exact application (oracle) ----------------------------------------------


def hbar2_inner(a: CosineField, v: CosineField):
    """H2bar inner product sum kappa_k^2 a_k v_k (interval or float)."""
    interval = a.is_interval or v.is_interval
    shape = tuple(
        max(x, y) for x, y in zip(a.degree_bound, v.degree_bound)
    )
    ap = fields.pad_to(a, shape)
    vp = fields.pad_to(v, shape)
    kap = fields.kappa_grid(shape, interval)
    term = ap.coeffs * vp.coeffs * (kap * kap)
    if interval:
        return term.sum()
    return float(np.sum(term))


def apply_operator(spec: LinearOperatorSpec, eta, v_list):
    """Exact spectral application of the operator; the assembly oracle."""
    if len(v_list) != spec.n_functions:
        raise SpecError("one field per function slot required")
    m, n = spec.n_scalars, spec.n_functions
    eta = list(eta)
    if len(eta) != m:
        raise SpecError("one scalar per scalar slot required")
    out_scalars = []
    for k in range(m):
        acc = sum(float(spec.alpha[k, i]) * eta[i] for i in range(m))
        for j in range(n):
            a = spec.a_fields[k][j]
            if a is not None:
                acc = acc + hbar2_inner(a, v_list[j])
        out_scalars.append(acc)
    out_fields = []
    for k in range(n):
        lap = fields.laplacian(v_list[k])
        acc = fields.scale(fields.laplacian(lap), -float(spec.beta[k]))
        for i in range(m):
            b = spec.b_fields[k][i]
            if b is not None:
                acc = fields.add(acc, fields.scale(b, -eta[i]))
        mix = None
        for j in range(n):
            c = spec.c_fields[k][j]
            if c is not None:
                term = fields.product(c, v_list[j])
                mix = term if mix is None else fields.add(mix, term)
            g = float(spec.gamma[k, j])
            if g != 0.0:
                acc = fields.add(acc, fields.scale(v_list[j], -g))
        if mix is not None:
            acc = fields.add(acc, fields.scale(fields.laplacian(mix), -1.0))
        out_fields.append(acc)
    return out_scalars, out_fields


# -- interval Gram blocks ------------------------------------------------------


def _reduced_interval_coeffs(c: CosineField, ext: int) -> Interval:
    """Coefficients alpha_m / c_m, zero-padded to extent ext per axis."""
    ci = fields.to_interval_field(c)
    d = c.dim
    pads = [(0, max(0, ext - s)) for s in c.degree_bound]
    lo = np.pad(ci.coeffs.lo, pads)
    hi = np.pad(ci.coeffs.hi, pads)
    red = Interval(lo, hi) / fields._c_weights(lo.shape, True)
    return red


def cosine_gram_interval(
    c: CosineField, rows: np.ndarray, cols: np.ndarray
) -> Interval:
    """Enclosure of the L2 Gram block ((c phi_l, phi_k))_{k in rows, l in cols}."""
    d = rows.shape[1]
    ext = int(max(rows.max(), cols.max())) * 2 + 1
    red = _reduced_interval_coeffs(c, ext)
    # c_k factors per mode
    sq2 = fields.SQRT2
    ck = [as_interval(1.0), sq2, square(sq2), sq2 * square(sq2)]
    nr = (rows > 0).sum(axis=1)
    nc = (cols > 0).sum(axis=1)
    ck_lo = np.array([float(p.lo) for p in ck])
    ck_hi = np.array([float(p.hi) for p in ck])
    row_c = Interval(ck_lo[nr], ck_hi[nr])
    col_c = Interval(ck_lo[nc], ck_hi[nc])
    total = None
    for combo in itertools.product((0, 1), repeat=d):
        idx = tuple(
            rows[:, None, a] + cols[None, :, a]
            if combo[a] == 0
            else np.abs(rows[:, None, a] - cols[None, :, a])
            for a in range(d)
        )
        gathered = red[idx]
        total = gathered if total is None else total + gathered
    scale = row_c.reshape(-1, 1) * col_c.reshape(1, -1) * (0.5 ** d)
    return total * scale

"""Non-rigorous spectral Galerkin machinery for finding candidate equilibria.

Works in the lambda-scaled zero-mass formulation: the residual of a
coefficient vector w is, mode by mode,

    r_k = -kappa_k^2 w_k + lambda kappa_k f_k(mu + w) - lambda sigma w_k,

projected onto |k|_inf < nsol.  Newton iteration on this system replaces
the external continuation package used to produce the original numerics;
natural-parameter continuation with adaptive step halving traces branches.
Everything here is plain float64; rigor enters only in the validation layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fields import CosineField, modes_below
from .model import MassVector, ModelParams, df_field, f_field, homogeneous_eigen

DEFAULT_NSOL = {1: 40, 2: 24}


class SolverError(RuntimeError):
    pass


class NonConvergence(SolverError):
    """Newton iteration exhausted max_iter without meeting the tolerance."""


class SingularJacobian(SolverError):
    """The Galerkin Jacobian could not be factorized (pivot failure)."""


@dataclass(frozen=True)
class CandidateEquilibrium:
    params: ModelParams
    w: tuple  # (CosineField, CosineField), zero-mean, float coefficients
    nsol: int
    residual_norm: float
    morse_index: int


@dataclass(frozen=True)
class BranchPoint:
    lam: float
    norm: float  # L2 norm of (w1, w2)
    index: int


# -- coefficient packing -----------------------------------------------------


def mode_index_tuple(modes: np.ndarray):
    return tuple(modes[:, i] for i in range(modes.shape[1]))


def kappa_vector(modes: np.ndarray) -> np.ndarray:
    return math.pi ** 2 * np.sum(modes.astype(np.float64) ** 2, axis=1)


def pack(w_pair, modes: np.ndarray) -> np.ndarray:
    return np.concatenate([_gather(w, modes) for w in w_pair])


def unpack(vec: np.ndarray, modes: np.ndarray, nsol: int, dim: int):
    idx = mode_index_tuple(modes)
    m = modes.shape[0]
    out = []
    for i in range(2):
        c = np.zeros((nsol,) * dim)
        c[idx] = vec[i * m : (i + 1) * m]
        out.append(CosineField(c))
    return tuple(out)


def _gather(fieldv: CosineField, modes: np.ndarray) -> np.ndarray:
    c = np.asarray(fieldv.coeffs)
    pads = [(0, max(0, int(modes[:, i].max()) + 1 - c.shape[i])) for i in range(c.ndim)]
    if any(p[1] for p in pads):
        c = np.pad(c, pads)
    return c[mode_index_tuple(modes)]


# -- Galerkin residual and Jacobian ------------------------------------------


def galerkin_residual(params: ModelParams, w_pair, nsol: int) -> np.ndarray:
    modes = modes_below(nsol, params.dim)
    kap = kappa_vector(modes)
    lam, sig = params.lam, params.sigma
    fs = f_field(w_pair[0], w_pair[1], params.mass)
    parts = []
    for i in range(2):
        alpha = _gather(w_pair[i], modes)
        fk = _gather(fs[i], modes)
        parts.append(-kap ** 2 * alpha + lam * kap * fk - lam * sig * alpha)
    return np.concatenate(parts)


def cosine_gram(cfield: CosineField, modes: np.ndarray) -> np.ndarray:
    """Matrix of L2 inner products (c phi_l, phi_k) over the given modes.

    Per axis cos(k)cos(l) splits into indices k+l and |k-l|, so each entry
    is a sum of 2^d gathered reduced coefficients of c.
    """
    d = modes.shape[1]
    coeffs = np.asarray(cfield.coeffs)
    ext = int(modes.max()) * 2 + 1
    pads = [(0, max(0, ext - coeffs.shape[i])) for i in range(d)]
    coeffs = np.pad(coeffs, pads)
    cvals = np.array([1.0, math.sqrt(2.0)])
    # reduced coefficients alpha_m / c_m
    red = coeffs.copy()
    for ax in range(d):
        shape = [1] * d
        shape[ax] = -1
        w = np.where(np.arange(coeffs.shape[ax]) > 0, math.sqrt(2.0), 1.0)
        red = red / w.reshape(shape)
    ck = np.prod(cvals[(modes > 0).astype(int)], axis=1)
    outer_c = np.outer(ck, ck) * 0.5 ** d
    total = np.zeros((modes.shape[0],) * 2)
    sums = [modes[:, None, a] + modes[None, :, a] for a in range(d)]
    diffs = [np.abs(modes[:, None, a] - modes[None, :, a]) for a in range(d)]
    import itertools

    for combo in itertools.product((0, 1), repeat=d):
        idx = tuple(sums[a] if combo[a] == 0 else diffs[a] for a in range(d))
        total += red[idx]
    return outer_c * total


def galerkin_jacobian(params: ModelParams, w_pair, nsol: int) -> np.ndarray:
    modes = modes_below(nsol, params.dim)
    kap = kappa_vector(modes)
    lam, sig = params.lam, params.sigma
    dfs = df_field(w_pair[0], w_pair[1], params.mass)
    m = modes.shape[0]
    jac = np.zeros((2 * m, 2 * m))
    diag = -(kap ** 2) - lam * sig
    for i in range(2):
        for j in range(2):
            block = lam * kap[:, None] * cosine_gram(dfs[i][j], modes)
            if i == j:
                block[np.diag_indices(m)] += diag
            jac[i * m : (i + 1) * m, j * m : (j + 1) * m] = block
    return jac


def morse_index(params: ModelParams, w_pair, nsol: int) -> int:
    """Count of positive eigenvalues of the Galerkin Jacobian (non-rigorous)."""
    jac = galerkin_jacobian(params, w_pair, nsol)
    eig = np.linalg.eigvals(jac)
    return int(np.sum(eig.real > 0.0))


def solution_l2_norm(w_pair) -> float:
    return math.sqrt(
        sum(float(np.sum(np.asarray(w.coeffs) ** 2)) for w in w_pair)
    )


# -- Newton and seeding -------------------------------------------------------


def newton_solve(
    params: ModelParams,
    initial,
    nsol: int | None = None,
    tol: float = 1e-11,
    max_iter: int = 40,
    compute_index: bool = True,
) -> CandidateEquilibrium:
    """Newton iteration on the projected system from an initial field pair."""
    if nsol is None:
        nsol = DEFAULT_NSOL[params.dim]
    if tol <= 0:
        raise SolverError("tolerance must be positive")
    modes = modes_below(nsol, params.dim)
    w = tuple(initial)
    x = pack(w, modes)
    w = unpack(x, modes, nsol, params.dim)
    for _ in range(max_iter + 1):
        r = galerkin_residual(params, w, nsol)
        rn = float(np.linalg.norm(r))
        if rn <= tol:
            idx = morse_index(params, w, nsol) if compute_index else -1
            return CandidateEquilibrium(params, w, nsol, rn, idx)
        jac = galerkin_jacobian(params, w, nsol)
        try:
            step = np.linalg.solve(jac, r)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from exc
        if not np.all(np.isfinite(step)):
            raise SingularJacobian("non-finite Newton step")
        x = x - step
        w = unpack(x, modes, nsol, params.dim)
    raise NonConvergence(
        f"no convergence in {max_iter} iterations (residual {rn:.3e})"
    )


def seed_from_kernel(params: ModelParams, j: int, k, amplitude: float):
    """Initial guess amplitude * p_j phi_k from the homogeneous eigenpair."""
    k = np.atleast_1d(np.asarray(k, dtype=np.int64))
    if k.size != params.dim:
        raise SolverError("seed mode must match the problem dimension")
    if not np.any(k != 0):
        raise SolverError("seed mode must be nonzero")
    pairs = homogeneous_eigen(params.mass)
    vec = pairs[0][1] if j == 1 else pairs[1][1]
    shape = tuple(int(v) + 1 for v in k)
    out = []
    for comp in range(2):
        c = np.zeros(shape)
        c[tuple(int(v) for v in k)] = amplitude * vec[comp]
        out.append(CosineField(c))
    return tuple(out)


# -- natural-parameter continuation -------------------------------------------


@dataclass
class Branch:
    points: list = field(default_factory=list)
    solutions: list = field(default_factory=list)
    termination: str = "completed"


def continue_branch(
    start: CandidateEquilibrium,
    lam_end: float,
    step: float = 1.0,
    min_step: float = 1e-6,
    max_points: int = 10000,
    tol: float = 1e-11,
    keep_solutions: bool = True,
) -> Branch:
    """Natural-parameter continuation from a converged equilibrium.

    Predictor: previous solution.  Corrector: Newton at the shifted lambda.
    Failed corrections halve the step; success restores it gradually.  The
    branch terminates at lam_end, on step underflow, or at max_points.
    """
    branch = Branch()
    current = start
    branch.points.append(
        BranchPoint(start.params.lam, solution_l2_norm(start.w), start.morse_index)
    )
    if keep_solutions:
        branch.solutions.append(start)
    direction = 1.0 if lam_end >= start.params.lam else -1.0
    h = abs(step)
    lam = start.params.lam
    while len(branch.points) < max_points:
        if math.isclose(lam, lam_end, rel_tol=0.0, abs_tol=1e-12):
            break
        lam_next = lam + direction * h
        if (lam_end - lam_next) * direction < 0.0:
            lam_next = lam_end
        if lam_next <= 0.0:
            branch.termination = "lambda reached zero"
            break
        p = current.params
        trial = ModelParams(p.dim, p.sigma, lam_next, p.mass)
        try:
            nxt = newton_solve(trial, current.w, current.nsol, tol=tol)
        except SolverError:
            h *= 0.5
            if h < min_step:
                branch.termination = "step underflow"
                break
            continue
        lam = lam_next
        current = nxt
        branch.points.append(
            BranchPoint(lam, solution_l2_norm(nxt.w), nxt.morse_index)
        )
        if keep_solutions:
            branch.solutions.append(nxt)
        h = min(h * 1.3, abs(step))
    else:
        branch.termination = "max points reached"
    return branch


def kernel_direction(params: ModelParams, w_pair, nsol: int) -> np.ndarray:
    """Approximate kernel vector of the Jacobian (smallest-|eigenvalue| mode).

    Used for branch switching at detected index changes.
    """
    jac = galerkin_jacobian(params, w_pair, nsol)
    vals, vecs = np.linalg.eig(jac)
    k = int(np.argmin(np.abs(vals.real)))
    v = vecs[:, k].real
    n = np.linalg.norm(v)
    return v / n if n else v


def switch_branch(
    current: CandidateEquilibrium, amplitude: float = 1e-2, tol: float = 1e-11
) -> CandidateEquilibrium:
    """Seed Newton with solution + small multiple of the approximate kernel."""
    modes = modes_below(current.nsol, current.params.dim)
    x = pack(current.w, modes) + amplitude * kernel_direction(
        current.params, current.w, current.nsol
    )
    w = unpack(x, modes, current.nsol, current.params.dim)
    return newton_solve(current.params, w, current.nsol, tol=tol)

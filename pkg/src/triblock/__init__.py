"""Rigorous equilibrium validation for the triblock copolymer model.

The package finds candidate equilibria of the three-monomer
Ohta-Kawasaki-type system by spectral Newton/continuation and then
proves existence and local uniqueness of true equilibria nearby:
a residual bound, Lipschitz constants, a verified inverse-norm bound
for the fourth-order linearization, and a constructive implicit
function theorem combine into a machine-checkable certificate.
"""

__version__ = "0.1.0"

from .interval import Interval, IntervalError, sqrt, square, PI, SQRT2
from .linalg import (
    InverseBoundFailure,
    inverse_norm_upper_bound,
    norm2_upper_bound,
)

__all__ = [
    "Interval",
    "IntervalError",
    "InverseBoundFailure",
    "PI",
    "SQRT2",
    "inverse_norm_upper_bound",
    "norm2_upper_bound",
    "sqrt",
    "square",
    "__version__",
]

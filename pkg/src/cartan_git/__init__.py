"""Numerical toolkit for Cartan connections built from linear Hamiltonian actions.

Covers momentum maps on projective space, the Cartan bundle of a Klein pair,
Kempf-Ness functions and stability, Futaki characters and extremal elements,
the toric K-energy on CP^1 and density geodesics on the circle.
"""

from .cartan import BundlePoint, CartanBundle, stabilizer_basis
from .errors import (AmbiguityError, CartanGitError, ConfigError, DegeneracyError, DomainError,
                     NonConvergenceError, NumericError, PreconditionError, ShapeError, StepError)
from .hamiltonian import LinearAction, ProjectivePoint, TangentVector, momentum
from .lie_core import KleinPair, gl_u_pair, sl_su_pair, torus_pair

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError", "BundlePoint", "CartanBundle", "CartanGitError", "ConfigError", "DegeneracyError",
    "DomainError", "KleinPair", "LinearAction", "NonConvergenceError", "NumericError", "PreconditionError",
    "ProjectivePoint", "ShapeError", "StepError", "TangentVector", "gl_u_pair", "momentum", "sl_su_pair",
    "stabilizer_basis", "torus_pair",
]

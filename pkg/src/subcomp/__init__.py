"""Common complements of subspace pairs: decision, construction, certification.

The package decides whether two subspaces of a finite-dimensional real
inner-product space admit a common algebraic complement, constructs one with
a verifiable certificate when they do, and exhibits the pair in several
canonical forms (exchanging symmetries, involutions, operator-graph pairs).
"""

from . import gallery, kernel, relpos, subspace, witness
from .errors import (
    InputError,
    InvalidCertificateError,
    InvalidInvolutionError,
    NoComplementError,
    NumericalFailure,
    PreconditionError,
    SubcompError,
)
from .kernel import DEFAULT_TOLERANCE, TolerancePolicy
from .subspace import Subspace

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOLERANCE",
    "InputError",
    "InvalidCertificateError",
    "InvalidInvolutionError",
    "NoComplementError",
    "NumericalFailure",
    "PreconditionError",
    "SubcompError",
    "Subspace",
    "TolerancePolicy",
    "gallery",
    "kernel",
    "relpos",
    "subspace",
    "witness",
]

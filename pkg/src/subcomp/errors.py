"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so library code should raise the most
specific class that applies.
"""


class SubcompError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SubcompError):
    """Malformed or inconsistent caller input (dimension mismatch, bad JSON, ...)."""


class PreconditionError(InputError):
    """An operation's stated precondition does not hold for the given arguments."""


class NumericalFailure(SubcompError):
    """An internal numerical guarantee was violated (non-convergence, cross-check
    disagreement, inconsistency between equivalent computations)."""


class NoComplementError(SubcompError):
    """A construction was requested for a pair that admits no common complement."""


class InvalidCertificateError(SubcompError):
    """A proposed witness (complement, involution, ...) failed verification."""

    def __init__(self, predicate: str, detail: str = ""):
        self.predicate = predicate
        message = f"certificate check failed: {predicate}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class InvalidInvolutionError(InvalidCertificateError):
    """A proposed involution failed one of its defining checks."""

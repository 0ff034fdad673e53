"""Exception types shared across the package."""


class LiftlabError(Exception):
    """Base class for all package-specific failures."""


class InputFormatError(LiftlabError):
    """Malformed or non-finite JSON input."""


class NonSquareError(LiftlabError):
    pass


class NotHermitianError(LiftlabError):
    pass


class NotPsdError(LiftlabError):
    pass


class ShapeMismatchError(LiftlabError):
    pass


class NotInvertibleError(LiftlabError):
    pass


class ConvergenceError(LiftlabError):
    """Iterative routine exceeded its sweep budget."""


class RangeNotIncludedError(LiftlabError):
    """The factorization premise R(C) <= R(B) fails.

    This is a meaningful verdict, not only an error state: refutations of the
    range-equality condition surface through it.
    """

    def __init__(self, message: str, gap: float = float("nan")):
        super().__init__(message)
        self.gap = gap


class HypothesesFailed(LiftlabError):
    """A constructor's hypothesis set does not hold; carries the failing clause."""

    def __init__(self, clause: str, message: str | None = None):
        super().__init__(message or f"hypothesis failed: {clause}")
        self.clause = clause


class DegenerateHostError(HypothesesFailed):
    """Shifted-host certificate request is degenerate (vanishing coupling block)."""


class NotQuasicontractionError(LiftlabError):
    pass


class NotQuasiIsometryError(LiftlabError):
    pass


class KernelConditionFailed(LiftlabError):
    """Q*Q N(Q*) is not contained in N(Q*)."""


class WrongKindError(LiftlabError):
    pass


class UnknownClassError(LiftlabError):
    pass


class ExhaustedError(LiftlabError):
    """Rejection-sampling budget exhausted; retry with a fresh seed."""

"""Exception hierarchy shared by all nernst_lab modules."""


class NernstLabError(Exception):
    """Base class for every error raised by the library."""


class DomainError(NernstLabError, ValueError):
    """A parameter lies outside the domain of the quantity being evaluated."""

    def __init__(self, message, coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


class InputError(NernstLabError, ValueError):
    """Malformed or inconsistent input structure."""


class BracketError(NernstLabError, ValueError):
    """A root-finding bracket has no sign change."""


class EvaluationError(NernstLabError, ArithmeticError):
    """A function evaluation returned a non-finite value."""


class InstabilityRegionError(DomainError):
    """Kerr-Newman parameters with M^2 < a^2 + Q^2 (naked singularity)."""


class StepSizeError(NernstLabError, ValueError):
    """A finite-difference stencil leaves the admissible domain."""


class NoSolutionError(NernstLabError, ValueError):
    """Inversion target unreachable, e.g. temperature above the branch maximum."""

    def __init__(self, message, t_max=None):
        super().__init__(message)
        self.t_max = t_max


class ContinuityFailure(NernstLabError):
    """Planck equivalence is undefined because a zero-temperature entropy diverges."""

    classification = "CONTINUITY_FAILURE"

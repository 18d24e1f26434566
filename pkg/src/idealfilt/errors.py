"""Exception and warning types shared across the package."""


class IdealfiltError(Exception):
    """Base class for all package-specific errors."""


class FieldError(IdealfiltError):
    """Invalid field construction or illegal scalar operation (e.g. inverting 0)."""


class DimensionMismatch(IdealfiltError):
    """An exponent vector, point, or matrix does not match the ambient dimension."""


class RingMismatch(IdealfiltError):
    """Operands belong to different rings (field or variable set differs)."""


class PrecisionMismatch(IdealfiltError):
    """Jets with different truncation degrees were combined."""


class TruncationError(IdealfiltError):
    """A computation was requested beyond the session truncation (censored)."""


class ParseError(IdealfiltError):
    """Malformed polynomial text, level, point, or instance file."""


class PreconditionError(IdealfiltError):
    """A documented operation precondition does not hold for the given inputs."""


class InvariantViolation(IdealfiltError):
    """An internal contract that should hold by theory failed on concrete data.

    This is deliberately distinct from PreconditionError: seeing it means
    either the implementation or the theory-derived expectation is wrong,
    and the offending data is worth keeping as a witness.
    """


class PurificationError(InvariantViolation):
    """The pointwise purification system was singular or inconsistent."""


class LinearAlgebraError(IdealfiltError):
    """Singular matrix inversion or an unsolvable/underdetermined linear system."""


class SliceTruncationCaveat(UserWarning):
    """A level slice may be incomplete because a generator's level exceeds T."""

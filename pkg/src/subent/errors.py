"""Structured error types.

Every error raised by the library is a subclass of :class:`SubentError`;
the class name is the structured error name printed by the CLI.
"""


class SubentError(Exception):
    """Base class for all library errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class DimensionMismatch(SubentError):
    pass


class DomainError(SubentError):
    """Scalar argument outside its admissible range."""


class NotHermitian(SubentError):
    pass


class NotUnitTrace(SubentError):
    pass


class NotPositive(SubentError):
    pass


class NotNormalized(SubentError):
    pass


class InvalidPOVM(SubentError):
    pass


class InvalidDecomposition(SubentError):
    pass


class NotIsometry(SubentError):
    pass


class RankMismatch(SubentError):
    pass


class FOutOfRange(DomainError):
    pass


class XOutOfRange(DomainError):
    pass


class FOutOfDomain(SubentError):
    """Fidelity where a closed form is evaluable but not proven optimal."""


class InvalidBlochParams(SubentError):
    pass


class NoBracket(SubentError):
    pass


class NonUniformGrid(SubentError):
    pass


class NotInDiagonalClass(SubentError):
    pass


class DimensionTooSmall(SubentError):
    pass


class NotRealizable(SubentError):
    """State vector cannot be made real by a global phase."""


class MoreThanThreeValues(SubentError):
    """Component clustering found more than three distinct values."""

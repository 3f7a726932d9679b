"""Exception types shared across the package."""


class HoroflowError(Exception):
    """Base class for all package errors."""


class PoleError(HoroflowError, ZeroDivisionError):
    """A Möbius map was evaluated at its pole."""


class DomainError(HoroflowError, ValueError):
    """An argument lies outside the domain of an operation."""


class DegenerateError(HoroflowError, ValueError):
    """A float iteration landed on a rational boundary within tolerance."""


class AmbiguityError(HoroflowError):
    """More than one inverse branch matched a point."""


class NonUnipotentError(HoroflowError):
    """The return-time matrix identity failed to produce a unipotent matrix."""


class EmptyRegion(HoroflowError, ValueError):
    """A region does not meet the section."""


class InvalidPair(HoroflowError, ValueError):
    """Two fractions do not form a Farey pair."""


class OutOfRange(HoroflowError, ValueError):
    """A parameter is outside its admissible range."""


class ZeroCount(HoroflowError):
    """A reference region received no orbit points."""


class NotAPassage(HoroflowError, ValueError):
    """A coprime pair does not index a passage."""

"""Shared exception types.

Every error condition named in a module contract maps to one of these, so
callers (and the command-line front end) can translate failures into
distinct exit codes.
"""


class PLHomError(Exception):
    """Base class for all library errors."""


class InvalidInputError(PLHomError):
    """Malformed or contract-violating input (division by zero, bad complex...)."""


class NotFiniteError(InvalidInputError):
    """Standard part requested for an infinite scalar."""


class NotInRealizationError(InvalidInputError):
    """A point lies outside the geometric realization it was asked about."""


class UnsupportedRealizationError(InvalidInputError):
    """Operation only defined for the other realization (e.g. exact distances)."""


class IncompatibleCarriersError(InvalidInputError):
    """Two covers whose carrier complexes are not subdivision-comparable."""


class PreconditionError(PLHomError):
    """A documented operation precondition does not hold for these inputs."""


class CapExceededError(PLHomError):
    """A subdivision/iteration loop hit its configured round cap."""


class ParseError(PLHomError):
    """Serialized object cannot be parsed."""


class RefError(ParseError):
    """A named cross-reference does not resolve."""

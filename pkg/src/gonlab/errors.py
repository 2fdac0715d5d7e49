"""Exception hierarchy shared by all gonlab modules."""

from __future__ import annotations


class GonlabError(Exception):
    """Base class for every error raised by gonlab."""


class InputError(GonlabError, ValueError):
    """Malformed or inconsistent user input."""


class SingularBasis(InputError):
    pass


class BadOrder(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NotInImage(InputError):
    pass


class NegativeDelta(InputError):
    pass


class OutOfRange(InputError):
    pass


class NonpositiveComponent(InputError):
    pass


class ZeroVector(InputError):
    pass


class TooFewTerms(InputError):
    pass


class BudgetExceeded(GonlabError):
    """An enumeration went over its node budget or numeric range."""


class Inconclusive(GonlabError):
    """An estimate could not be resolved at the working tolerance."""

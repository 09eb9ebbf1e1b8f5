"""Exception types raised by the library."""

from __future__ import annotations


class HdflowError(Exception):
    """Base class for all library errors."""


class NotPrime(HdflowError, ValueError):
    """The characteristic is composite, or equal to 2."""


class NotIrreducible(HdflowError, ValueError):
    """A proposed extension modulus factors over the prime field."""


class FieldTooLarge(HdflowError):
    """An exhaustive computation was requested over a field beyond the desk-scale cap."""


class BadLambda(HdflowError, ValueError):
    """The Legendre parameter is 0 or 1, where the curve degenerates."""


class DegenerateMap(HdflowError, ValueError):
    """A rational map with numerator and denominator both zero."""


class PoleAtPoint(HdflowError, ArithmeticError):
    """An affine value was requested at a pole."""


class ConstraintUnsolvable(HdflowError):
    """A constraint polynomial has no root in the sampled field."""

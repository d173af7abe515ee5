"""Exception types raised by the dissection library."""


class DissectionError(Exception):
    """Base class for all library errors."""


class NonPositiveLength(DissectionError):
    """A brick side length is zero, negative, or not finite."""


class VolumeNotUnit(DissectionError):
    """The product of the side lengths deviates from 1 beyond tolerance."""


class OutOfDomain(DissectionError):
    """A point lies outside the domain of the requested map.

    ``point`` is the 0-based index of the offending point in a batch (None
    for single-point calls), ``coordinate`` the 0-based axis index, and
    ``value`` the offending coordinate value.
    """

    def __init__(self, message, point=None, coordinate=None, value=None):
        super().__init__(message)
        self.point = point
        self.coordinate = coordinate
        self.value = value


class DimensionMismatch(DissectionError):
    """Two brick specs (or a point and a spec) disagree on dimension."""


class InvalidAspect(DissectionError):
    """The 2D rectangle aspect ratio is not valid (requires a >= 1)."""


class SingularMatrix(DissectionError):
    """Dense orthogonalization hit a numerically singular input."""


class NotFound(DissectionError):
    """Exhaustive lattice search found no translate; the radius is too small."""

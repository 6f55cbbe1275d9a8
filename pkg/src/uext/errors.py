"""Exception hierarchy shared by all uext modules."""


class UextError(Exception):
    """Base class for every domain error raised by uext."""


class SingularMatrix(UextError):
    pass


class DimensionMismatch(UextError, ValueError):
    pass


class IndexOutOfRange(UextError, IndexError):
    pass


class TensorFormatError(UextError):
    """Malformed tensor, carrier, monoid or matrix file."""


class AsymmetricTensor(UextError):
    """Raw input gives conflicting values for (i, j, k) and (j, i, k)."""


class NotCanonical(UextError):
    pass


class NoUnit(UextError):
    pass


class ComplementNotClosed(UextError):
    """Products of non-unit basis vectors have a component along the unit."""


class NotNilpotent(UextError):
    pass


class UnknownPreset(UextError, KeyError):
    pass


class NotLieAlgebra(UextError):
    pass


class NotCocycle(UextError):
    pass


class CoboundaryNotCocycle(UextError):
    """Internal consistency failure: a coboundary failed the cocycle test."""


class InvalidTable(UextError):
    pass


class CapExceeded(UextError):
    pass

"""Exception hierarchy shared by all modules."""


class KPZRoadsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KPZRoadsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BoundsError(KPZRoadsError, IndexError):
    """A lattice point or cell lies outside the region it must belong to."""


class CapacityError(KPZRoadsError, MemoryError):
    """A requested region exceeds the configured memory budget."""


class TieError(KPZRoadsError):
    """Two candidate geodesic steps have exactly equal passage values."""


class HorizonError(KPZRoadsError):
    """A finite-horizon geodesic does not reach the line it must cross."""


class ScaleError(DomainError):
    """A scale parameter is too small for the requested construction."""


class TruncationError(KPZRoadsError):
    """A simulation box or data source is too small for the requested work.

    ``offenders`` holds whatever identifies the problem (lattice starts,
    missing cell counts, ...).
    """

    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = list(offenders)


class ParseError(KPZRoadsError, ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NoPathError(KPZRoadsError):
    """The destination cannot be reached from the source."""


class SchemaError(KPZRoadsError, ValueError):
    """Tabular input lacks mandatory columns."""


class ValidationError(KPZRoadsError, ValueError):
    """A run configuration failed validation before any work started."""

"""Typed errors shared across the package."""


class GzooError(Exception):
    """Base class for all package errors."""


class ParseError(GzooError):
    """Syntax or validation error in textual input, with position info."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class EnumerationOverflow(GzooError):
    """Coset enumeration needs more than the allowed number of table slots."""


class BudgetExceeded(GzooError):
    """A configurable work budget (nodes, cliques, closure size) was hit."""


class NotTransitive(GzooError):
    """Operation requires a transitive permutation group."""


class SamePoint(GzooError):
    """Two-point stabilizer needs two distinct points."""


class TrivialClass(GzooError):
    """Stabilizer class has order 1; the grouped geometry would be degenerate."""


class Disconnected(GzooError):
    """Operation requires a connected collinearity graph."""


class NotModularQuotient(GzooError):
    """Generators do not satisfy x^2 = y^3 = 1."""


class NoCosetTable(GzooError):
    """Contextuality needs coset representatives; raw permutation input has none."""


class OddEuler(GzooError):
    """B + W + F - n came out odd; the input cannot be a valid permutation pair."""


class NonUniformGeometry(GzooError):
    """Classification requires uniform line size / point degree."""


class DegreeMismatch(GzooError):
    """Inputs act on sets of different sizes."""

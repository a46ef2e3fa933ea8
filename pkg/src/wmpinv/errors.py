"""Exception types shared by the whole package.

Everything raised on purpose derives from WmpinvError, so callers can
catch one base class.  ParseError carries a position so CLI and tests can
point at the offending character.
"""


class WmpinvError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(WmpinvError):
    """Operands have incompatible shapes or live in different fields."""


class IndexOutOfRange(WmpinvError):
    """A block/column index fell outside of the matrix."""


class DivisionByZero(WmpinvError):
    """Inversion or division by an exact (or declared) zero scalar."""


class SingularMatrix(WmpinvError):
    """Elimination met a zero (or sub-tolerance) pivot after pivoting."""


class UnsupportedField(WmpinvError):
    """The operation is not defined for the matrix's scalar field."""


class DegenerateWeight(WmpinvError):
    """A quadratic form that must be nonzero for a positive definite
    weight came out zero; the supplied weight cannot be p.d."""


class DegenerateDelta(WmpinvError):
    """The zero-branch denominator of the column recursion vanished."""


class WeightNotSPD(WmpinvError):
    """Weight validation rejected a matrix that is not symmetric
    positive definite."""


class ParseError(WmpinvError):
    """Malformed textual input.

    Attributes:
        line: 1-based line number (0 when parsing a bare expression).
        column: 1-based column of the offending character.
        expected: short description of what would have been legal here.
    """

    def __init__(self, message, line=0, column=0, expected=None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.expected = expected

    def __str__(self):
        loc = ""
        if self.line:
            loc = f" (line {self.line}, column {self.column})"
        elif self.column:
            loc = f" (column {self.column})"
        exp = f"; expected {self.expected}" if self.expected else ""
        return f"{self.args[0]}{loc}{exp}"

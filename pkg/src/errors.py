"""
Exception hierarchy for the Steinberg character calculator

Every error is a ValueError so callers that only know about bad input keep working.
"""

from typing import Optional


class CalculatorError(ValueError):
    """Base class for all calculator errors"""


class RootDatumError(CalculatorError):
    """Invalid Cartan type, rank, or lattice basis"""


class CapExceededError(CalculatorError):
    """A configured size cap (rank, BFS radius, grid rows) was exceeded"""

    def __init__(self, what: str, value: int, cap: int):
        self.what = what
        self.value = value
        self.cap = cap
        super().__init__(f"{what} {value} exceeds configured cap {cap}")


class DatumMismatchError(CalculatorError):
    """Objects built from different root data were combined"""


class ZeroPolynomialError(CalculatorError):
    """An operation undefined on the zero polynomial was requested"""


class NotDominantError(CalculatorError):
    """A dominant cocharacter was required"""


class ModuleValidationError(CalculatorError):
    """A Hecke module failed one of its defining relations"""

    def __init__(self, relation: str, detail: str = ""):
        self.relation = relation
        message = f"relation failed: {relation}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class ParseError(CalculatorError):
    """Malformed textual or JSON input"""

    def __init__(self, field: str, message: str, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = f"{field}" if line is None else f"{field} (line {line})"
        super().__init__(f"cannot parse {where}: {message}")

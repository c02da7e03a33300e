"""Exception types shared across the package."""

from __future__ import annotations


class SummabilityError(Exception):
    """Base class for all library errors."""


class OutOfRange(SummabilityError, ValueError):
    """A numeric argument lies outside its admissible range."""


class InadmissibleExponents(SummabilityError, ValueError):
    """The exponent tuple violates the admissibility conditions."""


class EmptyParts(SummabilityError, ValueError):
    """A harmonic combination was requested for an empty list."""


class LengthMismatch(SummabilityError, ValueError):
    """Two paired lists have different lengths."""


class DimensionMismatch(SummabilityError, ValueError):
    """An array argument does not match the instance dimensions."""


class EmptyInstance(SummabilityError, ValueError):
    """An instance has no points, no V-columns or no W-columns."""


class ZeroDenominator(SummabilityError, ArithmeticError):
    """A family has positive left side but zero right side.

    No finite constant can dominate such a family; the offending family is
    attached as ``.family``.
    """

    def __init__(self, message: str, family=None):
        super().__init__(message)
        self.family = family


class DegenerateFamily(SummabilityError, ArithmeticError):
    """A family evaluates to 0/0 and imposes no constraint; skip it."""


class NotSumming(SummabilityError, ArithmeticError):
    """No finite summing constant exists; carries the witness family."""

    def __init__(self, message: str, family=None):
        super().__init__(message)
        self.family = family


class NotDominated(SummabilityError, ArithmeticError):
    """No finite domination constant exists; carries the witness family."""

    def __init__(self, message: str, family=None):
        super().__init__(message)
        self.family = family


class PremiseNotCertified(SummabilityError, ArithmeticError):
    """The premise constant of an inclusion check is not finite."""


class MeasureShapeMismatch(SummabilityError, ValueError):
    """Measures do not match the instance's atom sets."""


class InhomogeneousInstance(SummabilityError, ValueError):
    """Measure synthesis in product form requires a homogeneous instance."""


class IterationLimit(SummabilityError, ArithmeticError):
    """An iterative solver ran out of budget; carries the best partial result."""

    def __init__(self, message: str, best=None, residual: float = float("inf")):
        super().__init__(message)
        self.best = best
        self.residual = residual


class BracketInvalid(SummabilityError, ValueError):
    """Bisection preconditions fail: lo must be infeasible and hi feasible."""


class NumericalFailure(SummabilityError, ArithmeticError):
    """The LP solver exceeded its pivot budget."""


class UnsupportedDomainNorm(SummabilityError, ValueError):
    """The requested builder needs a polyhedral dual ball."""


class ShapeMismatch(SummabilityError, ValueError):
    """Builder spec tables have inconsistent shapes."""


class ParseError(SummabilityError, ValueError):
    """An instance file is not valid JSON."""


class ValidationError(SummabilityError, ValueError):
    """An instance file parses but violates the schema."""

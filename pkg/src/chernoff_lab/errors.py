"""Exception types raised across the package."""


class ChernoffLabError(Exception):
    """Base class for all package errors."""


class ConstructionError(ChernoffLabError, ValueError):
    """Invalid arguments when building a mixture, family or test function."""


class ResourceError(ChernoffLabError, RuntimeError):
    """An operation would exceed the configured atom-count cap."""


class EvaluationError(ChernoffLabError, ArithmeticError):
    """A function evaluation or quadrature produced non-finite values."""


class DomainError(ChernoffLabError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class ConfigurationError(ChernoffLabError, ValueError):
    """Incompatible components, e.g. a heat family paired with a translation oracle."""


class DegenerateFitError(ChernoffLabError, ValueError):
    """Fewer than three strictly positive errors are available for a rate fit."""

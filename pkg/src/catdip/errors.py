"""Exception hierarchy for catdip."""


class CatDipError(Exception):
    """Base class for all errors raised by catdip."""


class GridMismatchError(CatDipError, ValueError):
    """Operands live on different wave grids."""


class DomainError(CatDipError, ValueError):
    """A parameter lies outside the domain of an operation."""


class TruncationError(CatDipError, ValueError):
    """The wave grid does not support a mode function to the required accuracy."""


class SymmetryError(CatDipError, ValueError):
    """A mode function that must be even in k is not."""


class PoleError(CatDipError, ValueError):
    """A translation kernel node sits on a pole of the operator exponent."""


class DegenerateOperatorError(CatDipError, ValueError):
    """The operator functional is not Gaussian (e.g. translation by zero)."""


class DivergenceError(CatDipError, ArithmeticError):
    """A Gaussian functional integral or a zero-point subtraction is ill posed."""


class NormalizationError(CatDipError, ValueError):
    """A functional tagged as a state does not satisfy chi[0] = 1."""


class OracleError(CatDipError, RuntimeError):
    """A brute-force oracle could not reach its own accuracy target."""

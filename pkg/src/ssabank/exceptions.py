"""Exception hierarchy shared by all ssabank modules."""


class SSAError(Exception):
    """Base class for errors raised by ssabank."""


class InvalidDimensionError(SSAError, ValueError):
    """An embedding dimension, lag or array shape is out of range."""


class InvalidParameterError(SSAError, ValueError):
    """A tuning parameter (grid size, band list, frequency...) is invalid."""


class InvalidInputError(SSAError, ValueError):
    """Input data violates a structural requirement (e.g. symmetry, finiteness)."""


class ConvergenceError(SSAError, ArithmeticError):
    """An iterative numerical routine failed to converge.

    Attributes
    ----------
    iterations : int
        Number of iterations (sweeps) performed before giving up.
    """

    def __init__(self, message, iterations):
        super().__init__(message)
        self.iterations = iterations

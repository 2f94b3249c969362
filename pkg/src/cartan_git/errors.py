"""Exception hierarchy shared by all modules."""


class CartanGitError(Exception):
    pass


class ShapeError(CartanGitError, ValueError):
    pass


class DomainError(CartanGitError, ValueError):
    pass


class NumericError(CartanGitError, ArithmeticError):
    pass


class ConfigError(CartanGitError, ValueError):
    pass


class PreconditionError(CartanGitError, RuntimeError):
    """A certification gate (e.g. a-equivariance) has not been passed."""


class AmbiguityError(CartanGitError, RuntimeError):
    """Numerical rank decision without a clear spectral gap."""


class NonConvergenceError(CartanGitError, RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DegeneracyError(CartanGitError, ArithmeticError):
    pass


class StepError(CartanGitError, RuntimeError):
    pass

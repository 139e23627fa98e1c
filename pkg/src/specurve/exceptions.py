"""Exception types shared across the package."""


class DomainError(ValueError):
    """Inputs outside the mathematical domain of an operation."""


class DivergentIntegralError(DomainError):
    """The requested integral does not converge."""


class NoSolutionError(DomainError):
    """The defining equations admit no real solution for these inputs."""


class ConditioningError(RuntimeError):
    """Overlap matrix too ill-conditioned to solve; reduce the basis size."""


class RootFindingError(RuntimeError):
    """Polynomial root finder failed to reach the required residual."""


class CoverageError(DomainError):
    """Requested evaluation points fall outside the sampled range."""

    def __init__(self, message: str, points: tuple = ()):
        super().__init__(message)
        self.points = tuple(points)

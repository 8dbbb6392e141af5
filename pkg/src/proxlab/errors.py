"""Exception types shared across the package."""


class ProxlabError(Exception):
    """Base class for all proxlab errors."""


class InvalidParameterError(ProxlabError, ValueError):
    """A numeric argument is outside its documented domain."""


class DegenerateInputError(ProxlabError, ValueError):
    """The input makes the requested quantity ill-defined (e.g. zero signal)."""


class InfeasibleProblemError(ProxlabError, ValueError):
    """The constraint set of the requested program is empty."""


class SolverDivergenceError(ProxlabError, RuntimeError):
    """An iterative solver violated its descent or bracketing contract."""


class SamplingFailureError(ProxlabError, RuntimeError):
    """Rejection sampling gave up after too many attempts."""

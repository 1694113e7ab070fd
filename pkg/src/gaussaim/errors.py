"""Exception hierarchy shared by the solvers and the CLI."""


class GaussAimError(Exception):
    """Base class for every error raised by this package."""


class ContractError(GaussAimError, ValueError):
    """An argument violates a documented precondition."""


class RepresentationError(ContractError, TypeError):
    """Two polynomials with different coefficient representations were mixed."""


class PoleError(GaussAimError, ZeroDivisionError):
    """A Laurent polynomial with negative powers was evaluated at zero."""


class SolverError(GaussAimError):
    """A solver ran but could not deliver the requested level.

    ``code`` is the short token written into the ``status`` column of CLI output.
    """

    code = "SOLVER-ERROR"


class FewerRootsError(SolverError):
    code = "FEWER-ROOTS"


class NoConvergenceError(SolverError):
    code = "NO-CONVERGENCE"


class NoBoundStateError(SolverError):
    code = "NO-BOUND-STATE"


class UnboundError(SolverError):
    code = "UNBOUND"


class QuadratureError(SolverError):
    code = "QUADRATURE"

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)

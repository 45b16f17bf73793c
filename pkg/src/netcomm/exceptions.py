"""Exception hierarchy shared by every netcomm module."""


class NetcommError(Exception):
    """Base class. ``code`` is the machine-readable tag the CLI emits."""

    code = "error"


class EdgeListError(NetcommError, ValueError):
    code = "parse_error"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SelfLoop(EdgeListError):
    code = "self_loop"

    def __init__(self, line, token=None):
        self.token = token
        super().__init__(f"self-loop on node {token!r}", line=line)


class DegenerateInput(NetcommError, ValueError):
    code = "degenerate_input"


class InfeasibleAlternative(NetcommError, ValueError):
    code = "infeasible_alternative"


class InvalidParameters(NetcommError, ValueError):
    code = "invalid_parameters"


class SinkhornError(NetcommError, RuntimeError):
    code = "sinkhorn_nonconvergence"

    def __init__(self, message, residual=None, iterations=None):
        self.residual = residual
        self.iterations = iterations
        super().__init__(message)


class BudgetExceeded(NetcommError, RuntimeError):
    code = "budget_exceeded"


class NoFeasiblePair(NetcommError, ValueError):
    code = "no_feasible_pair"


class TooManyDegenerate(NetcommError, RuntimeError):
    code = "too_many_degenerate"

    def __init__(self, message, n_degenerate=None, reps=None):
        self.n_degenerate = n_degenerate
        self.reps = reps
        super().__init__(message)

"Python file containing all pyMassFlow exceptions"


class MassFlowException(Exception):
    "General pyMassFlow exception"


class InstanceError(MassFlowException):
    """Instance file or structure cannot be used.

    Args:
        message (str): Human readable description.
        position (tuple[int, int] | None): ``(line, column)`` of a syntax
            error in the source text, when known.
    """
    def __init__(self, message: str, position: tuple[int, int] | None = None):
        if position is not None:
            message = f'{message} (line {position[0]}, column {position[1]})'
        super().__init__(message)
        self.position = position


class ModelError(MassFlowException):
    "Model is malformed or does not match the instance it is used with."


class SolverError(MassFlowException):
    "Numerical breakdown inside the LP or branch-and-bound solver."


class InfeasibleError(MassFlowException):
    """No feasible plan or assignment exists.

    Args:
        message (str): Human readable description.
        stats (SolveStats | None): Statistics of the solve that proved
            infeasibility, when raised by the branch-and-bound.
    """
    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats


class IntegralityError(MassFlowException):
    "An integer or binary value is further than the tolerance from an integer."


class OracleLimitError(MassFlowException):
    "Instance too large for exhaustive enumeration."


class FormatError(MassFlowException):
    "MPS/LP text cannot be written or parsed."

"""Exception types shared across the package."""


class QGHNNError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(QGHNNError, ValueError):
    pass


class CapacityError(QGHNNError, ValueError):
    """A register or dense-matrix budget is too small for the request."""


class DegenerateInputError(QGHNNError, ValueError):
    pass


class UndefinedMetricError(QGHNNError, ValueError):
    def __init__(self, metric: str, reason: str):
        super().__init__(f"{metric} is undefined: {reason}")
        self.metric = metric


class NumericalFailureError(QGHNNError, ArithmeticError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step

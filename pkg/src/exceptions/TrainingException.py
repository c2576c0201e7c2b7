import numpy as np


class TrainingException(Exception):
    pass


class NonFiniteLossError(TrainingException):
    """Raised when the loss or its gradient stops being finite.

    Carries the parameters and the last gradient so the runner can store them.
    """

    def __init__(
        self,
        message: str,
        iteration: int,
        params: np.ndarray,
        gradient: np.ndarray | None,
    ):
        super().__init__(message)
        self.iteration = iteration
        self.params = params
        self.gradient = gradient

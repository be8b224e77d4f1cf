# lazydet/exceptions.py
from typing import Optional


class ModelCheckingError(Exception):
    """Base class for every error raised by the library."""


class InputError(ModelCheckingError, ValueError):
    """Malformed or unsupported user input."""


class HoaSyntaxError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnsupportedAutomatonError(InputError):
    pass


class LtlSyntaxError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ModelFormatError(InputError):
    def __init__(self, message: str, state: Optional[int] = None):
        super().__init__(message)
        self.state = state


class AlphabetError(InputError):
    pass


class ConvergenceError(ModelCheckingError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(f"no convergence after {iterations} iterations (residual {residual:.3e})")
        self.iterations = iterations
        self.residual = residual

"""
Custom exceptions for Phicrit.
Each exception carries the exit code the command line reports for it.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID_FILE = 2
EXIT_NUMERICAL = 3


class PhicritException(Exception):
    """Base exception for Phicrit."""
    def __init__(self, exit_code: int, detail: str):
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail


class InvalidInputError(PhicritException):
    """Raised when an argument or operand fails validation."""
    def __init__(self, detail: str):
        super().__init__(exit_code=EXIT_USAGE, detail=detail)


class UnsupportedDimensionError(InvalidInputError):
    """Raised when an operation needs an even (or large enough) dimension."""
    def __init__(self, dim: int, requirement: str = "even N >= 4"):
        self.dim = dim
        super().__init__(f"Dimension {dim} is not supported (requires {requirement})")


class UsageError(PhicritException):
    """Raised for malformed command-line arguments."""
    def __init__(self, detail: str):
        super().__init__(exit_code=EXIT_USAGE, detail=detail)


class StateFileError(PhicritException):
    """Raised when a state file cannot be read or does not hold a valid state."""
    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(exit_code=EXIT_INVALID_FILE, detail=f"Invalid state file '{path}': {reason}")


class NumericalFailureError(PhicritException):
    """Raised when a numerical routine fails or an internal cross-check does not hold."""
    def __init__(self, detail: str = "Numerical computation failed"):
        super().__init__(exit_code=EXIT_NUMERICAL, detail=detail)


class OutputFileError(InvalidInputError):
    """Raised when an output path cannot be written."""
    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"Cannot write output '{path}': {reason}")

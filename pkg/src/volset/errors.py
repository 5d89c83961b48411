"""Exception hierarchy.

Every error carries a short ``code`` string and the process exit status the
command line maps it to (2 for usage/input problems, 3 for resource limits).
"""


class VolsetError(Exception):
    code = "error"
    exit_status = 2


class InvalidInputError(VolsetError, ValueError):
    code = "invalid-input"


class SingularInputError(InvalidInputError):
    """Input is degenerate in a way that makes the quantity infinite or undefined."""

    code = "singular-input"


class GeneratorError(InvalidInputError):
    code = "generator"


class ConfigError(VolsetError):
    code = "config"

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ResourceError(VolsetError, MemoryError):
    code = "resource"
    exit_status = 3

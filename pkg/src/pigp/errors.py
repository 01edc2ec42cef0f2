class PigpError(Exception):
    """Base class for library errors."""


class UsageError(PigpError, ValueError):
    """Operands or arguments that cannot be combined (e.g. elements of different groups)."""


class PreconditionError(PigpError, ValueError):
    """An operation was called outside its documented precondition."""


class CapacityError(PigpError, RuntimeError):
    """A search or construction exceeded its configured budget."""


class CatalogError(PigpError, ValueError):
    """Malformed catalog input; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

"""Exception types shared across the package."""


class HitpolyError(Exception):
    """Base class for all package-specific errors."""


class InputError(HitpolyError):
    """Malformed or ill-posed user input (bad polynomial, bad degree, ...)."""


class ParseError(InputError):
    """Syntax error in a polynomial expression.

    ``position`` is the 0-based offset into the source text.
    """

    def __init__(self, position, message):
        self.position = position
        self.message = message
        super().__init__(f"at position {position}: {message}")


class ResourceLimitError(HitpolyError):
    """A computation was refused because its projected size exceeds a cap.

    Carries the projection so callers can report what would have been needed.
    """

    def __init__(self, message, *, projected=None, cap=None):
        self.projected = projected
        self.cap = cap
        super().__init__(message)

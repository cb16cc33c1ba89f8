"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed symbol text. ``column`` is 1-based."""

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        self.column = position + 1
        super().__init__(f"{message} at column {self.column}")


class DomainError(ArithmeticError):
    """An expression was evaluated outside its domain (sqrt of a negative, 1/0)."""

    def __init__(self, message, x=None):
        self.x = x
        if x is not None:
            message = f"{message} (at x={x!r})"
        super().__init__(message)


class PreconditionError(ValueError):
    """A mathematical hypothesis required by an operation does not hold."""

    def __init__(self, message, hypothesis=None):
        self.hypothesis = hypothesis
        if hypothesis:
            message = f"{message} [hypothesis: {hypothesis}]"
        super().__init__(message)

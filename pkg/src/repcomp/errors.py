"""Exception types shared across the package."""


class RepcompError(ValueError):
    """Invalid input data (bad matrices, violated relations, malformed files)."""


class BudgetExceeded(RuntimeError):
    """A search hit its node or enumeration budget before reaching a verdict."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required

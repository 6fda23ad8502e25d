"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed .gr/.td input. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ContractViolation(AssertionError):
    """A documented precondition of an operation was broken by the caller."""


class BudgetError(ValueError):
    """An exhaustive oracle was asked to exceed its configured size budget."""

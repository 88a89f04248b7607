class ValidationError(ValueError):
    """An input violates a documented precondition."""


class BudgetError(RuntimeError):
    """A requested run would exceed its replication budget."""

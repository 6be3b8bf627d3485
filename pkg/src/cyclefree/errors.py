class BudgetExceeded(RuntimeError):
    """An exhaustive computation was refused because it exceeds its configured budget."""

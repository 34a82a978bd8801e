"""Exception types shared across the package."""


class DomainError(ValueError):
    """Inputs violate a mathematical precondition (e.g. unequal weights)."""


class PartitionParseError(DomainError):
    """A partition string could not be parsed."""


class BudgetExceeded(RuntimeError):
    """The brute-force oracle would exceed its iteration budget."""

    def __init__(self, work, budget):
        super().__init__(f"estimated work {work} exceeds budget {budget}")
        self.work = work
        self.budget = budget


class CacheVersionError(RuntimeError):
    """A persisted coefficient cache was written by a different formula version."""

"""Exception types shared across the package."""


class ChorefairError(Exception):
    """Base class for all domain errors."""


class InvalidInstanceError(ChorefairError, ValueError):
    """A cost matrix failed validation. ``violations`` lists every problem found."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InfeasibleAllocationError(ChorefairError, ValueError):
    """Bundles do not form a partition of the item set."""


class InstanceTooLargeError(ChorefairError, ValueError):
    """Item count exceeds the configured exact-search limit."""


class BudgetExceededError(ChorefairError, ValueError):
    """An enumeration would exceed the caller's stated budget."""


class UnknownAlgorithmError(ChorefairError, ValueError):
    """An algorithm or mechanism name is not recognized."""

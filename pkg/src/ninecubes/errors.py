"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: domain and validation
problems exit 1, resource caps exit 2, numeric self-check failures exit 3.
"""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class ResourceLimitError(RuntimeError):
    """A configured size or memory cap would be exceeded."""


class NumericIntegrityError(ArithmeticError):
    """An internal cross-check between independent computations failed."""

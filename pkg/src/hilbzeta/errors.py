"""Exceptions shared across the package.

The CLI maps these onto its exit codes: BudgetError -> 2, SchemaError -> 3.
Theorem-check failures are verdicts inside reports, never exceptions.
"""


class HilbzetaError(Exception):
    """Base class for package errors."""


class BudgetError(HilbzetaError):
    """A computation was refused because its estimated cost exceeds the budget."""

    def __init__(self, message, estimate=None, budget=None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


class SchemaError(HilbzetaError):
    """An input document or expression failed validation."""


class InconsistentCountsError(HilbzetaError):
    """Counts that cannot come from any scheme (non-integral zeta expansion)."""

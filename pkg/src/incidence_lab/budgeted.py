"""Three-valued results for budget-capped combinatorial searches."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class BudgetExceeded(RuntimeError):
    """Raised when a hard work-cap guard refuses to start or continue."""


@dataclass(frozen=True)
class Budgeted:
    """Outcome of a bounded search.

    value is True/False (or an int lower bound) when meaningful, None when
    the budget ran out before a decision; exact is False whenever the
    search stopped early, so a non-exact value is only a bound, never a
    silent wrong answer.
    """

    value: Any
    exact: bool
    witness: Any = None
    explored: int = 0

    def is_true(self) -> bool:
        return self.exact and self.value is True

    def is_false(self) -> bool:
        return self.exact and self.value is False

    def is_undecided(self) -> bool:
        return not self.exact

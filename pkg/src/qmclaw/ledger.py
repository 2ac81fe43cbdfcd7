"""Query accounting with a hard budget."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass
class QueryLedger:
    """Monotone query counter that aborts once ``limit`` is reached.

    The count is capped at ``limit``; after the ledger aborts, further
    charges are ignored.
    """

    limit: int
    count: int = 0
    aborted: bool = False

    def __post_init__(self) -> None:
        if self.limit < 1:
            raise ValueError(f"limit must be positive, got {self.limit}")
        if not 0 <= self.count <= self.limit:
            raise ValueError("count must lie in [0, limit]")
        if self.count == self.limit:
            self.aborted = True

    def charge(self, amount: int = 1) -> bool:
        """Charge ``amount`` queries; return True iff the ledger is (now) aborted."""
        if amount < 1:
            raise ValueError(f"amount must be at least 1, got {amount}")
        if self.aborted:
            return True
        self.count = min(self.count + amount, self.limit)
        if self.count >= self.limit:
            self.aborted = True
        return self.aborted

    @property
    def remaining(self) -> int:
        return self.limit - self.count

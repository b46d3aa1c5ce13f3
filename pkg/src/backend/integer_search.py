import logging
from typing import List, Optional, Sequence

from src.backend.errors import BudgetExceededError, DimensionError
from src.backend.lr_polytope import EQ, ConstraintSystem

logger = logging.getLogger(__name__)


class _RowBounds:
    """Running [min, max] of one row's left-hand side over the unassigned box."""

    __slots__ = ("terms", "sense", "rhs", "low", "high")

    def __init__(self, terms, sense, rhs, lower, upper):
        self.terms = terms
        self.sense = sense
        self.rhs = rhs
        self.low = sum(c * (lower[j] if c > 0 else upper[j]) for j, c in terms)
        self.high = sum(c * (upper[j] if c > 0 else lower[j]) for j, c in terms)

    def viable(self) -> bool:
        if self.low > self.rhs:
            return False
        return self.sense != EQ or self.high >= self.rhs


def find_integer_point(
    system: ConstraintSystem,
    upper_bounds: Sequence[int],
    budget: int = 10_000_000,
    lower_bounds: Optional[Sequence[int]] = None,
) -> Optional[List[int]]:
    """
    Depth-first search for an integer point of the system inside a bounding box.

    Variables are assigned in index order; after every assignment each row touching
    the variable is checked against the range its left-hand side can still reach.

    Args:
        system (ConstraintSystem): The rows to satisfy.
        upper_bounds (Sequence[int]): Inclusive upper bound per variable.
        budget (int): Maximum number of assignments tried.
        lower_bounds (Optional[Sequence[int]]): Inclusive lower bounds, zero by default.

    Returns:
        Optional[List[int]]: An integer point, or None when the box holds none.
    """
    n = system.num_vars
    lower = list(lower_bounds) if lower_bounds is not None else [0] * n
    upper = list(upper_bounds)
    if len(upper) != n or len(lower) != n:
        raise DimensionError(f"Expected {n} bounds per side.")

    rows = []
    touching: List[List[int]] = [[] for _ in range(n)]
    for row in system.rows:
        terms = [(j, c) for j, c in enumerate(row.coefficients) if c]
        bounds = _RowBounds(terms, row.sense, row.rhs, lower, upper)
        if not bounds.viable():
            return None
        for j, c in terms:
            touching[j].append(len(rows))
        rows.append(bounds)

    point = [0] * n
    nodes = 0

    def assign(j: int, value: int, sign: int):
        for r in touching[j]:
            bounds = rows[r]
            c = dict(bounds.terms)[j]
            low_part = c * (lower[j] if c > 0 else upper[j])
            high_part = c * (upper[j] if c > 0 else lower[j])
            bounds.low += sign * (c * value - low_part)
            bounds.high += sign * (c * value - high_part)

    def search(j: int) -> bool:
        nonlocal nodes
        if j == n:
            return True
        for value in range(lower[j], upper[j] + 1):
            nodes += 1
            if nodes > budget:
                raise BudgetExceededError(
                    f"Integer point search exceeded {budget} nodes."
                )
            assign(j, value, 1)
            if all(rows[r].viable() for r in touching[j]):
                point[j] = value
                if search(j + 1):
                    return True
            assign(j, value, -1)
        return False

    found = search(0)
    logger.debug("Integer search visited %d nodes, found=%s.", nodes, found)
    return point if found else None

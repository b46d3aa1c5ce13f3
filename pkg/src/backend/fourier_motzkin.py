import logging
from fractions import Fraction
from typing import List, Optional, Set, Tuple

from src.backend.errors import BudgetExceededError
from src.backend.exact_lp import FeasibilityOracle, FeasibilityResult, Rational
from src.backend.lr_polytope import EQ, ConstraintSystem

logger = logging.getLogger(__name__)

# coefficients . x <= rhs
Row = Tuple[Tuple[Rational, ...], Rational]


def _normalize(row: Row) -> Row:
    """Scale a row by a positive factor so its first nonzero coefficient is +-1."""
    coefficients, rhs = row
    lead = next((abs(c) for c in coefficients if c), None)
    if lead is None or lead == 1:
        return row
    return tuple(c / lead for c in coefficients), rhs / lead


class FourierMotzkinOracle(FeasibilityOracle):
    """
    Feasibility by Gaussian substitution of equalities followed by Fourier-Motzkin
    elimination of the remaining variables.

    Exponential in the worst case; intended for small systems used to
    cross-check the simplex oracle.
    """

    def __init__(self, max_rows: int = 200_000):
        self.max_rows = max_rows

    def feasible(self, system: ConstraintSystem) -> FeasibilityResult:
        n = system.num_vars
        equalities: List[Row] = []
        inequalities: List[Row] = []
        for row in system.rows:
            coefficients = tuple(Fraction(c) for c in row.coefficients)
            if row.sense == EQ:
                equalities.append((coefficients, Fraction(row.rhs)))
            else:
                inequalities.append((coefficients, Fraction(row.rhs)))

        substitutions, inequalities = self._substitute_equalities(equalities, inequalities)
        if inequalities is None:
            return FeasibilityResult(feasible=False)

        free = [
            j for j in range(n) if j not in {variable for variable, _, _ in substitutions}
        ]
        stages: List[Tuple[int, List[Row]]] = []
        current = self._deduplicate(inequalities)
        if current is None:
            return FeasibilityResult(feasible=False)
        for variable in free:
            stages.append((variable, current))
            current = self._eliminate(current, variable)
            if current is None:
                return FeasibilityResult(feasible=False)

        point = self._back_substitute(n, stages, substitutions)
        return FeasibilityResult(feasible=True, point=self.verified(system, point))

    @staticmethod
    def _substitute_equalities(
        equalities: List[Row], inequalities: List[Row]
    ) -> Tuple[List[Tuple[int, Tuple[Rational, ...], Rational]], Optional[List[Row]]]:
        """
        Eliminate one variable per independent equality.

        Returns:
            The substitutions (variable, coefficients, rhs) meaning
            x_variable = rhs - coefficients . x, and the rewritten inequalities
            (None when an equality reduces to a false constant).
        """
        substitutions = []
        pending = list(equalities)
        while pending:
            coefficients, rhs = pending.pop(0)
            pivot = next((j for j, c in enumerate(coefficients) if c), None)
            if pivot is None:
                if rhs != 0:
                    return substitutions, None
                continue
            scale = coefficients[pivot]
            expression = tuple(
                Fraction(0) if j == pivot else c / scale for j, c in enumerate(coefficients)
            )
            value = rhs / scale
            substitutions.append((pivot, expression, value))

            def substitute(row: Row) -> Row:
                row_coefficients, row_rhs = row
                weight = row_coefficients[pivot]
                if not weight:
                    return row
                return (
                    tuple(
                        Fraction(0) if j == pivot else c - weight * e
                        for j, (c, e) in enumerate(zip(row_coefficients, expression))
                    ),
                    row_rhs - weight * value,
                )

            pending = [substitute(row) for row in pending]
            inequalities = [substitute(row) for row in inequalities]
        return substitutions, inequalities

    @staticmethod
    def _deduplicate(rows: List[Row]) -> Optional[List[Row]]:
        """Normalize, drop trivially true rows and detect false constant rows."""
        seen: Set[Row] = set()
        kept = []
        for row in rows:
            coefficients, rhs = _normalize(row)
            if not any(coefficients):
                if rhs < 0:
                    return None
                continue
            if (coefficients, rhs) not in seen:
                seen.add((coefficients, rhs))
                kept.append((coefficients, rhs))
        return kept

    def _eliminate(self, rows: Optional[List[Row]], variable: int) -> Optional[List[Row]]:
        if rows is None:
            return None
        upper = [row for row in rows if row[0][variable] > 0]
        lower = [row for row in rows if row[0][variable] < 0]
        combined = [row for row in rows if not row[0][variable]]
        if len(combined) + len(upper) * len(lower) > self.max_rows:
            raise BudgetExceededError(
                f"Fourier-Motzkin elimination would produce more than {self.max_rows} rows."
            )
        for up_coefficients, up_rhs in upper:
            a = up_coefficients[variable]
            for low_coefficients, low_rhs in lower:
                b = -low_coefficients[variable]
                combined.append(
                    (
                        tuple(
                            Fraction(0) if j == variable else u / a + w / b
                            for j, (u, w) in enumerate(zip(up_coefficients, low_coefficients))
                        ),
                        up_rhs / a + low_rhs / b,
                    )
                )
        logger.debug(
            "Eliminated x%d: %d upper, %d lower, %d rows left.",
            variable + 1,
            len(upper),
            len(lower),
            len(combined),
        )
        return self._deduplicate(combined)

    @staticmethod
    def _back_substitute(
        n: int,
        stages: List[Tuple[int, List[Row]]],
        substitutions: List[Tuple[int, Tuple[Rational, ...], Rational]],
    ) -> List[Rational]:
        point = [Fraction(0)] * n
        for variable, rows in reversed(stages):
            # Every other variable in these rows was eliminated later, hence already assigned.
            low, high = None, None
            for coefficients, rhs in rows:
                a = coefficients[variable]
                if not a:
                    continue
                rest = sum(
                    c * point[j] for j, c in enumerate(coefficients) if c and j != variable
                )
                bound = (rhs - rest) / a
                if a > 0:
                    high = bound if high is None else min(high, bound)
                else:
                    low = bound if low is None else max(low, bound)
            if low is not None:
                point[variable] = low
            elif high is not None:
                point[variable] = high
        for variable, expression, value in reversed(substitutions):
            point[variable] = value - sum(
                e * point[j] for j, e in enumerate(expression) if e
            )
        return point

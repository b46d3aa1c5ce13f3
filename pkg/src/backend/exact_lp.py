import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Set, Tuple

from src.backend.errors import SolverError
from src.backend.lr_polytope import EQ, ConstraintSystem, check_point

logger = logging.getLogger(__name__)

Rational = Fraction


@dataclass
class FeasibilityResult:
    """
    Outcome of a feasibility query; `point` is present iff the system is feasible.
    """

    feasible: bool
    point: Optional[List[Rational]] = None
    pivots: int = 0

    def __bool__(self) -> bool:
        return self.feasible


class FeasibilityOracle(ABC):
    """
    Abstract base class for exact feasibility oracles over integer-data linear systems.
    """

    @abstractmethod
    def feasible(self, system: ConstraintSystem) -> FeasibilityResult:
        """
        Decide whether the system admits a rational solution.

        Args:
            system (ConstraintSystem): Rows `a . x {=, <=} b` with integer data.

        Returns:
            FeasibilityResult: The verdict and, when feasible, a point satisfying every row.
        """
        pass

    @staticmethod
    def verified(system: ConstraintSystem, point: List[Rational]) -> List[Rational]:
        report = check_point(point, system)
        if not report:
            raise SolverError(
                f"Returned point violates {', '.join(report.violations)}."
            )
        return point


@dataclass
class _Tableau:
    """Dense phase-I simplex tableau with one basic column per row."""

    rows: List[List[Rational]]
    rhs: List[Rational]
    basis: List[int]
    costs: List[Rational] = field(default_factory=list)
    value: Rational = Fraction(0)

    def pivot(self, p: int, q: int):
        pivot_row = self.rows[p]
        factor = pivot_row[q]
        if factor != 1:
            self.rows[p] = pivot_row = [a / factor for a in pivot_row]
            self.rhs[p] = self.rhs[p] / factor
        for r, row in enumerate(self.rows):
            multiple = row[q]
            if r == p or not multiple:
                continue
            self.rows[r] = [a - multiple * b if b else a for a, b in zip(row, pivot_row)]
            self.rhs[r] -= multiple * self.rhs[p]
        multiple = self.costs[q]
        if multiple:
            self.costs = [
                a - multiple * b if b else a for a, b in zip(self.costs, pivot_row)
            ]
            self.value += multiple * self.rhs[p]
        self.basis[p] = q


class SimplexOracle(FeasibilityOracle):
    """
    Phase-I simplex over exact rationals with Bland's least-index rule.

    Free variables are split into two nonnegative columns unless a row of the
    form `-c x_j <= 0` already bounds them. Equalities enter phase I with their
    own artificial column. The solver is exact and terminating but does not
    reproduce a strongly polynomial bound.
    """

    def feasible(self, system: ConstraintSystem) -> FeasibilityResult:
        nonnegative, rows = self._presolve(system)
        if rows is None:
            return FeasibilityResult(feasible=False)
        if not rows:
            point = [Fraction(0)] * system.num_vars
            return FeasibilityResult(feasible=True, point=self.verified(system, point))

        columns = self._structural_columns(system.num_vars, nonnegative)
        tableau = self._initial_tableau(rows, columns)
        pivots = self._run_bland(tableau)
        logger.debug("Phase I finished after %d pivots, value %s.", pivots, tableau.value)

        if tableau.value != 0:
            return FeasibilityResult(feasible=False, pivots=pivots)

        values = [Fraction(0)] * len(tableau.costs)
        for r, column in enumerate(tableau.basis):
            values[column] = tableau.rhs[r]
        point = [Fraction(0)] * system.num_vars
        for column, (variable, sign) in enumerate(columns):
            point[variable] += sign * values[column]
        return FeasibilityResult(
            feasible=True, point=self.verified(system, point), pivots=pivots
        )

    @staticmethod
    def _presolve(
        system: ConstraintSystem,
    ) -> Tuple[Set[int], Optional[List[Tuple[List[int], str, int]]]]:
        """
        Turn sign rows into variable bounds and settle rows without coefficients.

        Returns:
            Tuple[Set[int], Optional[list]]: Nonnegative variable indices and the
            remaining rows, or None for the rows when a constant row is violated.
        """
        nonnegative: Set[int] = set()
        remaining = []
        for row in system.rows:
            support = [j for j, c in enumerate(row.coefficients) if c]
            if not support:
                holds = row.rhs == 0 if row.sense == EQ else row.rhs >= 0
                if not holds:
                    return nonnegative, None
                continue
            if (
                row.sense != EQ
                and row.rhs == 0
                and len(support) == 1
                and row.coefficients[support[0]] < 0
            ):
                nonnegative.add(support[0])
                continue
            remaining.append((list(row.coefficients), row.sense, row.rhs))
        return nonnegative, remaining

    @staticmethod
    def _structural_columns(num_vars: int, nonnegative: Set[int]) -> List[Tuple[int, int]]:
        """(variable, sign) per structural column; free variables get a +/- pair."""
        columns = []
        for j in range(num_vars):
            columns.append((j, 1))
            if j not in nonnegative:
                columns.append((j, -1))
        return columns

    @staticmethod
    def _initial_tableau(
        rows: List[Tuple[List[int], str, int]], columns: List[Tuple[int, int]]
    ) -> _Tableau:
        num_structural = len(columns)
        slack_rows = [r for r, (_, sense, _) in enumerate(rows) if sense != EQ]
        slack_column = {r: num_structural + n for n, r in enumerate(slack_rows)}

        # Rows whose slack enters with +1 against a nonnegative rhs start on that slack.
        needs_artificial = [
            r
            for r, (_, sense, rhs) in enumerate(rows)
            if sense == EQ or rhs < 0
        ]
        first_artificial = num_structural + len(slack_rows)
        artificial_column = {
            r: first_artificial + n for n, r in enumerate(needs_artificial)
        }
        width = first_artificial + len(needs_artificial)

        table, rhs, basis = [], [], []
        for r, (coefficients, sense, b) in enumerate(rows):
            line = [Fraction(0)] * width
            for column, (variable, sign) in enumerate(columns):
                if coefficients[variable]:
                    line[column] = Fraction(sign * coefficients[variable])
            if sense != EQ:
                line[slack_column[r]] = Fraction(1)
            b = Fraction(b)
            if b < 0:
                line = [-a for a in line]
                b = -b
            if r in artificial_column:
                line[artificial_column[r]] = Fraction(1)
                basis.append(artificial_column[r])
            else:
                basis.append(slack_column[r])
            table.append(line)
            rhs.append(b)

        costs = [Fraction(0)] * width
        value = Fraction(0)
        for r in needs_artificial:
            for column in range(first_artificial):
                costs[column] -= table[r][column]
            value += rhs[r]
        return _Tableau(rows=table, rhs=rhs, basis=basis, costs=costs, value=value)

    @staticmethod
    def _run_bland(tableau: _Tableau) -> int:
        pivots = 0
        while True:
            entering = next(
                (q for q, cost in enumerate(tableau.costs) if cost < 0), None
            )
            if entering is None:
                return pivots
            best = None
            for r, row in enumerate(tableau.rows):
                if row[entering] > 0:
                    key = (tableau.rhs[r] / row[entering], tableau.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                raise SolverError("Phase I objective is unbounded below.")
            tableau.pivot(best[1], entering)
            pivots += 1


def feasible(system: ConstraintSystem) -> FeasibilityResult:
    """Decide rational feasibility of a system with the exact simplex oracle."""
    return SimplexOracle().feasible(system)


def scale_to_integer(point: Sequence[Rational]) -> Tuple[int, List[int]]:
    """
    Clear denominators of a rational point.

    Args:
        point (Sequence[Rational]): Coordinates as fractions or integers.

    Returns:
        Tuple[int, List[int]]: N = lcm of the denominators and the integer vector N * point.
    """
    fractions = [Fraction(x) for x in point]
    factor = math.lcm(*(x.denominator for x in fractions)) if fractions else 1
    return factor, [int(x * factor) for x in fractions]

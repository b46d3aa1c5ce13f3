import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.backend.errors import DimensionError
from src.backend.partitions import Partition, scale
from src.backend.row_statistics import (
    BOX,
    EDGE,
    RowStatistics,
    variable_index,
    variable_name,
)

EQ = "="
LE = "<="

Point = Union[RowStatistics, Sequence[Union[int, Fraction]]]


@dataclass(frozen=True)
class ConstraintRow:
    """
    One row `coefficients . x {=, <=} rhs` tagged with the family (A)-(F) it came from.

    `i` and `k` are the row and label indices of the family; 0 marks an index
    the family does not use.
    """

    tag: str
    i: int
    k: int
    coefficients: Tuple[int, ...]
    sense: str
    rhs: int

    def evaluate(self, point: Sequence[Union[int, Fraction]]) -> Union[int, Fraction]:
        return sum(c * x for c, x in zip(self.coefficients, point) if c)

    def is_satisfied(self, point: Sequence[Union[int, Fraction]]) -> bool:
        value = self.evaluate(point)
        return value == self.rhs if self.sense == EQ else value <= self.rhs

    @property
    def label(self) -> str:
        i = str(self.i) if self.i else "*"
        k = str(self.k) if self.k else "*"
        return f"{self.tag}({i},{k})"


@dataclass
class ConstraintSystem:
    """
    A linear system `A x {=, <=} b` with integer data.

    Systems built for (lambda, mu, nu) carry l(nu) and l(mu) so their variables
    are named rB[k][i] / rE[k][i]; generic systems name them x1, x2, ...
    """

    num_vars: int
    nu_length: int = 0
    mu_length: int = 0
    rows: List[ConstraintRow] = field(default_factory=list)

    def variable_name(self, index: int) -> str:
        if self.nu_length:
            return variable_name(index, self.nu_length)
        return f"x{index + 1}"

    def add_row(
        self, tag: str, coefficients: Sequence[int], sense: str, rhs: int, i: int = 0, k: int = 0
    ):
        if len(coefficients) != self.num_vars:
            raise DimensionError(
                f"Row has {len(coefficients)} coefficients, system has {self.num_vars} variables."
            )
        self.rows.append(ConstraintRow(tag, i, k, tuple(coefficients), sense, rhs))

    def add(self, tag: str, i: int, k: int, terms: Dict[int, int], sense: str, rhs: int):
        coefficients = [0] * self.num_vars
        for index, coefficient in terms.items():
            coefficients[index] += coefficient
        self.rows.append(ConstraintRow(tag, i, k, tuple(coefficients), sense, rhs))

    def coefficient_matrix(self) -> np.ndarray:
        """Dense coefficient rows, one per constraint, in emission order."""
        return np.array(
            [row.coefficients for row in self.rows], dtype=np.int64
        ).reshape(len(self.rows), self.num_vars)

    def rhs_vector(self) -> List[int]:
        return [row.rhs for row in self.rows]


@dataclass
class PointReport:
    """Outcome of check_point; truthy iff the point satisfies every row."""

    feasible: bool
    violations: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.feasible


class _Builder:
    """Accumulates rows for one (lambda, mu, nu) using the fixed variable order."""

    def __init__(self, lam: Partition, mu: Partition, nu: Partition):
        self.lam, self.mu, self.nu = lam, mu, nu
        self.system = ConstraintSystem(
            num_vars=2 * nu.length * mu.length,
            nu_length=nu.length,
            mu_length=mu.length,
        )

    def box(self, k: int, i: int) -> Optional[int]:
        # Out-of-range r's are absent from the system.
        if 1 <= k <= self.mu.length and 1 <= i <= self.nu.length:
            return variable_index(k, i, BOX, self.nu.length)
        return None

    def edge(self, k: int, i: int) -> Optional[int]:
        if 1 <= k <= self.mu.length and 1 <= i <= self.nu.length:
            return variable_index(k, i, EDGE, self.nu.length)
        return None

    @staticmethod
    def accumulate(terms: Dict[int, int], index: Optional[int], coefficient: int):
        if index is not None:
            terms[index] = terms.get(index, 0) + coefficient

    def build(self) -> ConstraintSystem:
        lam, mu, nu = self.lam, self.mu, self.nu
        rows_nu, rows_mu = nu.length, mu.length

        # (A) Non-negativity.
        for k in range(1, rows_mu + 1):
            for i in range(1, rows_nu + 1):
                self.system.add("A", i, k, {self.box(k, i): -1}, LE, 0)
                self.system.add("A", i, k, {self.edge(k, i): -1}, LE, 0)

        # (B) Shape: lambda_i + sum_k r_k^i = nu_i, for every row of lambda or nu.
        for i in range(1, max(rows_nu, lam.length) + 1):
            terms: Dict[int, int] = {}
            for k in range(1, rows_mu + 1):
                self.accumulate(terms, self.box(k, i), 1)
            self.system.add("B", i, 0, terms, EQ, nu.part(i) - lam.part(i))

        # (C) Content.
        for k in range(1, rows_mu + 1):
            terms = {}
            for i in range(1, rows_nu + 1):
                self.accumulate(terms, self.box(k, i), 1)
                self.accumulate(terms, self.edge(k, i), 1)
            self.system.add("C", 0, k, terms, EQ, mu.part(k))

        # (D) Gap.
        for i in range(1, rows_nu + 1):
            for k in range(1, rows_mu + 1):
                terms = {}
                self.accumulate(terms, self.edge(k, i), 1)
                for smaller in range(1, k):
                    self.accumulate(terms, self.box(smaller, i), -1)
                for weakly_smaller in range(1, k + 1):
                    self.accumulate(terms, self.box(weakly_smaller, i + 1), 1)
                self.system.add("D", i, k, terms, LE, lam.part(i) - lam.part(i + 1))

        # (E) Too high.
        for k in range(1, rows_mu + 1):
            for i in range(1, min(k, rows_nu + 1)):
                self.system.add("E", i, k, {self.box(k, i): 1}, EQ, 0)
                self.system.add("E", i, k, {self.edge(k, i): 1}, EQ, 0)

        # (F) Reverse lattice word.
        for i in range(1, rows_nu + 1):
            for k in range(1, rows_mu + 1):
                terms = {}
                self.accumulate(terms, self.box(k + 1, i), 1)
                for above in range(1, i):
                    self.accumulate(terms, self.box(k + 1, above), 1)
                    self.accumulate(terms, self.edge(k + 1, above), 1)
                    self.accumulate(terms, self.box(k, above), -1)
                    self.accumulate(terms, self.edge(k, above), -1)
                self.system.add("F", i, k, terms, LE, 0)

        return self.system


def build_constraints(lam: Partition, mu: Partition, nu: Partition) -> ConstraintSystem:
    """
    Build the constraint families (A)-(F) over 2 l(nu) l(mu) row statistics.

    Args:
        lam (Partition): The inner shape lambda.
        mu (Partition): The content mu.
        nu (Partition): The outer shape nu.

    Returns:
        ConstraintSystem: Rows in emission order A, B, C, D, E, F.
    """
    return _Builder(lam, mu, nu).build()


def _as_vector(point: Point) -> List[Union[int, Fraction]]:
    if isinstance(point, RowStatistics):
        return point.to_vector()
    return list(point)


def check_point(point: Point, system: ConstraintSystem) -> PointReport:
    """
    Evaluate every row of the system exactly at a point.

    Args:
        point (Point): Row statistics or a vector of integers/fractions.
        system (ConstraintSystem): The system to check against.

    Returns:
        PointReport: Feasibility plus the labels of violated rows.
    """
    vector = _as_vector(point)
    if len(vector) != system.num_vars:
        raise DimensionError(
            f"Point has {len(vector)} coordinates, system has {system.num_vars} variables."
        )
    violations = [row.label for row in system.rows if not row.is_satisfied(vector)]
    return PointReport(feasible=not violations, violations=violations)


def dilate_check(lam: Partition, mu: Partition, nu: Partition, factor: int) -> bool:
    """
    True iff the system for (N lambda, N mu, N nu) is the system for
    (lambda, mu, nu) with every rhs multiplied by N.
    """
    base = build_constraints(lam, mu, nu)
    dilated = build_constraints(scale(lam, factor), scale(mu, factor), scale(nu, factor))
    if base.num_vars != dilated.num_vars or len(base.rows) != len(dilated.rows):
        return False
    if not np.array_equal(base.coefficient_matrix(), dilated.coefficient_matrix()):
        return False
    for row, dilated_row in zip(base.rows, dilated.rows):
        if (row.tag, row.i, row.k, row.sense) != (
            dilated_row.tag,
            dilated_row.i,
            dilated_row.k,
            dilated_row.sense,
        ):
            return False
        if dilated_row.rhs != factor * row.rhs:
            return False
    return True


def is_combinatorial(system: ConstraintSystem) -> bool:
    """Every coefficient lies in {-1, 0, 1} and every rhs is an integer."""
    matrix = system.coefficient_matrix()
    if matrix.size and not np.isin(matrix, (-1, 0, 1)).all():
        return False
    return all(isinstance(rhs, int) for rhs in system.rhs_vector())


def render_constraints_text(system: ConstraintSystem) -> str:
    """One line per row: `TAG(i,k): +var -var ... {<=,=} rhs`."""
    lines = []
    for row in system.rows:
        terms = [
            f"{'+' if c > 0 else '-'}{system.variable_name(index)}"
            if abs(c) == 1
            else f"{c:+d}*{system.variable_name(index)}"
            for index, c in enumerate(row.coefficients)
            if c
        ]
        lhs = " ".join(terms) if terms else "0"
        lines.append(f"{row.label}: {lhs} {row.sense} {row.rhs}")
    return "\n".join(lines)


def constraints_to_json(system: ConstraintSystem) -> str:
    """Dense JSON dump of the system for cross-language diffing."""
    payload = {
        "num_vars": system.num_vars,
        "variables": [
            system.variable_name(index) for index in range(system.num_vars)
        ],
        "rows": [
            {
                "tag": row.tag,
                "i": row.i,
                "k": row.k,
                "coefficients": list(row.coefficients),
                "sense": row.sense,
                "rhs": row.rhs,
            }
            for row in system.rows
        ],
    }
    return json.dumps(payload, indent=2)

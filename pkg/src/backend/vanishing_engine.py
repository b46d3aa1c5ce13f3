import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

import pandas as pd

from src.backend.config import EngineConfig
from src.backend.edge_tableaux import (
    EdgeLabeledTableau,
    column_word,
    enumerate_tableaux,
    is_lattice,
    is_valid,
    reconstruct_witness,
    row_statistics,
    row_word,
)
from src.backend.errors import BudgetExceededError
from src.backend.exact_lp import FeasibilityOracle, SimplexOracle, scale_to_integer
from src.backend.factorial_schur import (
    is_beta_positive,
    lr_coefficient,
    rewrite_in_beta,
)
from src.backend.integer_search import find_integer_point
from src.backend.lr_polytope import (
    ConstraintSystem,
    build_constraints,
    check_point,
    dilate_check,
    is_combinatorial,
)
from src.backend.partitions import (
    Partition,
    partitions_in_box,
    partitions_up_to,
    render,
    scale,
)
from src.backend.row_statistics import RowStatistics

logger = logging.getLogger(__name__)

Triple = Tuple[Partition, Partition, Partition]

CENSUS_COLUMNS = [
    "lambda",
    "mu",
    "nu",
    "lp_feasible",
    "tableau_count_found",
    "oracle_nonzero",
    "agree",
]


@dataclass
class VanishingVerdict:
    """
    Decision for one triple. The witness is only present for nonvanishing
    triples whose integer point was found within the search budget.
    """

    vanishes: bool
    rational_point: Optional[List[Fraction]] = None
    integer_point: Optional[List[int]] = None
    witness: Optional[EdgeLabeledTableau] = None
    witness_budget_exceeded: bool = False


@dataclass
class CensusRow:
    lam: Partition
    mu: Partition
    nu: Partition
    lp_feasible: bool
    tableau_count_found: int
    oracle_nonzero: Optional[bool]

    @property
    def agree(self) -> bool:
        """LP, enumeration and oracle agree; a skipped oracle (None) is left out."""
        tableaux_found = self.tableau_count_found > 0
        if self.oracle_nonzero is None:
            return self.lp_feasible == tableaux_found
        return self.lp_feasible == tableaux_found == self.oracle_nonzero

    def as_record(self) -> dict:
        return {
            "lambda": render(self.lam),
            "mu": render(self.mu),
            "nu": render(self.nu),
            "lp_feasible": self.lp_feasible,
            "tableau_count_found": self.tableau_count_found,
            "oracle_nonzero": self.oracle_nonzero,
            "agree": self.agree,
        }


@dataclass
class CensusReport:
    """Per-triple rows plus a description of every failed check."""

    rows: List[CensusRow] = field(default_factory=list)
    disagreements: List[Tuple[Triple, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame([row.as_record() for row in self.rows], columns=CENSUS_COLUMNS)

    def to_csv(self, path: str):
        self.to_dataframe().to_csv(path, index=False)


def _upper_bounds(system: ConstraintSystem, mu: Partition) -> List[int]:
    # Every coordinate counts copies of one label k, so it is at most mu_k.
    return [mu.part(index // (2 * system.nu_length) + 1) for index in range(system.num_vars)]


class VanishingEngine:
    """
    Decides vanishing of Littlewood-Richardson polynomials through an exact
    feasibility oracle, and cross-checks the decision against tableau
    enumeration and the factorial Schur expansion.
    """

    def __init__(
        self,
        oracle: Optional[FeasibilityOracle] = None,
        config: Optional[EngineConfig] = None,
    ):
        """
        Initialize the VanishingEngine.

        Args:
            oracle (FeasibilityOracle): Feasibility oracle for the constraint systems; exact simplex by default.
            config (EngineConfig): Search budgets and census settings.
        """
        self.oracle = oracle or SimplexOracle()
        self.config = config or EngineConfig()

    def find_integer_point(
        self, system: ConstraintSystem, mu: Partition, rational_point: Optional[List[Fraction]] = None
    ) -> Optional[List[int]]:
        """
        Integer point of a (lambda, mu, nu) system, reusing the rational point when it is integral.

        Raises:
            BudgetExceededError: The depth-first search ran out of nodes.
        """
        if rational_point is not None and all(
            Fraction(x).denominator == 1 for x in rational_point
        ):
            return [int(x) for x in rational_point]
        return find_integer_point(
            system, _upper_bounds(system, mu), budget=self.config.integer_search_budget
        )

    def decide_vanishing(
        self, lam: Partition, mu: Partition, nu: Partition, with_witness: bool = True
    ) -> VanishingVerdict:
        """
        Decide whether C^nu_{lam,mu} vanishes from rational feasibility of its polytope.

        Args:
            lam (Partition): Inner shape.
            mu (Partition): Content.
            nu (Partition): Outer shape.
            with_witness (bool): Also search an integer point and rebuild its tableau.

        Returns:
            VanishingVerdict: The verdict, with a witness when one was found in budget.
        """
        system = build_constraints(lam, mu, nu)
        result = self.oracle.feasible(system)
        if not result:
            logger.debug("%s %s %s: polytope is empty.", lam, mu, nu)
            return VanishingVerdict(vanishes=True)

        verdict = VanishingVerdict(vanishes=False, rational_point=result.point)
        if not with_witness:
            return verdict
        try:
            point = self.find_integer_point(system, mu, result.point)
        except BudgetExceededError as e:
            logger.warning("Witness search for %s %s %s stopped: %s", lam, mu, nu, e)
            verdict.witness_budget_exceeded = True
            return verdict
        if point is None:
            # Saturation guarantees an integer point whenever the polytope is nonempty.
            logger.warning("No integer point found for %s %s %s.", lam, mu, nu)
            return verdict

        stats = RowStatistics.from_vector(point, nu.length, mu.length)
        verdict.integer_point = point
        verdict.witness = reconstruct_witness(stats, lam, mu, nu)
        return verdict

    def decide_classical_vanishing(self, lam: Partition, mu: Partition, nu: Partition) -> bool:
        """c^nu_{lam,mu} = 0 unless |lam| + |mu| = |nu|, where it is the constant C."""
        if lam.size + mu.size != nu.size:
            return True
        return self.decide_vanishing(lam, mu, nu, with_witness=False).vanishes

    def check_triple(self, lam: Partition, mu: Partition, nu: Partition) -> Tuple[CensusRow, List[str]]:
        """
        Run every census check on one triple.

        Returns:
            Tuple[CensusRow, List[str]]: The CSV row and a description of each failed check.
        """
        problems: List[str] = []
        system = build_constraints(lam, mu, nu)
        lp = self.oracle.feasible(system)

        candidates = enumerate_tableaux(
            lam, mu, nu, require_lattice=False, budget=self.config.enumeration_budget
        )
        tableaux = [t for t in candidates if is_lattice(column_word(t))]
        try:
            coefficient = lr_coefficient(
                lam,
                mu,
                nu,
                max_size=self.config.oracle_max_size,
                max_variables=self.config.oracle_max_variables,
            )
        except BudgetExceededError as e:
            logger.warning("Oracle skipped for %s %s %s: %s", lam, mu, nu, e)
            coefficient = None
        oracle_nonzero = None if coefficient is None else bool(coefficient)
        row = CensusRow(lam, mu, nu, bool(lp), len(tableaux), oracle_nonzero)
        if not row.agree:
            problems.append(
                f"lp_feasible={row.lp_feasible} tableaux={row.tableau_count_found} "
                f"oracle_nonzero={row.oracle_nonzero}"
            )

        for tableau in candidates:
            if is_lattice(column_word(tableau)) != is_lattice(row_word(tableau)):
                problems.append("column and row words disagree on latticeness")
                break
        for tableau in tableaux:
            if not is_valid(tableau, mu) or not check_point(
                row_statistics(tableau, mu.length), system
            ):
                problems.append("enumerated tableau gives a point outside the polytope")
                break

        if lp:
            problems.extend(self._check_witness(system, lam, mu, nu, lp.point))
            problems.extend(self._check_scaled_point(lam, mu, nu, lp.point))

        for factor in self.config.saturation_factors:
            scaled = build_constraints(scale(lam, factor), scale(mu, factor), scale(nu, factor))
            if bool(self.oracle.feasible(scaled)) != bool(lp):
                problems.append(f"saturation fails for N={factor}")
        for factor in self.config.dilation_factors:
            if not dilate_check(lam, mu, nu, factor):
                problems.append(f"dilation identity fails for N={factor}")
        if not is_combinatorial(system):
            problems.append("constraint system is not combinatorial")

        if coefficient:
            problems.extend(self._check_coefficient(lam, mu, nu, coefficient))
        return row, problems

    def _check_witness(self, system, lam, mu, nu, rational_point) -> List[str]:
        point = self.find_integer_point(system, mu, rational_point)
        if point is None:
            return ["polytope is nonempty but holds no integer point"]
        stats = RowStatistics.from_vector(point, nu.length, mu.length)
        witness = reconstruct_witness(stats, lam, mu, nu)
        if not (
            is_valid(witness, mu)
            and is_lattice(column_word(witness))
            and is_lattice(row_word(witness))
        ):
            return ["reconstructed witness is not a lattice tableau"]
        if row_statistics(witness, mu.length).to_vector() != point:
            return ["reconstructed witness has different statistics"]
        return []

    @staticmethod
    def _check_scaled_point(lam, mu, nu, rational_point) -> List[str]:
        # N times a rational point of P(lam, mu, nu) is a point of P(N lam, N mu, N nu).
        factor, integers = scale_to_integer(rational_point)
        scaled = build_constraints(scale(lam, factor), scale(mu, factor), scale(nu, factor))
        if not check_point(integers, scaled):
            return [f"rational point scaled by N={factor} leaves the dilated polytope"]
        return []

    @staticmethod
    def _check_coefficient(lam, mu, nu, coefficient) -> List[str]:
        problems = []
        beta = rewrite_in_beta(coefficient)
        if not is_beta_positive(beta):
            problems.append("coefficient is not beta-positive")
        if lam.size + mu.size < nu.size:
            problems.append("nonzero coefficient below the degree bound")
        if lam.size + mu.size == nu.size and not coefficient.is_ground:
            problems.append("top-degree coefficient is not a constant")
        return problems

    def run_census(
        self, rows: int, cols: int, mu_max: int, workers: int = 1
    ) -> CensusReport:
        """
        Check every triple with lambda, nu inside a rows x cols box and |mu| <= mu_max.

        Args:
            rows (int): Box height for lambda and nu.
            cols (int): Box width for lambda and nu.
            mu_max (int): Largest |mu|; mu ranges over an mu_max x mu_max box.
            workers (int): Worker processes; 1 runs in this process.

        Returns:
            CensusReport: One row per triple and every failed check.
        """
        triples = list(census_triples(rows, cols, mu_max))
        logger.info("Census over %d triples with %d worker(s).", len(triples), workers)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                outcomes = list(
                    executor.map(
                        _check_triple_task,
                        [(self.oracle, self.config, triple) for triple in triples],
                        chunksize=max(1, len(triples) // (workers * 8)),
                    )
                )
        else:
            outcomes = [self.check_triple(*triple) for triple in triples]

        report = CensusReport()
        for triple, (row, problems) in zip(triples, outcomes):
            report.rows.append(row)
            for problem in problems:
                logger.warning("Census check failed for %s: %s", _describe(triple), problem)
                report.disagreements.append((triple, problem))
        logger.info(
            "Census finished: %d triples, %d disagreements.",
            len(report.rows),
            len(report.disagreements),
        )
        return report


def _check_triple_task(args) -> Tuple[CensusRow, List[str]]:
    oracle, config, triple = args
    return VanishingEngine(oracle, config).check_triple(*triple)


def _describe(triple: Triple) -> str:
    return " ".join(str(p) for p in triple)


def census_triples(rows: int, cols: int, mu_max: int) -> Iterable[Triple]:
    """All (lambda, mu, nu) with lambda, nu in a rows x cols box and mu in an mu_max box with |mu| <= mu_max."""
    shapes = partitions_in_box(rows, cols)
    contents = partitions_up_to(mu_max, mu_max, mu_max)
    for lam in shapes:
        for mu in contents:
            for nu in shapes:
                yield lam, mu, nu


def decide_vanishing(
    lam: Partition, mu: Partition, nu: Partition, with_witness: bool = True
) -> VanishingVerdict:
    return VanishingEngine().decide_vanishing(lam, mu, nu, with_witness)


def decide_classical_vanishing(lam: Partition, mu: Partition, nu: Partition) -> bool:
    return VanishingEngine().decide_classical_vanishing(lam, mu, nu)

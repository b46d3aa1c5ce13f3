import random
import unittest
from fractions import Fraction

import pytest

from src.backend.errors import BudgetExceededError, SolverError
from src.backend.exact_lp import FeasibilityOracle, SimplexOracle, feasible, scale_to_integer
from src.backend.fourier_motzkin import FourierMotzkinOracle
from src.backend.lr_polytope import (
    EQ,
    LE,
    ConstraintSystem,
    build_constraints,
    check_point,
)
from src.backend.partitions import partitions_in_box, partitions_up_to, scale


def system_of(num_vars, rows):
    system = ConstraintSystem(num_vars=num_vars)
    for coefficients, sense, rhs in rows:
        system.add_row("X", coefficients, sense, rhs)
    return system


def random_system(rng: random.Random) -> ConstraintSystem:
    num_vars = rng.randint(1, 4)
    rows = []
    for _ in range(rng.randint(1, 6)):
        coefficients = [rng.randint(-2, 2) for _ in range(num_vars)]
        sense = EQ if rng.random() < 0.3 else LE
        rows.append((coefficients, sense, rng.randint(-3, 3)))
    return system_of(num_vars, rows)


class TestSimplexOracle(unittest.TestCase):
    def setUp(self):
        self.oracle = SimplexOracle()

    def test_fractional_vertex(self):
        # 2x = 1, x >= 0
        system = system_of(1, [([2], EQ, 1), ([-1], LE, 0)])
        result = self.oracle.feasible(system)
        self.assertTrue(result)
        self.assertEqual(result.point, [Fraction(1, 2)])

    def test_infeasible_box(self):
        # x + y <= 1, x >= 1, y >= 1
        system = system_of(2, [([1, 1], LE, 1), ([-1, 0], LE, -1), ([0, -1], LE, -1)])
        result = self.oracle.feasible(system)
        self.assertFalse(result)
        self.assertIsNone(result.point)

    def test_free_variables(self):
        # x - y = -3 with both signs free
        system = system_of(2, [([1, -1], EQ, -3)])
        result = self.oracle.feasible(system)
        self.assertTrue(result)
        self.assertEqual(result.point[0] - result.point[1], -3)

    def test_constant_rows(self):
        self.assertTrue(self.oracle.feasible(system_of(1, [([0], LE, 0)])))
        self.assertFalse(self.oracle.feasible(system_of(1, [([0], EQ, 2)])))

    def test_module_level_feasible(self):
        system = system_of(2, [([1, 1], EQ, 2), ([1, -1], LE, 0)])
        result = feasible(system)
        self.assertTrue(check_point(result.point, system))

    def test_verified_rejects_bad_point(self):
        system = system_of(1, [([1], LE, 0)])
        with self.assertRaises(SolverError):
            FeasibilityOracle.verified(system, [Fraction(1)])


class TestScaleToInteger(unittest.TestCase):
    def test_clears_denominators(self):
        self.assertEqual(
            scale_to_integer([Fraction(1, 2), Fraction(2, 3), 1]), (6, [3, 4, 6])
        )
        self.assertEqual(scale_to_integer([]), (1, []))

    def test_scaled_point_lies_in_dilated_polytope(self):
        oracle = SimplexOracle()
        shapes = partitions_in_box(2, 2)
        for lam in shapes:
            for nu in shapes:
                for mu in partitions_up_to(2, 2, 2):
                    result = oracle.feasible(build_constraints(lam, mu, nu))
                    if not result:
                        continue
                    factor, integers = scale_to_integer(result.point)
                    dilated = build_constraints(
                        scale(lam, factor), scale(mu, factor), scale(nu, factor)
                    )
                    self.assertTrue(check_point(integers, dilated), msg=f"{lam} {mu} {nu}")

    def test_half_point_doubles_into_integer_point(self):
        # 2x = 1 scales to 2x = 2 at N = 2.
        result = SimplexOracle().feasible(system_of(1, [([2], EQ, 1)]))
        factor, integers = scale_to_integer(result.point)
        self.assertEqual((factor, integers), (2, [1]))
        self.assertTrue(check_point(integers, system_of(1, [([2], EQ, 2)])))


class TestAgreementWithFourierMotzkin(unittest.TestCase):
    def test_random_systems(self):
        rng = random.Random(20240613)
        simplex, elimination = SimplexOracle(), FourierMotzkinOracle()
        for _ in range(500):
            system = random_system(rng)
            expected = elimination.feasible(system)
            result = simplex.feasible(system)
            self.assertEqual(bool(result), bool(expected))
            if result:
                self.assertTrue(check_point(result.point, system))

    def test_census_systems(self):
        simplex, elimination = SimplexOracle(), FourierMotzkinOracle()
        shapes = partitions_in_box(2, 2)
        for lam in shapes:
            for nu in shapes:
                for mu in partitions_up_to(3, 3, 3):
                    system = build_constraints(lam, mu, nu)
                    if system.num_vars > 12:
                        continue
                    self.assertEqual(
                        bool(simplex.feasible(system)),
                        bool(elimination.feasible(system)),
                        msg=f"{lam} {mu} {nu}",
                    )

    def test_row_budget(self):
        # Every pair of an upper and a lower bound on x1 combines into a new row.
        rows = [([1, i, 0], LE, 10) for i in range(-3, 4)]
        rows += [([-1, 0, i], LE, 10) for i in range(-3, 4)]
        with self.assertRaises(BudgetExceededError):
            FourierMotzkinOracle(max_rows=10).feasible(system_of(3, rows))


@pytest.mark.slow
class TestThreeByThreeCensusSystems(unittest.TestCase):
    def test_agreement_on_small_systems(self):
        simplex, elimination = SimplexOracle(), FourierMotzkinOracle()
        shapes = partitions_in_box(3, 3)
        checked = 0
        for lam in shapes:
            for nu in shapes:
                for mu in partitions_up_to(4, 4, 4):
                    system = build_constraints(lam, mu, nu)
                    if system.num_vars > 12:
                        continue
                    checked += 1
                    self.assertEqual(
                        bool(simplex.feasible(system)),
                        bool(elimination.feasible(system)),
                        msg=f"{lam} {mu} {nu}",
                    )
        self.assertGreater(checked, 0)

import unittest

from src.backend.errors import BudgetExceededError, DimensionError
from src.backend.integer_search import find_integer_point
from src.backend.lr_polytope import EQ, LE, ConstraintSystem, build_constraints, check_point
from src.backend.partitions import Partition
from tests.test_edge_tableaux import LAM_TALL, MU_TALL, NU_TALL


def sum_system(total: int) -> ConstraintSystem:
    system = ConstraintSystem(num_vars=3)
    system.add_row("S", [1, 1, 1], EQ, total)
    system.add_row("O", [1, -1, 0], LE, 0)
    return system


class TestFindIntegerPoint(unittest.TestCase):
    def test_finds_point_in_box(self):
        point = find_integer_point(sum_system(5), [2, 2, 2])
        self.assertIsNotNone(point)
        self.assertEqual(sum(point), 5)
        self.assertLessEqual(point[0], point[1])
        self.assertTrue(all(0 <= x <= 2 for x in point))

    def test_returns_none_when_box_is_too_small(self):
        self.assertIsNone(find_integer_point(sum_system(7), [2, 2, 2]))

    def test_odd_equation_has_no_integer_point(self):
        # 2x = 1 is feasible over the rationals only.
        system = ConstraintSystem(num_vars=1)
        system.add_row("X", [2], EQ, 1)
        self.assertIsNone(find_integer_point(system, [3]))

    def test_budget(self):
        with self.assertRaises(BudgetExceededError):
            find_integer_point(sum_system(6), [2, 2, 2], budget=1)

    def test_bounds_must_match_variables(self):
        with self.assertRaises(DimensionError):
            find_integer_point(sum_system(1), [1, 1])

    def test_tall_system(self):
        system = build_constraints(LAM_TALL, MU_TALL, NU_TALL)
        bounds = [MU_TALL.part(index // 10 + 1) for index in range(system.num_vars)]
        point = find_integer_point(system, bounds)
        self.assertIsNotNone(point)
        self.assertTrue(check_point(point, system))

    def test_empty_system(self):
        system = build_constraints(Partition(), Partition(), Partition())
        self.assertEqual(find_integer_point(system, []), [])

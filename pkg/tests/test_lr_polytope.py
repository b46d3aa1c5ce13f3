import json
import unittest

import numpy as np

from src.backend.errors import DimensionError
from src.backend.exact_lp import SimplexOracle
from src.backend.lr_polytope import (
    EQ,
    LE,
    ConstraintSystem,
    build_constraints,
    check_point,
    constraints_to_json,
    dilate_check,
    is_combinatorial,
    render_constraints_text,
)
from src.backend.partitions import Partition, partitions_in_box, partitions_up_to
from tests.test_edge_tableaux import LAM_TALL, MU_TALL, NU_TALL, tall_point

ONE = Partition((1,))
TWO = Partition((2,))


class TestBuildConstraints(unittest.TestCase):
    def test_dimension_of_tall_triple(self):
        system = build_constraints(LAM_TALL, MU_TALL, NU_TALL)
        self.assertEqual(system.num_vars, 50)
        self.assertEqual(system.coefficient_matrix().shape, (len(system.rows), 50))
        self.assertEqual({row.tag for row in system.rows}, set("ABCDEF"))

    def test_empty_triple(self):
        system = build_constraints(Partition(), Partition(), Partition())
        self.assertEqual(system.num_vars, 0)
        self.assertEqual(system.rows, [])
        self.assertTrue(SimplexOracle().feasible(system))

    def test_too_few_boxes_is_infeasible(self):
        system = build_constraints(ONE, ONE, Partition((3,)))
        self.assertFalse(SimplexOracle().feasible(system))

    def test_inner_longer_than_outer_is_infeasible(self):
        system = build_constraints(Partition((1, 1)), ONE, TWO)
        self.assertFalse(SimplexOracle().feasible(system))

    def test_text_dump(self):
        text = render_constraints_text(build_constraints(ONE, ONE, TWO))
        self.assertEqual(
            text.splitlines(),
            [
                "A(1,1): -rB[1][1] <= 0",
                "A(1,1): -rE[1][1] <= 0",
                "B(1,*): +rB[1][1] = 1",
                "C(*,1): +rB[1][1] +rE[1][1] = 1",
                "D(1,1): +rE[1][1] <= 1",
                "F(1,1): 0 <= 0",
            ],
        )

    def test_json_dump(self):
        payload = json.loads(constraints_to_json(build_constraints(ONE, ONE, TWO)))
        self.assertEqual(payload["num_vars"], 2)
        self.assertEqual(payload["variables"], ["rB[1][1]", "rE[1][1]"])
        self.assertEqual(payload["rows"][2], {
            "tag": "B", "i": 1, "k": 0, "coefficients": [1, 0], "sense": EQ, "rhs": 1,
        })

    def test_generic_system_names(self):
        system = ConstraintSystem(num_vars=2)
        system.add_row("X", [1, -1], LE, 0)
        self.assertEqual(render_constraints_text(system), "X(*,*): +x1 -x2 <= 0")
        with self.assertRaises(DimensionError):
            system.add_row("X", [1], LE, 0)


class TestCheckPoint(unittest.TestCase):
    def test_tall_point(self):
        system = build_constraints(LAM_TALL, MU_TALL, NU_TALL)
        self.assertTrue(check_point(tall_point(), system))

    def test_zero_point_violates_shape_row(self):
        system = build_constraints(LAM_TALL, MU_TALL, NU_TALL)
        report = check_point([0] * 50, system)
        self.assertFalse(report)
        self.assertIn("B(3,*)", report.violations)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            check_point([0, 0, 0], build_constraints(ONE, ONE, TWO))


class TestStructure(unittest.TestCase):
    def test_dilation(self):
        self.assertTrue(dilate_check(LAM_TALL, MU_TALL, NU_TALL, 2))
        self.assertTrue(dilate_check(ONE, ONE, TWO, 7))
        self.assertTrue(dilate_check(Partition((2, 1)), ONE, Partition((3, 1)), 1))

    def test_census_systems_are_combinatorial_and_homogeneous(self):
        shapes = partitions_in_box(2, 2)
        for lam in shapes:
            for nu in shapes:
                for mu in partitions_up_to(2, 2, 2):
                    system = build_constraints(lam, mu, nu)
                    self.assertTrue(is_combinatorial(system))
                    self.assertEqual(system.num_vars, 2 * nu.length * mu.length)
                    for factor in (2, 3):
                        self.assertTrue(dilate_check(lam, mu, nu, factor))

    def test_non_combinatorial_system(self):
        system = ConstraintSystem(num_vars=1)
        system.add_row("X", [2], LE, 1)
        self.assertFalse(is_combinatorial(system))
        self.assertTrue(np.array_equal(system.coefficient_matrix(), np.array([[2]])))

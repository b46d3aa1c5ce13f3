import csv
import json
import os
import tempfile
import unittest
from unittest.mock import patch

from click.testing import CliRunner

from src.app.cli import cli
from src.backend.errors import BudgetExceededError
from src.backend.partitions import Partition


class TestVanishCommand(unittest.TestCase):
    def setUp(self):
        self.runner = CliRunner()

    def test_nonvanishing(self):
        result = self.runner.invoke(cli, ["vanish", "-l", "1", "-m", "1", "-n", "1"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output.strip(), "NONVANISHING")

    def test_vanishing_exits_with_one(self):
        result = self.runner.invoke(cli, ["vanish", "-l", "1", "-m", "1", "-n", "3"])
        self.assertEqual(result.exit_code, 1)
        self.assertEqual(result.output.strip(), "VANISHES")

    def test_classical(self):
        # The equivariant coefficient is nonzero here, the classical one is not.
        result = self.runner.invoke(
            cli, ["vanish", "-l", "1", "-m", "1", "-n", "1", "--classical"]
        )
        self.assertEqual(result.exit_code, 1)
        result = self.runner.invoke(
            cli, ["vanish", "-l", "1", "-m", "1", "-n", "1,1", "--classical"]
        )
        self.assertEqual(result.exit_code, 0)

    def test_malformed_partition(self):
        result = self.runner.invoke(cli, ["vanish", "-l", "2,x", "-m", "1", "-n", "3"])
        self.assertEqual(result.exit_code, 2)
        result = self.runner.invoke(cli, ["vanish", "-l", "1,2", "-m", "1", "-n", "3"])
        self.assertEqual(result.exit_code, 2)

    def test_witness(self):
        result = self.runner.invoke(
            cli, ["vanish", "-l", "1", "-m", "1", "-n", "1", "--witness"]
        )
        self.assertEqual(result.exit_code, 0)
        lines = result.output.splitlines()
        self.assertEqual(lines[0], "NONVANISHING")
        self.assertEqual(lines[1], "point: rE[1][1]=1")

    def test_json(self):
        result = self.runner.invoke(
            cli,
            ["vanish", "-l", "2,2,1,1", "-m", "2,2,2,1,1", "-n", "2,2,2,2,2", "--witness", "--json"],
        )
        self.assertEqual(result.exit_code, 0)
        payload = json.loads(result.output)
        self.assertEqual(payload["query"]["mode"], "witness")
        self.assertFalse(payload["vanishes"])
        self.assertEqual(len(payload["rational_point"]), 50)
        self.assertEqual(len(payload["integer_point"]), 50)
        self.assertEqual(payload["witness"]["outer"], [2, 2, 2, 2, 2])

    def test_config_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "engine.yaml")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("integer_search_budget: 50000\n")
            result = self.runner.invoke(
                cli, ["--config", path, "vanish", "-l", "1", "-m", "1", "-n", "2"]
            )
        self.assertEqual(result.exit_code, 0)


class TestExpandCommand(unittest.TestCase):
    def setUp(self):
        self.runner = CliRunner()

    def test_square_of_one_box(self):
        result = self.runner.invoke(cli, ["expand", "-l", "1", "-m", "1"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(
            result.output.splitlines(),
            ["(2): 1", "(1,1): 1", "(1): -1*y2 +1*y3  (beta: 1*b2)"],
        )

    def test_empty_product(self):
        result = self.runner.invoke(cli, ["expand", "-l", "", "-m", ""])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output.strip(), "(): 1")

    def test_json(self):
        result = self.runner.invoke(cli, ["expand", "-l", "1", "-m", "1", "--json"])
        payload = json.loads(result.output)
        self.assertEqual(payload["n"], 2)
        self.assertEqual(payload["terms"][2], {"nu": "(1)", "coefficient": "-1*y2 +1*y3", "beta": "1*b2"})

    def test_over_the_caps(self):
        result = self.runner.invoke(cli, ["expand", "-l", "3,3,3", "-m", "3,3"])
        self.assertEqual(result.exit_code, 3)
        self.assertIn("error:", result.output)


class TestDumpCommand(unittest.TestCase):
    def setUp(self):
        self.runner = CliRunner()

    def test_text(self):
        result = self.runner.invoke(cli, ["dump", "-l", "1", "-m", "1", "-n", "2"])
        self.assertEqual(result.exit_code, 0)
        lines = result.output.splitlines()
        self.assertEqual(lines[0], "# 2 variables, 6 rows")
        self.assertEqual(lines[3], "B(1,*): +rB[1][1] = 1")

    def test_empty_triple(self):
        result = self.runner.invoke(cli, ["dump", "-l", "", "-m", "", "-n", ""])
        self.assertEqual(result.output.strip(), "# 0 variables, 0 rows")

    def test_json(self):
        result = self.runner.invoke(cli, ["dump", "-l", "1", "-m", "1", "-n", "2", "--json"])
        self.assertEqual(json.loads(result.output)["num_vars"], 2)


class TestCensusCommand(unittest.TestCase):
    def setUp(self):
        self.runner = CliRunner()

    def test_small_census_with_outputs(self):
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = os.path.join(tmp, "census.csv")
            db_url = f"sqlite:///{os.path.join(tmp, 'census.db')}"
            result = self.runner.invoke(
                cli,
                ["census", "--box", "1x1", "--mu-max", "1", "--csv", csv_path, "--db", db_url],
            )
            self.assertEqual(result.exit_code, 0)
            self.assertEqual(result.output.strip(), "8 triples, 0 disagreements")
            with open(csv_path, encoding="utf-8") as handle:
                lines = handle.read().splitlines()
            self.assertEqual(lines[0], "lambda,mu,nu,lp_feasible,tableau_count_found,oracle_nonzero,agree")
            self.assertEqual(len(lines), 9)

            listed = self.runner.invoke(cli, ["runs", "--db", db_url])
            self.assertEqual(listed.exit_code, 0)
            self.assertIn("census-1x1-mu1", listed.output)
            self.assertIn("0 disagreements", listed.output)

            listed = self.runner.invoke(cli, ["runs", "--db", db_url, "--json"])
            self.assertEqual(json.loads(listed.output)["runs"][0]["box"], "1x1")

    def test_bad_box(self):
        result = self.runner.invoke(cli, ["census", "--box", "3by3"])
        self.assertEqual(result.exit_code, 2)

    def test_disagreement_exits_with_four(self):
        with patch(
            "src.backend.vanishing_engine.VanishingEngine.check_triple",
            return_value=(None, ["broken"]),
        ):
            result = self.runner.invoke(cli, ["census", "--box", "1x1", "--mu-max", "1"])
        self.assertEqual(result.exit_code, 4)
        self.assertIn("8 triples, 8 disagreements", result.output)
        self.assertIn("reproducer: vanish -l '' -m '' -n ''", result.output)

    def test_oracle_over_the_caps_is_recorded_as_skipped(self):
        triple = (Partition((4, 4, 2)), Partition((4,)), Partition((4, 4, 4)))
        with patch("src.backend.vanishing_engine.census_triples", return_value=[triple]):
            with tempfile.TemporaryDirectory() as tmp:
                csv_path = os.path.join(tmp, "census.csv")
                result = self.runner.invoke(
                    cli, ["census", "--box", "3x4", "--mu-max", "4", "--csv", csv_path]
                )
                with open(csv_path, encoding="utf-8", newline="") as handle:
                    records = list(csv.DictReader(handle))
        self.assertEqual(result.exit_code, 0, msg=result.output)
        self.assertIn("1 triples, 0 disagreements", result.output)
        self.assertEqual(records[0]["lambda"], "4,4,2")
        self.assertEqual(records[0]["oracle_nonzero"], "")
        self.assertEqual(records[0]["agree"], "True")

    def test_budget_exits_with_three(self):
        with patch(
            "src.backend.vanishing_engine.VanishingEngine.run_census",
            side_effect=BudgetExceededError("Tableau enumeration exceeded 10 nodes."),
        ):
            result = self.runner.invoke(cli, ["census", "--box", "1x1", "--mu-max", "1"])
        self.assertEqual(result.exit_code, 3)
        self.assertIn("error: Tableau enumeration exceeded 10 nodes.", result.output)


class TestRunsCommand(unittest.TestCase):
    def setUp(self):
        self.runner = CliRunner()
        self.tmp = tempfile.TemporaryDirectory()
        self.db_url = f"sqlite:///{os.path.join(self.tmp.name, 'census.db')}"
        result = self.runner.invoke(
            cli, ["census", "--box", "1x1", "--mu-max", "1", "--db", self.db_url]
        )
        self.assertEqual(result.exit_code, 0)
        listed = self.runner.invoke(cli, ["runs", "--db", self.db_url, "--json"])
        self.run_id = json.loads(listed.output)["runs"][0]["id"]

    def tearDown(self):
        self.tmp.cleanup()

    def test_show(self):
        result = self.runner.invoke(cli, ["runs", "--db", self.db_url, "--show", str(self.run_id)])
        self.assertEqual(result.exit_code, 0)
        lines = result.output.splitlines()
        self.assertIn("census-1x1-mu1", lines[0])
        self.assertIn("tableau_count_found", lines[1])
        self.assertEqual(len(lines), 10)

        result = self.runner.invoke(
            cli, ["runs", "--db", self.db_url, "--show", str(self.run_id), "--json"]
        )
        payload = json.loads(result.output)
        self.assertEqual(len(payload["rows"]), 8)
        self.assertEqual(payload["rows"][0]["lambda"], "")

    def test_delete(self):
        result = self.runner.invoke(cli, ["runs", "--db", self.db_url, "--delete", str(self.run_id)])
        self.assertEqual(result.exit_code, 0)
        self.assertIn(f"deleted run {self.run_id}", result.output)
        listed = self.runner.invoke(cli, ["runs", "--db", self.db_url, "--json"])
        self.assertEqual(json.loads(listed.output)["runs"], [])

    def test_unknown_id(self):
        for flag in ("--show", "--delete"):
            result = self.runner.invoke(cli, ["runs", "--db", self.db_url, flag, "999"])
            self.assertEqual(result.exit_code, 2)
            self.assertIn("no stored run with ID 999", result.output)

import os
import tempfile
import unittest

from pydantic import ValidationError

from src.backend.config import EngineConfig


class TestEngineConfig(unittest.TestCase):
    def test_defaults(self):
        config = EngineConfig()
        self.assertEqual(config.oracle_max_size, 13)
        self.assertEqual(config.oracle_max_variables, 7)
        self.assertEqual(config.saturation_factors, [2, 3])
        self.assertEqual(config.dilation_factors, [1, 2, 3, 7])

    def test_from_yaml(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "engine.yaml")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("enumeration_budget: 1000\nsaturation_factors: [2]\n")
            config = EngineConfig.from_yaml(path)
        self.assertEqual(config.enumeration_budget, 1000)
        self.assertEqual(config.saturation_factors, [2])
        self.assertEqual(config.integer_search_budget, 10_000_000)

    def test_empty_yaml(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "empty.yaml")
            open(path, "w", encoding="utf-8").close()
            self.assertEqual(EngineConfig.from_yaml(path), EngineConfig())

    def test_rejects_unknown_and_invalid_keys(self):
        with self.assertRaises(ValidationError):
            EngineConfig(search_budget=5)
        with self.assertRaises(ValidationError):
            EngineConfig(integer_search_budget=0)

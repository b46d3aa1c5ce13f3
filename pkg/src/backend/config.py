from typing import List

import yaml
from pydantic import BaseModel, ConfigDict, Field


class EngineConfig(BaseModel):
    """
    Budgets and census settings shared by the engine, the oracles and the CLI.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    # Nodes visited by the integer witness search before giving up.
    integer_search_budget: int = Field(default=10_000_000, ge=1)
    # Nodes visited by the brute-force tableau enumeration.
    enumeration_budget: int = Field(default=2_000_000, ge=1)
    # Desk-scale caps for the factorial Schur oracle: |lambda| + |mu| and n.
    oracle_max_size: int = Field(default=13, ge=0)
    oracle_max_variables: int = Field(default=7, ge=1)
    saturation_factors: List[int] = Field(default_factory=lambda: [2, 3])
    dilation_factors: List[int] = Field(default_factory=lambda: [1, 2, 3, 7])

    @classmethod
    def from_yaml(cls, filepath: str) -> "EngineConfig":
        """
        Load a configuration from a YAML mapping.

        Args:
            filepath (str): Path to the YAML file.

        Returns:
            EngineConfig: The validated configuration; missing keys keep their defaults.
        """
        with open(filepath, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
        return cls(**data)

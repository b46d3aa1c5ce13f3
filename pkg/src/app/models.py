from datetime import datetime
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, field_validator

from src.backend.edge_tableaux import EdgeLabeledTableau, tableau_to_dict


class QueryRecord(BaseModel):
    """One vanishing query as entered on the command line."""

    lam: str
    mu: str
    nu: str
    mode: str = "verdict"  # verdict | witness | classical


class TableauModel(BaseModel):
    outer: List[int]
    inner: List[int]
    boxes: List[List[int]]
    edges: List[list]

    @classmethod
    def from_tableau(cls, tableau: EdgeLabeledTableau) -> "TableauModel":
        return cls(**tableau_to_dict(tableau))


class VanishResponse(BaseModel):
    query: QueryRecord
    vanishes: bool
    rational_point: Optional[List[str]] = None
    integer_point: Optional[List[int]] = None
    witness: Optional[TableauModel] = None
    witness_budget_exceeded: bool = False

    @field_validator("rational_point", mode="before")
    @classmethod
    def fractions_as_text(cls, value):
        # Exact output only: fractions render as "p/q".
        if value is None:
            return None
        return [str(Fraction(x)) for x in value]


class ExpansionTerm(BaseModel):
    nu: str
    coefficient: str
    beta: str


class ExpansionResponse(BaseModel):
    lam: str
    mu: str
    n: int
    terms: List[ExpansionTerm]


class CensusRunResponse(BaseModel):
    id: int
    run_name: str
    updated_at: datetime
    box: str
    mu_max: int
    disagreements: int


class CensusRunDetailResponse(BaseModel):
    id: int
    run_name: str
    box: str
    mu_max: int
    disagreements: int
    rows: List[dict]


class CensusRunListResponse(BaseModel):
    runs: List[CensusRunResponse]


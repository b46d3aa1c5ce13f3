from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from src.backend.errors import DimensionError

BOX = 0
EDGE = 1


def variable_index(k: int, i: int, kind: int, nu_length: int) -> int:
    """
    Position of r_k^i (kind=BOX) or r_k^{i+1/2} (kind=EDGE) in the coordinate vector.

    Variables are ordered with k outermost, then i, then box before edge.
    """
    return ((k - 1) * nu_length + (i - 1)) * 2 + kind


def variable_name(index: int, nu_length: int) -> str:
    """Name of a coordinate as used by the constraint dumps, e.g. rB[2][3] or rE[1][4]."""
    kind = index % 2
    block = index // 2
    k, i = block // nu_length + 1, block % nu_length + 1
    return f"r{'B' if kind == BOX else 'E'}[{k}][{i}]"


@dataclass
class RowStatistics:
    """
    Per-row label counts of an edge-labeled tableau.

    box_counts[(k, i)] is the number of k's in the boxes of row i and
    edge_counts[(k, i)] the number of k's on the southern edges of row i.
    Entries that were never set, including indices beyond l(mu) or l(nu), read as 0.
    """

    nu_length: int
    mu_length: int
    box_counts: Dict[Tuple[int, int], int] = field(default_factory=dict)
    edge_counts: Dict[Tuple[int, int], int] = field(default_factory=dict)

    @property
    def num_vars(self) -> int:
        return 2 * self.nu_length * self.mu_length

    def box(self, k: int, i: int) -> int:
        return self.box_counts.get((k, i), 0)

    def edge(self, k: int, i: int) -> int:
        return self.edge_counts.get((k, i), 0)

    def add_box_label(self, k: int, i: int, count: int = 1):
        self.box_counts[(k, i)] = self.box(k, i) + count

    def add_edge_label(self, k: int, i: int, count: int = 1):
        self.edge_counts[(k, i)] = self.edge(k, i) + count

    def nonzero(self) -> Dict[str, int]:
        """Nonzero entries keyed by coordinate name, for reports and test diffs."""
        named = {}
        for index, value in enumerate(self.to_vector()):
            if value:
                named[variable_name(index, self.nu_length)] = value
        return named

    def to_vector(self) -> List[int]:
        vector = [0] * self.num_vars
        for k in range(1, self.mu_length + 1):
            for i in range(1, self.nu_length + 1):
                vector[variable_index(k, i, BOX, self.nu_length)] = self.box(k, i)
                vector[variable_index(k, i, EDGE, self.nu_length)] = self.edge(k, i)
        return vector

    @classmethod
    def from_vector(
        cls, vector: Sequence[int], nu_length: int, mu_length: int
    ) -> "RowStatistics":
        """
        Rebuild statistics from a coordinate vector in the fixed variable order.

        Args:
            vector (Sequence[int]): 2 * nu_length * mu_length coordinates.
            nu_length (int): l(nu).
            mu_length (int): l(mu).

        Returns:
            RowStatistics: The statistics with only nonzero entries stored.
        """
        if len(vector) != 2 * nu_length * mu_length:
            raise DimensionError(
                f"Expected {2 * nu_length * mu_length} coordinates, got {len(vector)}."
            )
        stats = cls(nu_length=nu_length, mu_length=mu_length)
        for k in range(1, mu_length + 1):
            for i in range(1, nu_length + 1):
                box = vector[variable_index(k, i, BOX, nu_length)]
                edge = vector[variable_index(k, i, EDGE, nu_length)]
                if box:
                    stats.box_counts[(k, i)] = box
                if edge:
                    stats.edge_counts[(k, i)] = edge
        return stats

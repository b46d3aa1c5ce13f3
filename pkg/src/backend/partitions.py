from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator, List, Tuple

from src.backend.errors import PartitionError


@dataclass(frozen=True, order=True)
class Partition:
    """
    A weakly decreasing sequence of nonnegative integers, stored without trailing zeros.

    Rows are 1-indexed through `part`; absent rows read as 0 so partitions of
    unequal length compare safely.
    """

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        for value in parts:
            if isinstance(value, bool) or not isinstance(value, int):
                raise PartitionError(f"Partition parts must be integers, got {value!r}.")
            if value < 0:
                raise PartitionError(f"Partition parts must be nonnegative, got {value}.")
        for previous, current in zip(parts, parts[1:]):
            if current > previous:
                raise PartitionError(f"Partition {parts} is not weakly decreasing.")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    @property
    def length(self) -> int:
        """Number of nonzero parts, l(p)."""
        return len(self.parts)

    @property
    def size(self) -> int:
        """Number of boxes, |p|."""
        return sum(self.parts)

    def part(self, i: int) -> int:
        """Return p_i for a 1-indexed row i, or 0 outside the partition."""
        if 1 <= i <= len(self.parts):
            return self.parts[i - 1]
        return 0


@dataclass(frozen=True)
class SkewShape:
    """
    The skew shape outer/inner; construction fails unless inner is contained in outer.
    """

    outer: Partition
    inner: Partition

    def __post_init__(self):
        if not contains(self.inner, self.outer):
            raise PartitionError(
                f"Inner shape {self.inner} is not contained in outer shape {self.outer}."
            )

    @property
    def num_rows(self) -> int:
        return self.outer.length

    def row_span(self, i: int) -> range:
        """Columns j of row i holding boxes of the skew shape."""
        return range(self.inner.part(i) + 1, self.outer.part(i) + 1)

    def boxes(self) -> List[Tuple[int, int]]:
        """All boxes (i, j) of the skew shape in row-major order."""
        return [(i, j) for i in range(1, self.num_rows + 1) for j in self.row_span(i)]

    def is_admissible_edge(self, i: int, j: int) -> bool:
        """
        Edge (i+1/2, j) may carry labels iff inner_{i+1} < j <= outer_i.

        This is the southern edge of box (i, j) of the outer shape lying weakly
        south of the southern border of the inner shape.
        """
        return i >= 1 and self.inner.part(i + 1) < j <= self.outer.part(i)

    def admissible_edges(self) -> List[Tuple[int, int]]:
        """All admissible edges, as (i, j) meaning edge (i+1/2, j), in row-major order."""
        return [
            (i, j)
            for i in range(1, self.num_rows + 1)
            for j in range(self.inner.part(i + 1) + 1, self.outer.part(i) + 1)
        ]


def parse_partition(text: str) -> Partition:
    """
    Parse the comma-separated text form of a partition, e.g. "4,2,1,0,0".

    Args:
        text (str): Comma-separated nonnegative integers; the empty string is the empty partition.

    Returns:
        Partition: The normalized partition.
    """
    stripped = text.strip()
    if not stripped:
        return Partition()
    parts = []
    for token in stripped.split(","):
        token = token.strip()
        try:
            value = int(token)
        except ValueError:
            raise PartitionError(f"Cannot parse {token!r} as a partition part.") from None
        parts.append(value)
    return Partition(tuple(parts))


def render(p: Partition) -> str:
    """Text form of a partition, the inverse of parse_partition."""
    return ",".join(str(part) for part in p.parts)


def contains(inner: Partition, outer: Partition) -> bool:
    """Return True iff inner_i <= outer_i for every row, padding with zeros."""
    if inner.length > outer.length:
        return False
    return all(a <= b for a, b in zip(inner.parts, outer.parts))


def scale(p: Partition, factor: int) -> Partition:
    """Return (N p_1, N p_2, ...)."""
    if factor < 1:
        raise PartitionError(f"Scaling factor must be positive, got {factor}.")
    return Partition(tuple(factor * part for part in p.parts))


def size(p: Partition) -> int:
    return p.size


def partitions_in_box(rows: int, cols: int) -> List[Partition]:
    """
    Every partition fitting in a rows x cols rectangle, sorted by (size, parts).
    """
    found = {Partition()}
    for parts in combinations_with_replacement(range(cols + 1), rows):
        found.add(Partition(tuple(sorted(parts, reverse=True))))
    return sorted(found, key=lambda p: (p.size, p.parts))


def partitions_up_to(max_size: int, max_rows: int, max_cols: int) -> List[Partition]:
    """Partitions inside a max_rows x max_cols box with at most max_size boxes."""
    return [p for p in partitions_in_box(max_rows, max_cols) if p.size <= max_size]


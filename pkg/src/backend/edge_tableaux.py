import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from src.backend.errors import BudgetExceededError, PreconditionError, TableauError
from src.backend.lr_polytope import build_constraints, check_point
from src.backend.partitions import Partition, SkewShape, contains
from src.backend.row_statistics import RowStatistics

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]
ReadingWord = Tuple[int, ...]


@dataclass(frozen=True)
class EdgeLabeledTableau:
    """
    A filling of a skew shape: one label per box and a set of labels per horizontal edge.

    `boxes[(i, j)]` is the label of box (i, j). `edges[(i, j)]` is the label set of
    the edge (i+1/2, j) below row i; empty edge sets are not stored.
    """

    shape: SkewShape
    boxes: Mapping[Cell, int] = field(default_factory=dict)
    edges: Mapping[Cell, FrozenSet[int]] = field(default_factory=dict)

    def __post_init__(self):
        expected = set(self.shape.boxes())
        if set(self.boxes) != expected:
            missing = sorted(expected - set(self.boxes))
            extra = sorted(set(self.boxes) - expected)
            raise TableauError(
                f"Boxes do not match {self.shape.outer}/{self.shape.inner}: "
                f"missing {missing}, outside {extra}."
            )
        for cell, label in self.boxes.items():
            if not isinstance(label, int) or label < 1:
                raise TableauError(f"Box {cell} holds {label!r}, not a positive label.")

        edges: Dict[Cell, FrozenSet[int]] = {}
        for (i, j), labels in self.edges.items():
            labels = frozenset(labels)
            if not labels:
                continue
            if not self.shape.is_admissible_edge(i, j):
                raise TableauError(f"Edge ({i}+1/2,{j}) is not admissible.")
            if any(not isinstance(k, int) or k < 1 for k in labels):
                raise TableauError(f"Edge ({i}+1/2,{j}) holds a non-positive label.")
            edges[(i, j)] = labels
        object.__setattr__(self, "boxes", dict(self.boxes))
        object.__setattr__(self, "edges", edges)

    @property
    def num_columns(self) -> int:
        return self.shape.outer.part(1)

    def box(self, i: int, j: int) -> Optional[int]:
        return self.boxes.get((i, j))

    def edge(self, i: int, j: int) -> Tuple[int, ...]:
        """Labels of edge (i+1/2, j) in increasing order."""
        return tuple(sorted(self.edges.get((i, j), ())))

    def labels(self) -> Counter:
        content = Counter(self.boxes.values())
        for labels in self.edges.values():
            content.update(labels)
        return content

    def canonical_key(self) -> Tuple:
        """Rows top to bottom; within a row its box labels, then its edge sets left to right."""
        key = []
        for i in range(1, self.shape.num_rows + 1):
            row_boxes = tuple(self.boxes[(i, j)] for j in self.shape.row_span(i))
            row_edges = tuple(
                self.edge(i, j)
                for j in range(self.shape.inner.part(i + 1) + 1, self.shape.outer.part(i) + 1)
            )
            key.append((row_boxes, row_edges))
        return tuple(key)


def is_too_high(i: int, k: int) -> bool:
    """A label k in row i (or on an edge below row i) is too high iff i < k."""
    return i < k


def _column_sequence(tableau: EdgeLabeledTableau, j: int) -> List[int]:
    sequence = []
    for i in range(1, tableau.shape.num_rows + 1):
        label = tableau.box(i, j)
        if label is not None:
            sequence.append(label)
        sequence.extend(tableau.edge(i, j))
    return sequence


def is_valid(tableau: EdgeLabeledTableau, mu: Partition) -> bool:
    """
    Check content mu and the three filling conditions.

    Args:
        tableau (EdgeLabeledTableau): A structurally well-formed tableau.
        mu (Partition): The expected content.

    Returns:
        bool: True iff every label k occurs mu_k times, box labels weakly increase
        along rows, each column read downwards through boxes and edge sets is
        strictly increasing, and no label is too high.
    """
    content = tableau.labels()
    if any(k > mu.length for k in content):
        return False
    if any(content[k] != mu.part(k) for k in range(1, mu.length + 1)):
        return False

    for (i, j), label in tableau.boxes.items():
        right = tableau.box(i, j + 1)
        if right is not None and right < label:
            return False
        if is_too_high(i, label):
            return False
    for (i, _), labels in tableau.edges.items():
        if any(is_too_high(i, k) for k in labels):
            return False

    for j in range(1, tableau.num_columns + 1):
        sequence = _column_sequence(tableau, j)
        if any(b <= a for a, b in zip(sequence, sequence[1:])):
            return False
    return True


def column_word(tableau: EdgeLabeledTableau) -> ReadingWord:
    """Columns right to left, each read top to bottom with edge sets in increasing order."""
    word: List[int] = []
    for j in range(tableau.num_columns, 0, -1):
        word.extend(_column_sequence(tableau, j))
    return tuple(word)


def row_word(tableau: EdgeLabeledTableau) -> ReadingWord:
    """Rows top to bottom, each read right to left: boxes of row i, then edges of row i+1/2."""
    word: List[int] = []
    for i in range(1, tableau.shape.num_rows + 1):
        top = tableau.shape.outer.part(i)
        for j in range(top, tableau.shape.inner.part(i), -1):
            word.append(tableau.boxes[(i, j)])
        for j in range(top, 0, -1):
            word.extend(tableau.edge(i, j))
    return tuple(word)


def is_lattice(word: Sequence[int]) -> bool:
    """Every prefix holds weakly more k's than (k+1)'s, for every k."""
    counts: Counter = Counter()
    for letter in word:
        counts[letter] += 1
        if letter > 1 and counts[letter] > counts[letter - 1]:
            return False
    return True


class _Enumerator:
    """
    Backtracking over the slots of a skew shape in column reading order.

    Boxes take one label and edges take an increasing run of labels, so the
    labels placed so far always form a prefix of the column reading word.
    """

    def __init__(
        self,
        lam: Partition,
        mu: Partition,
        nu: Partition,
        require_lattice: bool,
        budget: int,
    ):
        self.shape = SkewShape(outer=nu, inner=lam)
        self.mu = mu
        self.require_lattice = require_lattice
        self.budget = budget
        self.nodes = 0

        self.slots: List[Tuple[bool, int, int]] = []
        for j in range(nu.part(1), 0, -1):
            for i in range(1, nu.length + 1):
                if lam.part(i) < j <= nu.part(i):
                    self.slots.append((True, i, j))
                if self.shape.is_admissible_edge(i, j):
                    self.slots.append((False, i, j))
        # Boxes still to fill from slot s onwards.
        self.boxes_left = [0] * (len(self.slots) + 1)
        for s in range(len(self.slots) - 1, -1, -1):
            self.boxes_left[s] = self.boxes_left[s + 1] + int(self.slots[s][0])

        self.used = [0] * (mu.length + 2)
        self.content_left = mu.size
        self.boxes: Dict[Cell, int] = {}
        self.edges: Dict[Cell, Tuple[int, ...]] = {}
        self.found: List[EdgeLabeledTableau] = []

    def run(self) -> List[EdgeLabeledTableau]:
        self.fill(0, 0)
        logger.debug(
            "Enumeration of %s/%s with content %s: %d nodes, %d tableaux.",
            self.shape.outer,
            self.shape.inner,
            self.mu,
            self.nodes,
            len(self.found),
        )
        return sorted(self.found, key=EdgeLabeledTableau.canonical_key)

    def take(self, k: int) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(
                f"Tableau enumeration exceeded {self.budget} nodes."
            )
        if self.used[k] >= self.mu.part(k):
            return False
        if self.require_lattice and k > 1 and self.used[k] >= self.used[k - 1]:
            return False
        self.used[k] += 1
        self.content_left -= 1
        return True

    def give(self, k: int):
        self.used[k] -= 1
        self.content_left += 1

    def fill(self, s: int, last: int):
        if self.content_left < self.boxes_left[s]:
            return
        if s == len(self.slots):
            if self.content_left == 0:
                self.found.append(
                    EdgeLabeledTableau(self.shape, dict(self.boxes), dict(self.edges))
                )
            return
        is_box, i, j = self.slots[s]
        if s > 0 and self.slots[s - 1][2] != j:
            last = 0
        top = min(i, self.mu.length)
        if is_box:
            right = self.boxes.get((i, j + 1))
            if right is not None:
                top = min(top, right)
            for k in range(last + 1, top + 1):
                if not self.take(k):
                    continue
                self.boxes[(i, j)] = k
                self.fill(s + 1, k)
                del self.boxes[(i, j)]
                self.give(k)
        else:
            self.fill_edge(s, last, top, [])

    def fill_edge(self, s: int, last: int, top: int, chosen: List[int]):
        _, i, j = self.slots[s]
        if chosen:
            self.edges[(i, j)] = tuple(chosen)
        self.fill(s + 1, last)
        self.edges.pop((i, j), None)
        for k in range(last + 1, top + 1):
            if self.content_left <= self.boxes_left[s + 1]:
                return
            if not self.take(k):
                continue
            chosen.append(k)
            self.fill_edge(s, k, top, chosen)
            chosen.pop()
            self.give(k)


def enumerate_tableaux(
    lam: Partition,
    mu: Partition,
    nu: Partition,
    require_lattice: bool = True,
    budget: int = 2_000_000,
) -> List[EdgeLabeledTableau]:
    """
    Brute-force every edge-labeled tableau of shape nu/lam with content mu.

    Args:
        lam (Partition): The inner shape.
        mu (Partition): The content.
        nu (Partition): The outer shape.
        require_lattice (bool): Keep only tableaux whose column word is lattice.
        budget (int): Maximum number of label placements tried.

    Returns:
        List[EdgeLabeledTableau]: Valid tableaux in canonical order; empty when lam is not inside nu.
    """
    if not contains(lam, nu):
        return []
    return _Enumerator(lam, mu, nu, require_lattice, budget).run()


def row_statistics(
    tableau: EdgeLabeledTableau, mu_length: Optional[int] = None
) -> RowStatistics:
    """
    Count each label per box row and per edge row.

    Args:
        tableau (EdgeLabeledTableau): The tableau.
        mu_length (Optional[int]): l(mu); defaults to the largest label present.

    Returns:
        RowStatistics: r_k^i and r_k^{i+1/2} over l(nu) rows.
    """
    content = tableau.labels()
    if mu_length is None:
        mu_length = max(content, default=0)
    stats = RowStatistics(nu_length=tableau.shape.num_rows, mu_length=mu_length)
    for (i, _), label in tableau.boxes.items():
        stats.add_box_label(label, i)
    for (i, _), labels in tableau.edges.items():
        for label in labels:
            stats.add_edge_label(label, i)
    return stats


def reconstruct_witness(
    stats: RowStatistics, lam: Partition, mu: Partition, nu: Partition
) -> EdgeLabeledTableau:
    """
    Build the tableau T* of an integer point of the polytope.

    Box labels of row i are placed in increasing order from the left. The
    r_k^{i+1/2} copies of k on edge row i+1/2 occupy the columns ending at
    lam_i + sum_{k' < k} r_{k'}^i, i.e. directly under the last box left of the
    first k of row i.

    Args:
        stats (RowStatistics): An integer point satisfying every constraint family.
        lam (Partition): The inner shape.
        mu (Partition): The content.
        nu (Partition): The outer shape.

    Returns:
        EdgeLabeledTableau: A valid tableau whose column and row words are lattice.
    """
    vector = stats.to_vector()
    if any(isinstance(x, bool) or not isinstance(x, int) for x in vector):
        raise PreconditionError("Witness statistics must be integers.")
    report = check_point(stats, build_constraints(lam, mu, nu))
    if not report:
        raise PreconditionError(
            f"Statistics are not a point of the polytope: {', '.join(report.violations)}."
        )

    shape = SkewShape(outer=nu, inner=lam)
    boxes: Dict[Cell, int] = {}
    edges: Dict[Cell, set] = {}
    for i in range(1, nu.length + 1):
        column = lam.part(i)
        for k in range(1, mu.length + 1):
            count = stats.edge(k, i)
            for j in range(column - count + 1, column + 1):
                if not shape.is_admissible_edge(i, j):
                    raise TableauError(
                        f"Label {k} would sit on inadmissible edge ({i}+1/2,{j})."
                    )
                edges.setdefault((i, j), set()).add(k)
            for _ in range(stats.box(k, i)):
                column += 1
                boxes[(i, column)] = k
    return EdgeLabeledTableau(shape, boxes, edges)


def tableau_to_dict(tableau: EdgeLabeledTableau) -> Dict:
    return {
        "outer": list(tableau.shape.outer.parts),
        "inner": list(tableau.shape.inner.parts),
        "boxes": [[i, j, label] for (i, j), label in sorted(tableau.boxes.items())],
        "edges": [[i, j, sorted(labels)] for (i, j), labels in sorted(tableau.edges.items())],
    }


def tableau_from_dict(payload: Mapping) -> EdgeLabeledTableau:
    try:
        shape = SkewShape(
            outer=Partition(tuple(payload["outer"])),
            inner=Partition(tuple(payload["inner"])),
        )
        boxes = {(int(i), int(j)): int(label) for i, j, label in payload["boxes"]}
        edges = {(int(i), int(j)): frozenset(labels) for i, j, labels in payload["edges"]}
    except (KeyError, TypeError, ValueError) as error:
        raise TableauError(f"Malformed tableau payload: {error}") from error
    return EdgeLabeledTableau(shape, boxes, edges)


def tableau_to_json(tableau: EdgeLabeledTableau) -> str:
    """Serialize to {"outer", "inner", "boxes": [[i,j,label]], "edges": [[i,j,[labels]]]}."""
    return json.dumps(tableau_to_dict(tableau))


def tableau_from_json(data: Union[str, Mapping]) -> EdgeLabeledTableau:
    payload = json.loads(data) if isinstance(data, str) else data
    return tableau_from_dict(payload)


def render_tableau(tableau: EdgeLabeledTableau) -> str:
    """
    Plain-text picture: one line per box row with '.' for cells of the inner shape,
    then one line per nonempty edge row listing `{labels}@column`.
    """
    lines = []
    for i in range(1, tableau.shape.num_rows + 1):
        cells = [
            str(tableau.boxes[(i, j)]) if (i, j) in tableau.boxes else "."
            for j in range(1, tableau.shape.outer.part(i) + 1)
        ]
        lines.append(f"{i}: {' '.join(cells)}")
        row_edges = [
            "{" + ",".join(str(k) for k in tableau.edge(i, j)) + f"}}@{j}"
            for j in range(1, tableau.shape.outer.part(i) + 1)
            if (i, j) in tableau.edges
        ]
        if row_edges:
            lines.append(f"{i}+1/2: {' '.join(row_edges)}")
    return "\n".join(lines)

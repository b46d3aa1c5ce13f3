import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple

from sympy.polys.rings import PolyElement, PolyRing

from src.backend.errors import (
    BudgetExceededError,
    ExpansionError,
    PreconditionError,
    ShiftInvarianceError,
)
from src.backend.partitions import Partition, contains, partitions_in_box
from src.backend.polynomials import (
    beta_ring,
    embed,
    make_ring,
    restrict,
    shift_y,
    split_terms,
    xy_ring,
    y_ring,
)

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


@dataclass(frozen=True)
class PlusDiagram:
    """A set of + positions (row, column) in a rows x columns grid, 1-indexed."""

    rows: int
    columns: int
    positions: FrozenSet[Cell]

    @property
    def size(self) -> int:
        return len(self.positions)

    def row_counts(self) -> List[int]:
        counts = [0] * self.rows
        for r, _ in self.positions:
            counts[r - 1] += 1
        return counts


def _bit(r: int, c: int, columns: int) -> int:
    return 1 << ((r - 1) * columns + (c - 1))


def _decode(bits: int, rows: int, columns: int) -> FrozenSet[Cell]:
    cells = set()
    for r in range(1, rows + 1):
        for c in range(1, columns + 1):
            if bits & _bit(r, c, columns):
                cells.add((r, c))
    return frozenset(cells)


def enumerate_plus_diagrams(lam: Partition, n: int, m: int) -> List[PlusDiagram]:
    """
    Breadth-first closure of the initial diagram of lam under the local move.

    The local move sends a + at (r, c) to (r+1, c+1) when the other three cells
    of that 2x2 square are empty.

    Args:
        lam (Partition): The partition; its diagram starts left-justified in the top rows.
        n (int): Number of grid rows, at least l(lam).
        m (int): Number of grid columns, at least n + lam_1 - 1.

    Returns:
        List[PlusDiagram]: Every reachable diagram in breadth-first order.
    """
    if n < max(lam.length, 1):
        raise PreconditionError(f"{n} rows cannot hold {lam}.")
    if lam.length and m < n + lam.part(1) - 1:
        raise PreconditionError(
            f"Grid of {m} columns is too narrow for {lam} with {n} rows."
        )

    start = 0
    for r in range(1, lam.length + 1):
        for c in range(1, lam.part(r) + 1):
            start |= _bit(r, c, m)

    visited = {start}
    order = [start]
    queue = deque([start])
    while queue:
        bits = queue.popleft()
        for r in range(1, n):
            for c in range(1, m):
                if not bits & _bit(r, c, m):
                    continue
                blockers = _bit(r, c + 1, m) | _bit(r + 1, c, m) | _bit(r + 1, c + 1, m)
                if bits & blockers:
                    continue
                moved = bits ^ _bit(r, c, m) ^ _bit(r + 1, c + 1, m)
                if moved not in visited:
                    visited.add(moved)
                    order.append(moved)
                    queue.append(moved)
    logger.debug("%d plus diagrams for %s in a %dx%d grid.", len(order), lam, n, m)
    return [PlusDiagram(n, m, _decode(bits, n, m)) for bits in order]


def weight_x(diagram: PlusDiagram, horizon: Optional[int] = None) -> PolyElement:
    """The monomial prod_i x_i^{alpha_i}, alpha_i the number of +'s in row i."""
    R = xy_ring(diagram.rows, horizon or diagram.columns)
    monomial = R.one
    for r, count in enumerate(diagram.row_counts()):
        if count:
            monomial = monomial * R.gens[r] ** count
    return monomial


def weight_xy(diagram: PlusDiagram, horizon: Optional[int] = None) -> PolyElement:
    """The product of (x_r - y_c) over the + positions (r, c)."""
    R = xy_ring(diagram.rows, horizon or diagram.columns)
    weight = R.one
    for r, c in sorted(diagram.positions):
        weight = weight * (R.gens[r - 1] - R.gens[diagram.rows + c - 1])
    return weight


def minimal_columns(lam: Partition, n: int) -> int:
    return max(n + lam.part(1) - 1, 1)


@lru_cache(maxsize=None)
def factorial_schur(
    lam: Partition, n: int, columns: Optional[int] = None, horizon: Optional[int] = None
) -> PolyElement:
    """
    s_lam(x_1..x_n; Y) as the sum of weight_xy over the plus diagrams of lam.

    Args:
        lam (Partition): The partition, l(lam) <= n.
        n (int): Number of x-variables.
        columns (Optional[int]): Grid width; the minimal legal width by default.
        horizon (Optional[int]): Number of y-variables of the result ring, at least the grid width.

    Returns:
        PolyElement: An element of Z[x_1..x_n, y_1..y_horizon].
    """
    columns = columns or minimal_columns(lam, n)
    horizon = max(horizon or columns, columns)
    total = xy_ring(n, horizon).zero
    for diagram in enumerate_plus_diagrams(lam, n, columns):
        total = total + weight_xy(diagram, horizon)
    return total


def _horizon(lam: Partition, mu: Partition, n: int) -> int:
    return n + lam.part(1) + mu.part(1)


def interpolation_point(nu: Partition, n: int) -> Tuple[int, ...]:
    """
    Indices (nu_1 + n, nu_2 + n - 1, ..., nu_n + 1) of the y-variables substituted for x.

    s_rho vanishes at this point unless rho is contained in nu, and s_nu does not.
    """
    return tuple(nu.part(r) + n - r + 1 for r in range(1, n + 1))


@lru_cache(maxsize=None)
def evaluate_at_point(rho: Partition, nu: Partition, n: int) -> PolyElement:
    """
    s_rho(x_1..x_n; Y) at the interpolation point of nu, in Z[y_1..y_K], K = n + max(nu_1, rho_1).

    Diagrams with a vanishing factor are skipped before any multiplication.
    """
    Y = y_ring(n + max(nu.part(1), rho.part(1)))
    point = interpolation_point(nu, n)
    total = Y.zero
    for diagram in enumerate_plus_diagrams(rho, n, minimal_columns(rho, n)):
        if any(point[r - 1] == c for r, c in diagram.positions):
            continue
        weight = Y.one
        for r, c in sorted(diagram.positions):
            weight = weight * (Y.gens[point[r - 1] - 1] - Y.gens[c - 1])
        total = total + weight
    return total


@lru_cache(maxsize=None)
def _between(lower: Tuple[Partition, ...], upper: Partition) -> Tuple[Partition, ...]:
    """Partitions rho != upper containing every shape of lower and contained in upper."""
    return tuple(
        rho
        for rho in partitions_in_box(upper.length, upper.part(1))
        if rho != upper and all(contains(shape, rho) for shape in lower)
    )


def _can_appear(lam: Partition, mu: Partition, nu: Partition) -> bool:
    return (
        contains(lam, nu)
        and contains(mu, nu)
        and nu.size <= lam.size + mu.size
        and nu.part(1) <= lam.part(1) + mu.part(1)
    )


@lru_cache(maxsize=None)
def _coefficient(lam: Partition, mu: Partition, nu: Partition, n: int) -> PolyElement:
    """
    C^nu_{lam,mu} with n x-variables, an element of Z[y_1..y_M], M = n + lam_1 + mu_1.

    Setting x_1 = y_1 kills every s_rho with l(rho) = n and turns the others into
    their (n-1)-variable versions in y_2, y_3, ..., so the coefficient is computed
    with the fewest x-variables that hold all three shapes and shifted back up.
    There it is read off s_lam s_mu = sum_rho C^rho s_rho at the interpolation
    point of nu, where only the rho inside nu survive.
    """
    Y = y_ring(_horizon(lam, mu, n))
    if not _can_appear(lam, mu, nu):
        return Y.zero
    least = max(lam.length, mu.length, nu.length, 1)
    if n > least:
        return shift_y(_coefficient(lam, mu, nu, least), n - least)

    numerator = embed(evaluate_at_point(lam, nu, n) * evaluate_at_point(mu, nu, n), Y)
    for rho in _between((lam, mu), nu):
        lower = _coefficient(lam, mu, rho, n)
        if lower:
            numerator = numerator - lower * embed(evaluate_at_point(rho, nu, n), Y)
    quotient, remainder = numerator.div(embed(evaluate_at_point(nu, nu, n), Y))
    if remainder:
        raise ExpansionError(
            f"Coefficient of s{nu} in s{lam} * s{mu} is not a polynomial in Y."
        )
    return quotient


def _check_caps(lam: Partition, mu: Partition, n: int, max_size: int, max_variables: int):
    if lam.size + mu.size > max_size or n > max_variables:
        raise BudgetExceededError(
            f"Expansion of {lam} x {mu} with n={n} exceeds the oracle caps "
            f"(size {max_size}, variables {max_variables})."
        )


def expand_product(
    lam: Partition,
    mu: Partition,
    n: int,
    max_size: int = 13,
    max_variables: int = 7,
) -> Dict[Partition, PolyElement]:
    """
    Expand s_lam(X;Y) s_mu(X;Y) in the factorial Schur basis.

    Args:
        lam (Partition): First factor.
        mu (Partition): Second factor.
        n (int): Number of x-variables, at least l(lam) + l(mu).
        max_size (int): Cap on |lam| + |mu|.
        max_variables (int): Cap on n.

    Returns:
        Dict[Partition, PolyElement]: Nonzero coefficients C_nu in Z[y_1..y_M],
        M = n + lam_1 + mu_1, keyed by nu, largest nu first.
    """
    if n < lam.length + mu.length:
        raise PreconditionError(
            f"n={n} x-variables are too few for {lam} and {mu}."
        )
    _check_caps(lam, mu, n, max_size, max_variables)
    n = max(n, 1)
    expansion = {}
    for nu in partitions_in_box(n, lam.part(1) + mu.part(1)):
        coefficient = _coefficient(lam, mu, nu, n)
        if coefficient:
            expansion[nu] = coefficient
    logger.debug("Expanded s%s * s%s with n=%d into %d terms.", lam, mu, n, len(expansion))
    return dict(
        sorted(
            expansion.items(),
            key=lambda item: (-item[0].size, tuple(-part for part in item[0].parts)),
        )
    )


def _pivot(grouped: Dict[Tuple[int, ...], Dict]) -> Tuple[int, ...]:
    """Largest x-exponent in lex order among those of maximal total degree."""
    top = max(sum(exponent) for exponent in grouped)
    return max(exponent for exponent in grouped if sum(exponent) == top)


def expand_by_elimination(
    lam: Partition,
    mu: Partition,
    n: int,
    max_size: int = 13,
    max_variables: int = 7,
) -> Dict[Partition, PolyElement]:
    """
    Reference expansion of s_lam(X;Y) s_mu(X;Y) by triangular elimination in Z[X, Y].

    Repeatedly takes the leading x-exponent of the remainder as nu and subtracts
    C_nu s_nu(X;Y). Same result as expand_product, far slower past a few boxes.
    """
    if n < lam.length + mu.length:
        raise PreconditionError(
            f"n={n} x-variables are too few for {lam} and {mu}."
        )
    _check_caps(lam, mu, n, max_size, max_variables)
    n = max(n, 1)
    horizon = _horizon(lam, mu, n)
    R = xy_ring(n, horizon)
    Y = y_ring(horizon)
    remainder = factorial_schur(lam, n, horizon=horizon) * factorial_schur(
        mu, n, horizon=horizon
    )

    expansion = {}
    while remainder:
        grouped = split_terms(remainder, n)
        exponent = _pivot(grouped)
        if any(b > a for a, b in zip(exponent, exponent[1:])):
            raise ExpansionError(
                f"Leading x-exponent {exponent} of the remainder is not a partition."
            )
        nu = Partition(exponent)
        if nu in expansion:
            raise ExpansionError(f"Elimination returned to {nu}.")
        expansion[nu] = Y.from_dict(grouped[exponent])
        remainder = remainder - factorial_schur(nu, n, horizon=horizon) * embed(
            expansion[nu], R, n
        )
    return expansion


def oracle_variables(lam: Partition, mu: Partition, nu: Partition) -> int:
    return max(lam.length + mu.length, nu.length, 1)


def lr_coefficient(
    lam: Partition,
    mu: Partition,
    nu: Partition,
    max_size: int = 13,
    max_variables: int = 7,
) -> PolyElement:
    """
    C^nu_{lam,mu} in Z[y_1..y_M] with n = max(l(lam) + l(mu), l(nu)) x-variables.

    Only the coefficients of partitions between lam, mu and nu are computed.
    """
    n = oracle_variables(lam, mu, nu)
    _check_caps(lam, mu, n, max_size, max_variables)
    return _coefficient(lam, mu, nu, n)


def coefficient_is_zero(
    lam: Partition,
    mu: Partition,
    nu: Partition,
    max_size: int = 13,
    max_variables: int = 7,
) -> bool:
    return not lr_coefficient(lam, mu, nu, max_size, max_variables)


def _shift_ring(count: int) -> PolyRing:
    return make_ring(tuple(f"y{i}" for i in range(1, count + 1)) + ("t",))


def is_shift_invariant(poly: PolyElement) -> bool:
    """True iff substituting y_i -> y_i + t for every i leaves the polynomial unchanged."""
    count = poly.ring.ngens
    R = _shift_ring(count)
    lifted = embed(poly, R)
    t = R.gens[count]
    shifted = lifted.compose([(R.gens[i], R.gens[i] + t) for i in range(count)])
    return shifted == lifted


def rewrite_in_beta(poly: PolyElement) -> PolyElement:
    """
    Rewrite a shift-invariant polynomial in the differences b_i = y_{i+1} - y_i.

    Substitutes y_1 -> 0 and y_i -> b_1 + ... + b_{i-1}.

    Args:
        poly (PolyElement): A polynomial in Z[y_1..y_M].

    Returns:
        PolyElement: The same polynomial in Z[b_1..b_{M-1}].
    """
    if not is_shift_invariant(poly):
        raise ShiftInvarianceError(
            "Polynomial is not invariant under the uniform shift of Y."
        )
    count = poly.ring.ngens
    target = beta_ring(count - 1)
    names = tuple(str(symbol) for symbol in poly.ring.symbols) + tuple(
        str(symbol) for symbol in target.symbols
    )
    R = make_ring(names)
    ys, bs = R.gens[:count], R.gens[count:]
    images = [(ys[0], R.zero)]
    partial = R.zero
    for i in range(1, count):
        partial = partial + bs[i - 1]
        images.append((ys[i], partial))
    rewritten = embed(poly, R).compose(images)
    return restrict(rewritten, target, count)


def is_beta_positive(poly: PolyElement) -> bool:
    """True iff every coefficient is a nonnegative integer."""
    return all(coeff >= 0 for coeff in poly.values())

"""
Sparse integer polynomial rings used by the factorial Schur oracle.

Polynomials are `sympy.polys.rings.PolyElement`s over ZZ with graded lex order.
Rings are identified by their generator names, so every helper that needs a
ring builds it from a variable count.
"""

from functools import lru_cache
from typing import Dict, Iterable, Tuple

from sympy import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing, ring

Monomial = Tuple[int, ...]


def _names(prefix: str, count: int, start: int = 1) -> Tuple[str, ...]:
    return tuple(f"{prefix}{index}" for index in range(start, start + count))


@lru_cache(maxsize=None)
def make_ring(names: Tuple[str, ...]) -> PolyRing:
    return ring(",".join(names), ZZ, grlex)[0]


def y_ring(count: int) -> PolyRing:
    """Z[y_1, ..., y_count]; at least one generator."""
    return make_ring(_names("y", max(count, 1)))


def beta_ring(count: int) -> PolyRing:
    """Z[b_1, ..., b_count] for the differences b_i = y_{i+1} - y_i."""
    return make_ring(_names("b", max(count, 1)))


def xy_ring(n: int, horizon: int) -> PolyRing:
    """Z[x_1, ..., x_n, y_1, ..., y_horizon]."""
    return make_ring(_names("x", n) + _names("y", max(horizon, 1)))


def embed(poly: PolyElement, target: PolyRing, offset: int = 0) -> PolyElement:
    """
    Copy a polynomial into a ring with at least as many generators.

    Args:
        poly (PolyElement): The source polynomial.
        target (PolyRing): The destination ring.
        offset (int): Generator i of the source becomes generator i + offset of the target.

    Returns:
        PolyElement: The image, with absent exponents padded by zeros.
    """
    width = target.ngens
    if poly.ring.ngens + offset > width:
        raise ValueError(
            f"Cannot embed {poly.ring.ngens} generators at offset {offset} into {width}."
        )
    terms: Dict[Monomial, int] = {}
    for monom, coeff in poly.items():
        padded = (0,) * offset + tuple(monom)
        terms[padded + (0,) * (width - len(padded))] = coeff
    return target.from_dict(terms)


def restrict(poly: PolyElement, target: PolyRing, start: int) -> PolyElement:
    """
    Keep generators start .. start + target.ngens - 1 of the source.

    The caller guarantees every other exponent is zero.
    """
    stop = start + target.ngens
    return target.from_dict(
        {tuple(monom[start:stop]): coeff for monom, coeff in poly.items()}
    )


def shift_y(poly: PolyElement, offset: int) -> PolyElement:
    """Index shift y_i -> y_{i+offset} of a polynomial in Y."""
    return embed(poly, y_ring(poly.ring.ngens + offset), offset)


def specialize_y_to_zero(poly: PolyElement) -> int:
    """Value of a polynomial in Y at y_1 = y_2 = ... = 0."""
    return int(poly.get((0,) * poly.ring.ngens, 0))


def split_terms(
    poly: PolyElement, n: int
) -> Dict[Monomial, Dict[Monomial, int]]:
    """Group the terms of a polynomial in X and Y by their x-exponent."""
    grouped: Dict[Monomial, Dict[Monomial, int]] = {}
    for monom, coeff in poly.items():
        grouped.setdefault(tuple(monom[:n]), {})[tuple(monom[n:])] = coeff
    return grouped


def _render_monomial(names: Iterable[str], monom: Monomial) -> str:
    factors = []
    for name, power in zip(names, monom):
        if power == 1:
            factors.append(name)
        elif power > 1:
            factors.append(f"{name}^{power}")
    return "*".join(factors)


def render_polynomial(poly: PolyElement) -> str:
    """
    Canonical text form, terms in descending graded lex order.

    Every non-constant term carries its signed coefficient, e.g. "3*y1^2*y2 -1*y3";
    the first term drops a leading "+" and a constant term is a bare integer.
    """
    if not poly:
        return "0"
    names = [str(symbol) for symbol in poly.ring.symbols]
    pieces = []
    for monom, coeff in poly.terms(grlex):
        coeff = int(coeff)
        body = _render_monomial(names, monom)
        text = f"{coeff:+d}*{body}" if body else f"{coeff:+d}"
        pieces.append(text)
    pieces[0] = pieces[0].lstrip("+")
    return " ".join(pieces)

"""Multi-index helpers.

A multi-index is a plain tuple of d naturals.  It indexes monomials,
derivative orders and grid nodes.  The componentwise partial order, the
weight |n|, the factorial n! and the binomial coefficient are the only
structure the rest of the package needs.
"""

from __future__ import annotations

from itertools import product
from math import comb, factorial
from typing import Iterable, Iterator, Tuple

from .errors import DimensionMismatch

Index = Tuple[int, ...]


def check_index(n, dim: int | None = None) -> Index:
    """Validate and normalize a multi-index; entries must be naturals."""
    n = tuple(n)
    for entry in n:
        if not isinstance(entry, int) or isinstance(entry, bool) or entry < 0:
            raise ValueError(f"multi-index entries must be naturals, got {n}")
    if dim is not None and len(n) != dim:
        raise DimensionMismatch(f"expected a {dim}-tuple, got {n}")
    return n


def zero(dim: int) -> Index:
    return (0,) * dim


def unit(dim: int, axis: int) -> Index:
    e = [0] * dim
    e[axis] = 1
    return tuple(e)


def weight(n: Index) -> int:
    """The total order |n|."""
    return sum(n)


def leq(k: Index, n: Index) -> bool:
    """Componentwise partial order k <= n."""
    return all(a <= b for a, b in zip(k, n))


def add(a: Index, b: Index) -> Index:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Index, b: Index) -> Index:
    return tuple(x - y for x, y in zip(a, b))


def index_factorial(n: Index) -> int:
    """n! = n_1! n_2! ... n_d!"""
    out = 1
    for entry in n:
        out *= factorial(entry)
    return out


def index_binomial(n: Index, k: Index) -> int:
    """Product of componentwise binomial coefficients; zero unless k <= n."""
    out = 1
    for a, b in zip(n, k):
        out *= comb(a, b)
    return out


def grlex_key(n: Index):
    """Sort key for graded lexicographic order (by |n|, then lex)."""
    return (sum(n), n)


def indices_leq(n: Index) -> Iterator[Index]:
    """All k with k <= n, in graded-lex order."""
    return iter(sorted(product(*(range(a + 1) for a in n)), key=grlex_key))


def indices_of_weight(dim: int, w: int) -> Iterator[Index]:
    """All indices of weight exactly w, in ascending lex order."""
    if dim == 1:
        yield (w,)
        return
    for first in range(w + 1):
        for rest in indices_of_weight(dim - 1, w - first):
            yield (first,) + rest


def indices_up_to_weight(dim: int, maxweight: int) -> Iterator[Index]:
    """All indices with |n| <= maxweight, in graded-lex order."""
    for w in range(maxweight + 1):
        yield from indices_of_weight(dim, w)


def sorted_grlex(indices: Iterable[Index]) -> list:
    return sorted(indices, key=grlex_key)

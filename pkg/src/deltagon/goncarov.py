"""Interpolation polynomials biorthogonal to grid-shifted delta operators.

Given a delta system and an assignment of a rational node z_k to each
multi-index, the polynomial t_n is the unique element of the span of the
basic polynomials p_k (k <= n) whose k-th mixed operator power evaluates
at z_k to n! when k = n and to 0 otherwise.  The canonical algorithm is
the triangular recurrence

    t_n = p_n - sum over k < n of binom(n, k) p_{n-k}(z_k) t_k,

filled bottom-up in graded-lex order.  A dense linear solve of the
defining conditions in the monomial basis is kept as an independent test
oracle.  Tables populate on demand; entries are immutable once written,
and equal-grade entries may be filled concurrently after all lower grades
exist (the --jobs path).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

from . import linalg
from . import multiindex as mi
from .errors import (
    DimensionMismatch,
    MissingNode,
    MissingValue,
    NotInSpan,
)
from .mpoly import MPoly
from .operators import DeltaSystem, SeparableSystem
from .rationals import Q, ZERO
from .sequences import BasicSequence


class LowerSet:
    """A finite downward-closed set of multi-indices."""

    __slots__ = ("dim", "indices")

    def __init__(self, indices: Iterable):
        indices = {tuple(idx) for idx in indices}
        if not indices:
            raise ValueError("a lower set must be nonempty")
        dims = {len(idx) for idx in indices}
        if len(dims) != 1:
            raise DimensionMismatch("mixed index lengths in lower set")
        dim = dims.pop()
        for idx in indices:
            mi.check_index(idx, dim)
            for axis in range(dim):
                if idx[axis] and mi.sub(idx, mi.unit(dim, axis)) not in indices:
                    raise ValueError(
                        f"not downward closed: {idx} present but "
                        f"{mi.sub(idx, mi.unit(dim, axis))} missing"
                    )
        self.dim = dim
        self.indices = tuple(sorted(indices, key=mi.grlex_key))

    @classmethod
    def box(cls, n) -> "LowerSet":
        """All k <= n."""
        return cls(mi.indices_leq(tuple(n)))

    @classmethod
    def with_max_weight(cls, dim: int, maxdeg: int) -> "LowerSet":
        return cls(mi.indices_up_to_weight(dim, maxdeg))

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, idx):
        return tuple(idx) in set(self.indices)


# ----------------------------------------------------------------------
# grids

class InterpolationGrid:
    """Assignment of an exact rational node to each multi-index."""

    dim: int

    def node(self, idx) -> tuple:
        raise NotImplementedError

    def translated(self, v) -> "InterpolationGrid":
        """The grid with every node moved by v."""
        v = tuple(Q(c) for c in v)
        if len(v) != self.dim:
            raise DimensionMismatch("shift length does not match grid dimension")
        base = self
        return RuleGrid(
            self.dim, lambda idx: tuple(a + b for a, b in zip(base.node(idx), v))
        )


class TableGrid(InterpolationGrid):
    """Grid given extensionally: an explicit node per index."""

    def __init__(self, dim: int, nodes: Mapping):
        self.dim = dim
        table = {}
        for idx, node in nodes.items():
            idx = mi.check_index(idx, dim)
            node = tuple(Q(c) for c in node)
            if len(node) != dim:
                raise DimensionMismatch(f"node at {idx} has length {len(node)}")
            table[idx] = node
        self._nodes = table

    def node(self, idx) -> tuple:
        idx = mi.check_index(idx, self.dim)
        got = self._nodes.get(idx)
        if got is None:
            raise MissingNode(idx)
        return got


class RuleGrid(InterpolationGrid):
    """Grid given intensionally by a rule; nodes materialize lazily."""

    def __init__(self, dim: int, rule: Callable):
        self.dim = dim
        self._rule = rule
        self._cache: dict = {}

    def node(self, idx) -> tuple:
        idx = mi.check_index(idx, self.dim)
        got = self._cache.get(idx)
        if got is None:
            got = tuple(Q(c) for c in self._rule(idx))
            if len(got) != self.dim:
                raise DimensionMismatch(f"rule produced a node of length {len(got)}")
            self._cache[idx] = got
        return got


# ----------------------------------------------------------------------
# the table and the recurrence

class GoncarovTable:
    """Memoized interpolation polynomials for one system and one grid."""

    def __init__(self, system: DeltaSystem, grid: InterpolationGrid,
                 basic: BasicSequence | None = None):
        if grid.dim != system.dim:
            raise DimensionMismatch(
                f"system dimension {system.dim}, grid dimension {grid.dim}"
            )
        self.system = system
        self.grid = grid
        self.basic = basic if basic is not None else BasicSequence(system)
        self.entries: dict = {}

    @property
    def dim(self) -> int:
        return self.system.dim

    def poly(self, n) -> MPoly:
        n = mi.check_index(n, self.dim)
        got = self.entries.get(n)
        if got is not None:
            return got
        for k in mi.indices_leq(n):  # graded order: dependencies come first
            if k not in self.entries:
                self.entries[k] = self._solve(k)
        return self.entries[n]

    def __getitem__(self, n) -> MPoly:
        return self.poly(n)

    def _solve(self, n) -> MPoly:
        acc = self.basic.poly(n)
        for k in mi.indices_leq(n):
            if k == n:
                continue
            value = self.basic.poly(mi.sub(n, k)).evaluate(self.grid.node(k))
            if value:
                acc = acc - self.entries[k] * (mi.index_binomial(n, k) * value)
        return acc

    def populate(self, maxdeg: int, jobs: int = 1) -> dict:
        """Fill all |n| <= maxdeg; equal grades may be solved in parallel."""
        if jobs < 1:
            raise ValueError("jobs must be >= 1")
        for w in range(maxdeg + 1):
            grade = [
                n for n in mi.indices_of_weight(self.dim, w)
                if n not in self.entries
            ]
            if not grade:
                continue
            if jobs == 1 or len(grade) == 1:
                solved = map(self._solve, grade)
            else:
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    solved = list(pool.map(self._solve, grade))
            for n, t_n in zip(grade, solved):
                self.entries[n] = t_n
        return {
            n: self.entries[n]
            for n in mi.indices_up_to_weight(self.dim, maxdeg)
        }


def goncarov_poly(system: DeltaSystem, grid: InterpolationGrid, n,
                  basic: BasicSequence | None = None) -> MPoly:
    """One interpolation polynomial via the triangular recurrence."""
    return GoncarovTable(system, grid, basic=basic).poly(n)


def dense_goncarov_poly(system: SeparableSystem, grid: InterpolationGrid, n) -> MPoly:
    """Independent oracle: impose the defining conditions in the monomial basis.

    Writes t as an unknown combination of the monomials x^m, m <= n, and
    solves the square linear system of interpolation conditions by exact
    elimination.  Valid for separable systems, where those monomials span
    the same space as the basic polynomials p_k, k <= n.
    """
    if not isinstance(system, SeparableSystem):
        raise TypeError("the monomial-basis oracle needs a separable system")
    n = mi.check_index(n, system.dim)
    box = list(mi.indices_leq(n))
    columns = {m: MPoly.monomial(system.dim, m) for m in box}
    rows = []
    rhs = []
    for k in box:
        node = grid.node(k)
        rows.append(
            [system.apply_power(k, columns[m]).evaluate(node) for m in box]
        )
        rhs.append(Q(mi.index_factorial(n)) if k == n else ZERO)
    solution = linalg.solve(rows, rhs)
    out = MPoly.zero(system.dim)
    for m, c in zip(box, solution):
        if c:
            out = out + MPoly.monomial(system.dim, m, c)
    return out


# ----------------------------------------------------------------------
# biorthogonality, interpolation, expansion

@dataclass(frozen=True)
class BiorthogonalityReport:
    passed: bool
    witness: Optional[tuple]  # (k, n) of the first violated condition
    checked_degree: int


def biorthogonality_check(system: DeltaSystem, grid: InterpolationGrid,
                          maxdeg: int, table: Mapping | None = None) -> BiorthogonalityReport:
    """Evaluate every condition epsilon(z_k) d^k t_n = n! [k = n], k <= n <= maxdeg."""
    if table is None:
        table = GoncarovTable(system, grid).populate(maxdeg)
    d = system.dim
    for n in mi.indices_up_to_weight(d, maxdeg):
        t_n = table[n]
        images = {mi.zero(d): t_n}
        for k in mi.indices_leq(n):
            if k not in images:
                axis = next(i for i, e in enumerate(k) if e)
                below = mi.sub(k, mi.unit(d, axis))
                images[k] = system.ops[axis].apply(images[below])
            expected = Q(mi.index_factorial(n)) if k == n else ZERO
            if images[k].evaluate(grid.node(k)) != expected:
                return BiorthogonalityReport(False, (k, n), maxdeg)
    return BiorthogonalityReport(True, None, maxdeg)


def interpolation_solve(system: DeltaSystem, grid: InterpolationGrid,
                        lower_set: LowerSet, values: Mapping,
                        basic: BasicSequence | None = None) -> MPoly:
    """The unique polynomial matching the prescribed operator values.

    For each k in the lower set, applying the k-th mixed operator power and
    evaluating at z_k must give values[k]; the solution is the combination
    sum of values[k]/k! times t_k.
    """
    table = GoncarovTable(system, grid, basic=basic)
    out = MPoly.zero(system.dim)
    for k in lower_set:
        if k not in values:
            raise MissingValue(k)
        b_k = Q(values[k])
        if b_k:
            out = out + table.poly(k) * (b_k / mi.index_factorial(k))
    return out


def expand_in_goncarov(system: DeltaSystem, grid: InterpolationGrid,
                       p: MPoly, lower_set: LowerSet,
                       basic: BasicSequence | None = None) -> dict:
    """Coefficients of p in the interpolation basis over the lower set.

    c_k = epsilon(z_k) d^k p / k!; reassembling sum c_k t_k must reproduce
    p exactly, otherwise p lies outside the span and NotInSpan is raised.
    """
    if p.dim != system.dim:
        raise DimensionMismatch("polynomial dimension does not match the system")
    table = GoncarovTable(system, grid, basic=basic)
    coeffs = {}
    reassembled = MPoly.zero(system.dim)
    for k in lower_set:
        c_k = system.apply_power(k, p).evaluate(grid.node(k)) / mi.index_factorial(k)
        coeffs[k] = c_k
        if c_k:
            reassembled = reassembled + table.poly(k) * c_k
    if reassembled != p:
        raise NotInSpan(
            "polynomial is not in the span of the basis over the given lower set"
        )
    return coeffs

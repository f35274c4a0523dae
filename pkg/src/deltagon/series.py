"""Truncated multivariate formal power series and admissible systems.

A TruncatedSeries carries an explicit total-degree order N and only stores
coefficients with |n| <= N.  Binary operations truncate to the minimum of
the two orders; asking for a coefficient beyond the order raises
InsufficientOrder instead of silently zero-filling.  A SeriesSystem bundles
d series in d variables; when each component vanishes at the origin and the
linear part is nonsingular, the system has a unique compositional inverse,
computed here order by order.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from . import linalg
from . import multiindex as mi
from .errors import (
    DimensionMismatch,
    InsufficientOrder,
    NonzeroConstantTerm,
    SingularJacobian,
    ZeroConstantTerm,
)
from .rationals import Q, Rational, ZERO


def _coerce_scalar(value) -> Rational:
    if isinstance(value, float):
        raise TypeError("floating-point coefficients rejected")
    return Q(value)


class TruncatedSeries:
    """Formal power series truncated at a fixed total order."""

    __slots__ = ("dim", "order", "terms")

    def __init__(self, dim: int, order: int, terms: Mapping | None = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        if order < 0:
            raise ValueError("order must be >= 0")
        clean = {}
        if terms:
            for exp, coef in terms.items():
                exp = mi.check_index(exp, dim)
                if sum(exp) > order:
                    raise InsufficientOrder(
                        f"index {exp} exceeds declared order {order}"
                    )
                coef = _coerce_scalar(coef)
                if coef:
                    clean[exp] = coef
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def _raw(cls, dim: int, order: int, terms: dict) -> "TruncatedSeries":
        self = object.__new__(cls)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "terms", terms)
        return self

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, dim: int, order: int) -> "TruncatedSeries":
        return cls._raw(dim, order, {})

    @classmethod
    def one(cls, dim: int, order: int) -> "TruncatedSeries":
        return cls.constant(dim, order, 1)

    @classmethod
    def constant(cls, dim: int, order: int, value) -> "TruncatedSeries":
        value = _coerce_scalar(value)
        return cls._raw(dim, order, {mi.zero(dim): value} if value else {})

    @classmethod
    def variable(cls, dim: int, axis: int, order: int) -> "TruncatedSeries":
        if order < 1:
            raise ValueError("order must be >= 1 to hold a variable")
        return cls._raw(dim, order, {mi.unit(dim, axis): Q(1)})

    @classmethod
    def linear_form(cls, coeffs: Sequence, order: int) -> "TruncatedSeries":
        """The series c_1 x_1 + ... + c_d x_d."""
        dim = len(coeffs)
        terms = {}
        for axis, c in enumerate(coeffs):
            c = _coerce_scalar(c)
            if c:
                terms[mi.unit(dim, axis)] = c
        return cls._raw(dim, order, terms)

    # ------------------------------------------------------------------
    # structure

    def coefficient(self, exp) -> Rational:
        exp = mi.check_index(exp, self.dim)
        if sum(exp) > self.order:
            raise InsufficientOrder(
                f"coefficient at {exp} beyond truncation order {self.order}"
            )
        return self.terms.get(exp, ZERO)

    @property
    def constant_term(self) -> Rational:
        return self.terms.get(mi.zero(self.dim), ZERO)

    @property
    def valuation(self):
        """Weight of the lowest nonzero term, or None for the zero series."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def truncate(self, order: int) -> "TruncatedSeries":
        """Lower the order, dropping the tail; raising it is not allowed."""
        if order > self.order:
            raise InsufficientOrder(
                f"cannot extend a series of order {self.order} to {order}"
            )
        if order == self.order:
            return self
        return TruncatedSeries._raw(
            self.dim, order, {e: c for e, c in self.terms.items() if sum(e) <= order}
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        """Exact equality of order and coefficients.

        Use compare_truncated for comparison of series of different orders.
        """
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.order == other.order
            and self.terms == other.terms
        )

    __hash__ = None

    def compare_truncated(self, other: "TruncatedSeries") -> bool:
        """Equality at the minimum of the two orders."""
        self._check_same_dim(other)
        n = min(self.order, other.order)
        return self.truncate(n).terms == other.truncate(n).terms

    def __repr__(self) -> str:
        body = ", ".join(
            f"{e}: {c}" for e, c in sorted(self.terms.items(), key=lambda t: mi.grlex_key(t[0]))
        )
        return f"TruncatedSeries(d={self.dim}, N={self.order}, {{{body}}})"

    def _check_same_dim(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch(
                f"series of dimension {self.dim} and {other.dim}"
            )

    # ------------------------------------------------------------------
    # ring operations

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_same_dim(other)
        order = min(self.order, other.order)
        out = {e: c for e, c in self.terms.items() if sum(e) <= order}
        for exp, coef in other.terms.items():
            if sum(exp) > order:
                continue
            acc = out.get(exp)
            if acc is None:
                out[exp] = coef
            else:
                acc = acc + coef
                if acc:
                    out[exp] = acc
                else:
                    del out[exp]
        return TruncatedSeries._raw(self.dim, order, out)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return TruncatedSeries._raw(
            self.dim, self.order, {e: -c for e, c in self.terms.items()}
        )

    def scale(self, scalar) -> "TruncatedSeries":
        scalar = _coerce_scalar(scalar)
        if not scalar:
            return TruncatedSeries.zero(self.dim, self.order)
        return TruncatedSeries._raw(
            self.dim, self.order, {e: c * scalar for e, c in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_same_dim(other)
            order = min(self.order, other.order)
            out = {}
            for ea, ca in self.terms.items():
                wa = sum(ea)
                if wa > order:
                    continue
                budget = order - wa
                for eb, cb in other.terms.items():
                    if sum(eb) > budget:
                        continue
                    exp = mi.add(ea, eb)
                    prod = ca * cb
                    acc = out.get(exp)
                    out[exp] = prod if acc is None else acc + prod
            return TruncatedSeries._raw(
                self.dim, order, {e: c for e, c in out.items() if c}
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("series powers must be naturals (invert first for negatives)")
        out = TruncatedSeries.one(self.dim, self.order)
        for _ in range(n):
            out = out * self
        return out

    # ------------------------------------------------------------------
    # transcendental and inverse operations

    def exp(self) -> "TruncatedSeries":
        """exp of a series with zero constant term, truncated at the order."""
        if self.constant_term:
            raise NonzeroConstantTerm("exp needs a zero constant term")
        acc = TruncatedSeries.one(self.dim, self.order)
        term = acc
        for j in range(1, self.order + 1):
            term = (term * self).scale(Q(1, j))
            if not term:
                break
            acc = acc + term
        return acc

    def reciprocal(self) -> "TruncatedSeries":
        """Series r with self * r = 1 up to the order."""
        a0 = self.constant_term
        if not a0:
            raise ZeroConstantTerm("reciprocal needs a nonzero constant term")
        inv0 = 1 / a0
        rest = [(e, c) for e, c in self.terms.items() if any(e)]
        out = {mi.zero(self.dim): inv0}
        for w in range(1, self.order + 1):
            for exp in mi.indices_of_weight(self.dim, w):
                acc = ZERO
                for ke, kc in rest:
                    if mi.leq(ke, exp):
                        prev = out.get(mi.sub(exp, ke))
                        if prev is not None:
                            acc = acc + kc * prev
                if acc:
                    out[exp] = -acc * inv0
        return TruncatedSeries._raw(
            self.dim, self.order, {e: c for e, c in out.items() if c}
        )

    def compose(self, system) -> "TruncatedSeries":
        """Substitute a system with zero constant terms into this series."""
        components = _components_of(system)
        if len(components) != self.dim:
            raise DimensionMismatch(
                f"series in {self.dim} variables composed with {len(components)} components"
            )
        order = min([self.order] + [s.order for s in components])
        for i, comp in enumerate(components):
            if comp.constant_term:
                raise NonzeroConstantTerm(
                    f"component {i} has nonzero constant term", component=i
                )
        powers = _MonomialPowers(components, order)
        out = TruncatedSeries.zero(components[0].dim, order)
        for exp, coef in sorted(self.terms.items(), key=lambda t: mi.grlex_key(t[0])):
            if sum(exp) > order:
                continue
            out = out + powers.get(exp).scale(coef)
        return out


class _MonomialPowers:
    """Shared cache of products s_1^{n_1} ... s_d^{n_d}, truncated."""

    def __init__(self, components, order: int):
        self.components = components
        self.order = order
        dim = components[0].dim
        self.cache = {mi.zero(len(components)): TruncatedSeries.one(dim, order)}

    def get(self, exp) -> TruncatedSeries:
        got = self.cache.get(exp)
        if got is not None:
            return got
        axis = next(i for i, e in enumerate(exp) if e)
        prev = self.get(mi.sub(exp, mi.unit(len(exp), axis)))
        got = prev * self.components[axis]
        self.cache[exp] = got
        return got


def _components_of(system) -> tuple:
    if isinstance(system, SeriesSystem):
        return system.components
    return tuple(system)


def _with_order(series: TruncatedSeries, order: int) -> TruncatedSeries:
    # internal re-declaration of the order; extension treats the unknown
    # tail as zero, so callers must own that semantics
    if order <= series.order:
        return series.truncate(order)
    return TruncatedSeries._raw(series.dim, order, dict(series.terms))


class SeriesSystem:
    """d truncated series in d variables with a common order."""

    __slots__ = ("dim", "order", "components")

    def __init__(self, components: Sequence[TruncatedSeries]):
        components = tuple(components)
        if not components:
            raise ValueError("a system needs at least one component")
        dim = len(components)
        for comp in components:
            if comp.dim != dim:
                raise DimensionMismatch(
                    f"{dim} components but component dimension {comp.dim}"
                )
        order = min(comp.order for comp in components)
        components = tuple(comp.truncate(order) for comp in components)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "components", components)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesSystem is immutable")

    @classmethod
    def identity(cls, dim: int, order: int) -> "SeriesSystem":
        return cls([TruncatedSeries.variable(dim, i, order) for i in range(dim)])

    def __getitem__(self, i) -> TruncatedSeries:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        if not isinstance(other, SeriesSystem):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def jacobian(self) -> list:
        """J[i][j] = coefficient of x_j in component i (linear part)."""
        return [
            [comp.terms.get(mi.unit(self.dim, j), ZERO) for j in range(self.dim)]
            for comp in self.components
        ]

    def check_admissible(self):
        """Raise NonzeroConstantTerm or SingularJacobian unless admissible."""
        for i, comp in enumerate(self.components):
            if comp.constant_term:
                raise NonzeroConstantTerm(
                    f"component {i} has nonzero constant term", component=i
                )
        if not linalg.determinant(self.jacobian()):
            raise SingularJacobian("linear part of the system is singular")

    @property
    def is_admissible(self) -> bool:
        try:
            self.check_admissible()
        except (NonzeroConstantTerm, SingularJacobian):
            return False
        return True

    def compose(self, inner: "SeriesSystem") -> "SeriesSystem":
        """Componentwise substitution self_i(inner_1, ..., inner_d)."""
        return SeriesSystem([comp.compose(inner) for comp in self.components])

    def inverse(self) -> "SeriesSystem":
        """The unique compositional inverse g with self(g) = g(self) = id.

        The linear part of g is the inverse Jacobian; higher orders come from
        the fixpoint iteration g <- J^{-1} (x - f_{>=2}(g)), which fixes one
        extra order per round, so round r runs at truncation order r.
        """
        self.check_admissible()
        dim, order = self.dim, self.order
        jac_inv = linalg.invert(self.jacobian())
        higher = [
            TruncatedSeries._raw(
                dim, order, {e: c for e, c in comp.terms.items() if sum(e) >= 2}
            )
            for comp in self.components
        ]
        identity = SeriesSystem.identity(dim, order)

        def linear_solve(vec, at_order):
            # apply J^{-1} to a vector of series
            comps = []
            for i in range(dim):
                acc = TruncatedSeries.zero(dim, at_order)
                for j in range(dim):
                    if jac_inv[i][j]:
                        acc = acc + vec[j].truncate(at_order).scale(jac_inv[i][j])
                comps.append(acc)
            return comps

        g = linear_solve(identity.components, 1)
        for r in range(2, order + 1):
            # zero-extending the previous iterate is the fixpoint's initial
            # guess for the new top order, not silent zero-filling
            powers = _MonomialPowers([_with_order(comp, r) for comp in g], r)
            corrected = []
            for i in range(dim):
                h = TruncatedSeries.zero(dim, r)
                for exp, coef in higher[i].terms.items():
                    if sum(exp) <= r:
                        h = h + powers.get(exp).scale(coef)
                corrected.append(identity.components[i].truncate(r) - h)
            g = linear_solve(corrected, r)
        return SeriesSystem(g)


def exp_of_linear(coeffs: Sequence, order: int) -> TruncatedSeries:
    """exp(c . x) with exact coefficients c^n / n!."""
    dim = len(coeffs)
    cs = [_coerce_scalar(c) for c in coeffs]
    terms = {}
    for exp in mi.indices_up_to_weight(dim, order):
        coef = Q(1, mi.index_factorial(exp))
        for axis, e in enumerate(exp):
            if e:
                coef = coef * cs[axis] ** e
        if coef:
            terms[exp] = coef
    return TruncatedSeries._raw(dim, order, terms)

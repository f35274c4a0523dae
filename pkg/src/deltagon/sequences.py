"""Basic sequences of delta systems and their generating-function identities.

The basic sequence of a system is pinned down by three axioms: p_n has
total degree |n|, p_0 = 1 with p_n(0) = 0 otherwise, and the i-th operator
lowers p_n to n_i p_{n - e_i}.  Two computation paths are implemented and
cross-checked: separable systems take the product of univariate
polynomials obtained from the invertible-factor power formula, and general
admissible systems read coefficients off exp(x . g(y)) where g is the
compositional inverse of the indicator system.

PolySeries is a series in auxiliary variables y whose coefficients are
polynomials in x; it hosts both sides of the Appell-style identities,
which are checked coefficient by coefficient, exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

from . import multiindex as mi
from .errors import DimensionMismatch, InsufficientOrder, NonzeroConstantTerm
from .mpoly import MPoly
from .operators import DeltaSystem, SeparableSystem, ShiftInvariantOp
from .rationals import Q, ZERO
from .series import TruncatedSeries, _MonomialPowers, exp_of_linear


class BasicSequence:
    """Demand-driven table of the basic polynomials of a delta system."""

    def __init__(self, system: DeltaSystem):
        self.system = system
        self._table: dict = {}
        self._univariate: dict = {}
        self._gf: Optional[Tuple[int, "PolySeries"]] = None

    @property
    def dim(self) -> int:
        return self.system.dim

    def poly(self, idx) -> MPoly:
        idx = mi.check_index(idx, self.dim)
        got = self._table.get(idx)
        if got is None:
            if isinstance(self.system, SeparableSystem):
                got = self._product_poly(idx)
            else:
                got = self.poly_via_generating_function(idx)
            self._table[idx] = got
        return got

    def table(self, maxdeg: int) -> dict:
        """All basic polynomials with |n| <= maxdeg, keyed by index."""
        if not isinstance(self.system, SeparableSystem):
            self._ensure_gf(maxdeg)
        return {idx: self.poly(idx) for idx in mi.indices_up_to_weight(self.dim, maxdeg)}

    # ------------------------------------------------------------------
    # separable path: product of univariate basic polynomials

    def univariate(self, axis: int, n: int) -> MPoly:
        """The n-th basic polynomial of the single operator on one axis.

        Computed as x L^{-n}(x^{n-1}) with L the invertible factor; the
        result is a polynomial in x_axis alone, of exact degree n.
        """
        if not isinstance(self.system, SeparableSystem):
            raise TypeError("univariate basic polynomials need a separable system")
        key = (axis, n)
        got = self._univariate.get(key)
        if got is not None:
            return got
        d = self.dim
        if n == 0:
            got = MPoly.one(d)
        else:
            inv_power = ShiftInvariantOp(self.system.factors[axis].power(-n))
            exponent = tuple((n - 1) if j == axis else 0 for j in range(d))
            got = MPoly.variable(d, axis) * inv_power.apply(MPoly.monomial(d, exponent))
        self._univariate[key] = got
        return got

    def _product_poly(self, idx) -> MPoly:
        out = MPoly.one(self.dim)
        for axis, n in enumerate(idx):
            if n:
                out = out * self.univariate(axis, n)
        return out

    # ------------------------------------------------------------------
    # generating-function path: p_n = n! [y^n] exp(x . g(y))

    def poly_via_generating_function(self, idx) -> MPoly:
        idx = mi.check_index(idx, self.dim)
        self._ensure_gf(sum(idx))
        return self._gf[1].coefficient(idx) * mi.index_factorial(idx)

    def _ensure_gf(self, order: int):
        order = max(order, 1)  # an admissible system needs room for its linear part
        if self._gf is not None and self._gf[0] >= order:
            return
        d = self.dim
        g = self.system.inverse_indicator_series(order)
        arg_terms = {}
        for gamma in mi.indices_up_to_weight(d, order):
            if not any(gamma):
                continue
            coeff = MPoly.zero(d)
            for i, comp in enumerate(g.components):
                c = comp.terms.get(gamma)
                if c:
                    coeff = coeff + MPoly.monomial(d, mi.unit(d, i), c)
            if not coeff.is_zero:
                arg_terms[gamma] = coeff
        arg = PolySeries(d, d, order, arg_terms)
        self._gf = (order, arg.exp())


def basic_univariate(system: SeparableSystem, axis: int, n: int) -> MPoly:
    """One-off univariate basic polynomial (see BasicSequence.univariate)."""
    return BasicSequence(system).univariate(axis, n)


def basic_multivariate(system: DeltaSystem, idx, method: str = "auto") -> MPoly:
    """One-off multivariate basic polynomial.

    method: "auto" picks the product path on separable systems and the
    generating function otherwise; "product" and "generating_function"
    force a path.
    """
    seq = BasicSequence(system)
    if method == "auto":
        return seq.poly(idx)
    if method == "product":
        if not isinstance(system, SeparableSystem):
            raise TypeError("product path needs a separable system")
        idx = mi.check_index(idx, system.dim)
        out = MPoly.one(system.dim)
        for axis, n in enumerate(idx):
            if n:
                out = out * seq.univariate(axis, n)
        return out
    if method == "generating_function":
        return seq.poly_via_generating_function(idx)
    raise ValueError(f"unknown method {method!r}")


# ----------------------------------------------------------------------
# axiom and identity checks

@dataclass(frozen=True)
class BasicAxiomReport:
    """Outcome of the three defining axioms over a polynomial table."""

    degree_ok: bool
    degree_witness: Optional[tuple]
    normalization_ok: bool
    normalization_witness: Optional[tuple]
    lowering_ok: bool
    lowering_witness: Optional[tuple]

    @property
    def passed(self) -> bool:
        return self.degree_ok and self.normalization_ok and self.lowering_ok


def verify_basic_properties(system: DeltaSystem, table: Mapping, maxdeg: int) -> BasicAxiomReport:
    """Check the basic-sequence axioms on a table of candidate polynomials."""
    d = system.dim
    degree_ok, degree_witness = True, None
    norm_ok, norm_witness = True, None
    lower_ok, lower_witness = True, None
    origin = [0] * d
    for idx in mi.indices_up_to_weight(d, maxdeg):
        p = table[idx]
        if degree_ok and p.degree != (sum(idx) if any(idx) else 0):
            degree_ok, degree_witness = False, idx
        if norm_ok:
            if not any(idx):
                if p != MPoly.one(d):
                    norm_ok, norm_witness = False, idx
            elif p.evaluate(origin):
                norm_ok, norm_witness = False, idx
        if lower_ok:
            for axis in range(d):
                image = system.ops[axis].apply(p)
                if idx[axis] == 0:
                    expected = MPoly.zero(d)
                else:
                    expected = table[mi.sub(idx, mi.unit(d, axis))] * idx[axis]
                if image != expected:
                    lower_ok, lower_witness = False, idx
                    break
    return BasicAxiomReport(
        degree_ok, degree_witness, norm_ok, norm_witness, lower_ok, lower_witness
    )


@dataclass(frozen=True)
class BinomialReport:
    passed: bool
    witness: Optional[tuple]


def binomial_identity_check(table: Mapping, maxdeg: int, dim: int) -> BinomialReport:
    """Check q_n(x + y) = sum of binom(n,k) q_k(x) q_{n-k}(y), exactly.

    The identity is tested as a polynomial identity in 2*dim variables for
    every |n| <= maxdeg; returns the first failing index in graded order.
    """
    first = {}
    second = {}
    summed = {}
    for idx in mi.indices_up_to_weight(dim, maxdeg):
        p = table[idx]
        first[idx] = _embed(p, dim, 0)
        second[idx] = _embed(p, dim, dim)
        summed[idx] = _substitute_pair_sum(p)
    for idx in mi.indices_up_to_weight(dim, maxdeg):
        rhs = MPoly.zero(2 * dim)
        for k in mi.indices_leq(idx):
            rhs = rhs + first[k] * second[mi.sub(idx, k)] * mi.index_binomial(idx, k)
        if summed[idx] != rhs:
            return BinomialReport(False, idx)
    return BinomialReport(True, None)


def _embed(p: MPoly, dim: int, offset: int) -> MPoly:
    """View a d-variable polynomial inside 2d variables at the given block."""
    pad = [0] * (2 * dim)
    terms = {}
    for exp, coef in p.terms.items():
        e = list(pad)
        e[offset:offset + dim] = exp
        terms[tuple(e)] = coef
    return MPoly._raw(2 * dim, terms)


def _substitute_pair_sum(p: MPoly) -> MPoly:
    """p(x_1 + y_1, ..., x_d + y_d) as a polynomial in 2d variables."""
    from math import comb

    dim = p.dim
    out = {}
    for exp, coef in p.terms.items():
        partial = {(): coef}
        for e in exp:
            grown = {}
            for prefix, c in partial.items():
                for j in range(e + 1):
                    key = prefix + (j,)
                    term = c * comb(e, j)
                    acc = grown.get(key)
                    grown[key] = term if acc is None else acc + term
            partial = grown
        for split, c in partial.items():
            key = tuple(split) + tuple(a - b for a, b in zip(exp, split))
            acc = out.get(key)
            out[key] = c if acc is None else acc + c
    return MPoly._raw(2 * dim, {e: c for e, c in out.items() if c})


# ----------------------------------------------------------------------
# series with polynomial coefficients

class PolySeries:
    """Truncated series in y whose coefficients are polynomials in x."""

    __slots__ = ("ydim", "xdim", "order", "terms")

    def __init__(self, ydim: int, xdim: int, order: int, terms: Mapping | None = None):
        clean = {}
        if terms:
            for exp, poly in terms.items():
                exp = mi.check_index(exp, ydim)
                if sum(exp) > order:
                    raise InsufficientOrder(f"index {exp} exceeds order {order}")
                if not isinstance(poly, MPoly) or poly.dim != xdim:
                    raise DimensionMismatch(
                        f"coefficient at {exp} must be an MPoly in {xdim} variables"
                    )
                if not poly.is_zero:
                    clean[exp] = poly
        self.ydim = ydim
        self.xdim = xdim
        self.order = order
        self.terms = clean

    @classmethod
    def _raw(cls, ydim, xdim, order, terms) -> "PolySeries":
        self = object.__new__(cls)
        self.ydim = ydim
        self.xdim = xdim
        self.order = order
        self.terms = terms
        return self

    @classmethod
    def zero(cls, ydim, xdim, order) -> "PolySeries":
        return cls._raw(ydim, xdim, order, {})

    @classmethod
    def one(cls, ydim, xdim, order) -> "PolySeries":
        return cls._raw(ydim, xdim, order, {mi.zero(ydim): MPoly.one(xdim)})

    @classmethod
    def lift(cls, ts: TruncatedSeries, xdim: int) -> "PolySeries":
        """Rational series viewed with constant polynomial coefficients."""
        return cls._raw(
            ts.dim, xdim, ts.order,
            {e: MPoly.constant(xdim, c) for e, c in ts.terms.items()},
        )

    def coefficient(self, idx) -> MPoly:
        idx = mi.check_index(idx, self.ydim)
        if sum(idx) > self.order:
            raise InsufficientOrder(f"coefficient at {idx} beyond order {self.order}")
        return self.terms.get(idx, MPoly.zero(self.xdim))

    def _check_compatible(self, other: "PolySeries"):
        if self.ydim != other.ydim or self.xdim != other.xdim:
            raise DimensionMismatch("incompatible polynomial series")

    def __add__(self, other: "PolySeries") -> "PolySeries":
        self._check_compatible(other)
        order = min(self.order, other.order)
        out = {e: p for e, p in self.terms.items() if sum(e) <= order}
        for exp, poly in other.terms.items():
            if sum(exp) > order:
                continue
            acc = out.get(exp)
            if acc is None:
                out[exp] = poly
            else:
                acc = acc + poly
                if acc.is_zero:
                    del out[exp]
                else:
                    out[exp] = acc
        return PolySeries._raw(self.ydim, self.xdim, order, out)

    def __sub__(self, other: "PolySeries") -> "PolySeries":
        return self + other.scale(Q(-1))

    def __mul__(self, other: "PolySeries") -> "PolySeries":
        self._check_compatible(other)
        order = min(self.order, other.order)
        out = {}
        for ea, pa in self.terms.items():
            wa = sum(ea)
            if wa > order:
                continue
            budget = order - wa
            for eb, pb in other.terms.items():
                if sum(eb) > budget:
                    continue
                exp = mi.add(ea, eb)
                prod = pa * pb
                acc = out.get(exp)
                out[exp] = prod if acc is None else acc + prod
        return PolySeries._raw(
            self.ydim, self.xdim, order,
            {e: p for e, p in out.items() if not p.is_zero},
        )

    def scale(self, factor) -> "PolySeries":
        """Multiply every coefficient by a rational or a fixed polynomial."""
        if isinstance(factor, MPoly):
            out = {e: p * factor for e, p in self.terms.items()}
        else:
            factor = Q(factor)
            out = {e: p * factor for e, p in self.terms.items()}
        return PolySeries._raw(
            self.ydim, self.xdim, self.order,
            {e: p for e, p in out.items() if not p.is_zero},
        )

    def exp(self) -> "PolySeries":
        if not self.coefficient(mi.zero(self.ydim)).is_zero:
            raise NonzeroConstantTerm("exp needs a zero constant term")
        acc = PolySeries.one(self.ydim, self.xdim, self.order)
        term = acc
        for j in range(1, self.order + 1):
            term = (term * self).scale(Q(1, j))
            if not term.terms:
                break
            acc = acc + term
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolySeries):
            return NotImplemented
        return (
            self.ydim == other.ydim
            and self.xdim == other.xdim
            and self.order == other.order
            and self.terms == other.terms
        )

    __hash__ = None

    def first_difference(self, other: "PolySeries"):
        """First y-index (graded-lex) where coefficients differ, else None."""
        order = min(self.order, other.order)
        for idx in mi.indices_up_to_weight(self.ydim, order):
            if self.coefficient(idx) != other.coefficient(idx):
                return idx
        return None


# ----------------------------------------------------------------------
# Appell-relation verification

@dataclass(frozen=True)
class AppellReport:
    """Outcome of the generating-function identities for a polynomial family."""

    passed: bool
    failed_form: Optional[str]
    witness: Optional[tuple]
    order: int


def appell_verify(system: DeltaSystem, grid, polys, order: int,
                  check_substituted: bool = True) -> AppellReport:
    """Check the grid-weighted generating identity for a family t_k.

    Direct form: exp(x . y) must equal the sum over k of
    t_k(x)/k! * f(y)^k * exp(z_k . y), with f the indicator series of the
    system and z_k the grid nodes; compared exactly, coefficient by
    coefficient, to total order `order` in y.  With the grid at the origin
    this is the plain Appell relation of the basic sequence.

    Substituted form (checked when `check_substituted`): exp(x . g(y))
    equals the sum of t_k(x)/k! * y^k * exp(z_k . g(y)) where g is the
    compositional inverse of the indicators.
    """
    d = system.dim
    f_series = [op.indicator.as_series(order) for op in system.ops]
    powers = _MonomialPowers(f_series, order)

    xy_terms = {
        mi.unit(d, j): MPoly.variable(d, j) for j in range(d)
    }
    lhs = PolySeries(d, d, order, xy_terms).exp()
    rhs = PolySeries.zero(d, d, order)
    for k in mi.indices_up_to_weight(d, order):
        t_k = polys[k]
        node = grid.node(k)
        weight = powers.get(k) * exp_of_linear(node, order)
        contribution = PolySeries.lift(weight, d).scale(
            t_k / mi.index_factorial(k)
        )
        rhs = rhs + contribution
    if lhs != rhs:
        return AppellReport(False, "direct", lhs.first_difference(rhs), order)

    if check_substituted:
        g = system.inverse_indicator_series(order)
        arg_terms = {}
        for gamma in mi.indices_up_to_weight(d, order):
            if not any(gamma):
                continue
            coeff = MPoly.zero(d)
            for i, comp in enumerate(g.components):
                c = comp.terms.get(gamma)
                if c:
                    coeff = coeff + MPoly.monomial(d, mi.unit(d, i), c)
            if not coeff.is_zero:
                arg_terms[gamma] = coeff
        lhs2 = PolySeries(d, d, order, arg_terms).exp()
        rhs2 = PolySeries.zero(d, d, order)
        for k in mi.indices_up_to_weight(d, order):
            t_k = polys[k]
            node = grid.node(k)
            # exp(z_k . g(y)) built from the linear combination of g's components
            lin = TruncatedSeries.zero(d, order)
            for i, comp in enumerate(g.components):
                if node[i]:
                    lin = lin + comp.scale(node[i])
            weight = TruncatedSeries(d, order, {mi.check_index(k, d): 1}) * lin.exp()
            rhs2 = rhs2 + PolySeries.lift(weight, d).scale(
                t_k / mi.index_factorial(k)
            )
        if lhs2 != rhs2:
            return AppellReport(False, "substituted", lhs2.first_difference(rhs2), order)

    return AppellReport(True, None, None, order)


class OriginGrid:
    """The grid whose every node is the origin; hosts the plain Appell relation."""

    def __init__(self, dim: int):
        self.dim = dim
        self._origin = tuple([ZERO] * dim)

    def node(self, idx):
        mi.check_index(idx, self.dim)
        return self._origin

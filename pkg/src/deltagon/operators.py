"""Shift-invariant operators on polynomials, given by indicator series.

Every shift-invariant operator here is a formal power series in the partial
derivatives; the series is the operator's indicator.  An Indicator is a
memoized coefficient oracle: presets (derivative, shift, difference
operators and their invertible factors) answer any index from a closed
form, while explicit user series carry a declared order and refuse to
answer beyond it.  Applying an operator to a polynomial of total degree m
only ever reads coefficients with |n| <= m, so the result is a finite,
exact sum.

A DeltaSystem is a d-tuple of such operators whose indicators vanish at
the origin and whose linear part is nonsingular; construction validates
both.  A SeparableSystem is the special shape where the i-th operator is
the i-th partial derivative composed with an invertible operator acting
on the i-th variable alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg
from . import multiindex as mi
from .errors import (
    BadParams,
    DimensionMismatch,
    InsufficientOrder,
    NonzeroConstantTerm,
    NotInvertible,
    SingularJacobian,
)
from .mpoly import MPoly
from .rationals import Q, Rational, ZERO, parse_rational
from .series import SeriesSystem, TruncatedSeries

DEFAULT_PROBE_ORDER = 16


class Indicator:
    """Coefficient oracle for a formal power series in the derivatives.

    The memo cache is the only mutable state; entries are pure functions of
    the index, so concurrent idempotent writes are safe.
    """

    __slots__ = ("dim", "order", "axis", "name", "_fn", "_support_fn", "_cache")

    def __init__(self, dim, fn, *, order=None, axis=None, name="series", support=None):
        self.dim = dim
        self.order = order
        self.axis = axis
        self.name = name
        self._fn = fn
        self._support_fn = support
        self._cache = {}

    def coefficient(self, idx) -> Rational:
        idx = mi.check_index(idx, self.dim)
        got = self._cache.get(idx)
        if got is not None:
            return got
        if self.order is not None and sum(idx) > self.order:
            raise InsufficientOrder(
                f"indicator '{self.name}' is only known to order {self.order}"
            )
        value = Q(self._fn(idx))
        self._cache[idx] = value
        return value

    @property
    def constant_term(self) -> Rational:
        return self.coefficient(mi.zero(self.dim))

    def linear_coefficient(self, axis) -> Rational:
        return self.coefficient(mi.unit(self.dim, axis))

    def support_upto(self, maxdeg) -> Iterable:
        """Indices worth querying for polynomials of total degree maxdeg."""
        if self._support_fn is not None:
            return self._support_fn(maxdeg)
        if self.axis is not None:
            axis = self.axis
            return (
                tuple(k if j == axis else 0 for j in range(self.dim))
                for k in range(maxdeg + 1)
            )
        return mi.indices_up_to_weight(self.dim, maxdeg)

    def as_series(self, order) -> TruncatedSeries:
        """Materialize the oracle as a truncated series of the given order."""
        if self.order is not None and order > self.order:
            raise InsufficientOrder(
                f"indicator '{self.name}' is only known to order {self.order}"
            )
        terms = {}
        for idx in self.support_upto(order):
            c = self.coefficient(idx)
            if c:
                terms[idx] = c
        return TruncatedSeries(self.dim, order, terms)

    def __repr__(self):
        return f"Indicator({self.name}, d={self.dim})"

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def from_poly_terms(cls, dim, terms: Mapping, name="poly") -> "Indicator":
        """Polynomial indicator: finite support, every other coefficient is 0."""
        table = {mi.check_index(e, dim): Q(c) for e, c in terms.items() if Q(c)}
        axes = {j for e in table for j, v in enumerate(e) if v}
        axis = axes.pop() if len(axes) == 1 else None
        return cls(
            dim,
            lambda idx: table.get(idx, ZERO),
            order=None,
            axis=axis,
            name=name,
            support=lambda maxdeg: [e for e in table if sum(e) <= maxdeg],
        )

    @classmethod
    def from_series(cls, ts: TruncatedSeries, name="series") -> "Indicator":
        """Explicit finite-order indicator; queries beyond the order fail."""
        table = dict(ts.terms)
        axes = {j for e in table for j, v in enumerate(e) if v}
        axis = axes.pop() if len(axes) == 1 else None
        return cls(
            ts.dim,
            lambda idx: table.get(idx, ZERO),
            order=ts.order,
            axis=axis,
            name=name,
        )

    @classmethod
    def univariate(cls, dim, axis, coeff_fn: Callable[[int], object], *,
                   order=None, name="univariate") -> "Indicator":
        """Series in the single variable x_axis with coefficient oracle on k."""
        def fn(idx):
            k = idx[axis]
            if sum(idx) != k:
                return ZERO
            return coeff_fn(k)

        return cls(dim, fn, order=order, axis=axis, name=name)

    # ------------------------------------------------------------------
    # combinators (all lazy, all memoized through coefficient())

    @staticmethod
    def _merge_order(*orders):
        bounded = [o for o in orders if o is not None]
        return min(bounded) if bounded else None

    @staticmethod
    def _merge_axis(a, b):
        if a == b:
            return a
        return None

    def product(self, other: "Indicator") -> "Indicator":
        self._check_dim(other)

        def fn(idx):
            acc = ZERO
            for k in mi.indices_leq(idx):
                left = self.coefficient(k)
                if left:
                    right = other.coefficient(mi.sub(idx, k))
                    if right:
                        acc = acc + left * right
            return acc

        return Indicator(
            self.dim,
            fn,
            order=self._merge_order(self.order, other.order),
            axis=self._merge_axis(self.axis, other.axis),
            name=f"({self.name})*({other.name})",
        )

    def add(self, other: "Indicator") -> "Indicator":
        self._check_dim(other)
        return Indicator(
            self.dim,
            lambda idx: self.coefficient(idx) + other.coefficient(idx),
            order=self._merge_order(self.order, other.order),
            axis=self._merge_axis(self.axis, other.axis),
            name=f"({self.name})+({other.name})",
        )

    def scale(self, scalar) -> "Indicator":
        scalar = Q(scalar)
        return Indicator(
            self.dim,
            lambda idx: scalar * self.coefficient(idx),
            order=self.order,
            axis=self.axis,
            name=f"{scalar}*({self.name})",
            support=self._support_fn,
        )

    def partial(self, axis) -> "Indicator":
        """The indicator of the Pincherle derivative along the given axis."""
        e = mi.unit(self.dim, axis)

        def fn(idx):
            return (idx[axis] + 1) * self.coefficient(mi.add(idx, e))

        return Indicator(
            self.dim,
            fn,
            order=None if self.order is None else max(self.order - 1, 0),
            axis=self.axis,
            name=f"d({self.name})/dx{axis + 1}",
        )

    def reciprocal(self) -> "Indicator":
        """Oracle for 1/self, solved order by order through the memo cache."""
        a0 = self.constant_term
        if not a0:
            raise NotInvertible(
                f"indicator '{self.name}' has zero constant term"
            )
        inv0 = 1 / a0
        zero_idx = mi.zero(self.dim)

        def fn(idx):
            if idx == zero_idx:
                return inv0
            acc = self.coefficient(idx) * inv0
            for k in mi.indices_leq(idx):
                if k == zero_idx or k == idx:
                    continue
                c = self.coefficient(k)
                if c:
                    acc = acc + c * rec.coefficient(mi.sub(idx, k))
            return -acc * inv0

        rec = Indicator(
            self.dim,
            fn,
            order=self.order,
            axis=self.axis,
            name=f"({self.name})^-1",
        )
        return rec

    def power(self, k: int) -> "Indicator":
        if k < 0:
            return self.reciprocal().power(-k)
        if k == 0:
            return Indicator.from_poly_terms(self.dim, {mi.zero(self.dim): 1}, name="1")
        out = None
        base = self
        n = k
        while n:
            if n & 1:
                out = base if out is None else out.product(base)
            n >>= 1
            if n:
                base = base.product(base)
        return out

    def _check_dim(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch(
                f"indicators of dimension {self.dim} and {other.dim}"
            )


class ShiftInvariantOp:
    """A linear shift-invariant operator acting exactly on polynomials."""

    __slots__ = ("indicator", "shift")

    def __init__(self, indicator: Indicator, shift=None):
        self.indicator = indicator
        self.shift = None if shift is None else tuple(Q(c) for c in shift)

    @property
    def dim(self):
        return self.indicator.dim

    def apply(self, p: MPoly) -> MPoly:
        """Apply to a polynomial: a finite exact sum of derivatives.

        Pure shifts bypass the series and substitute directly; the two
        paths agree exactly on every polynomial.
        """
        if not isinstance(p, MPoly):
            raise TypeError("operators act on MPoly values")
        if p.dim != self.dim:
            raise DimensionMismatch(
                f"operator in dimension {self.dim} applied to {p.dim}-variable polynomial"
            )
        if self.shift is not None:
            return p.translate(self.shift)
        if p.is_zero:
            return p
        deg = p.degree
        ind = self.indicator
        if ind.order is not None and ind.order < deg:
            raise InsufficientOrder(
                f"indicator '{ind.name}' known to order {ind.order}, "
                f"polynomial has degree {deg}"
            )
        acc = MPoly.zero(p.dim)
        for idx in ind.support_upto(deg):
            c = ind.coefficient(idx)
            if c:
                acc = acc + p.derivative(idx) * c
        return acc

    __call__ = apply

    # ------------------------------------------------------------------
    # operator algebra

    def compose(self, other: "ShiftInvariantOp") -> "ShiftInvariantOp":
        if self.shift is not None and other.shift is not None:
            combined = tuple(a + b for a, b in zip(self.shift, other.shift))
            return shift_op(self.dim, combined)
        return ShiftInvariantOp(self.indicator.product(other.indicator))

    def __add__(self, other):
        if not isinstance(other, ShiftInvariantOp):
            return NotImplemented
        return ShiftInvariantOp(self.indicator.add(other.indicator))

    def __sub__(self, other):
        if not isinstance(other, ShiftInvariantOp):
            return NotImplemented
        return self + other.scale(-1)

    def scale(self, scalar) -> "ShiftInvariantOp":
        return ShiftInvariantOp(self.indicator.scale(scalar))

    def pincherle(self, axis) -> "ShiftInvariantOp":
        """Pincherle derivative: p -> L(x_axis p) - x_axis L(p)."""
        return ShiftInvariantOp(self.indicator.partial(axis))

    def inverse(self) -> "ShiftInvariantOp":
        if self.shift is not None:
            return shift_op(self.dim, tuple(-c for c in self.shift))
        return ShiftInvariantOp(self.indicator.reciprocal())

    def power(self, k: int) -> "ShiftInvariantOp":
        if self.shift is not None:
            return shift_op(self.dim, tuple(c * k for c in self.shift))
        return ShiftInvariantOp(self.indicator.power(k))

    def equals(self, other: "ShiftInvariantOp", probe_order=DEFAULT_PROBE_ORDER) -> bool:
        """Extensional equality of indicators up to the usable order."""
        if self.dim != other.dim:
            return False
        orders = [o for o in (self.indicator.order, other.indicator.order) if o is not None]
        upto = min(orders) if orders else probe_order
        for idx in mi.indices_up_to_weight(self.dim, upto):
            if self.indicator.coefficient(idx) != other.indicator.coefficient(idx):
                return False
        return True

    def __repr__(self):
        if self.shift is not None:
            return f"ShiftInvariantOp(shift {self.shift})"
        return f"ShiftInvariantOp({self.indicator.name})"


# ----------------------------------------------------------------------
# presets

def derivative_op(dim, axis) -> ShiftInvariantOp:
    """The partial derivative along one axis."""
    return ShiftInvariantOp(
        Indicator.from_poly_terms(dim, {mi.unit(dim, axis): 1}, name=f"D{axis + 1}")
    )


def identity_op(dim) -> ShiftInvariantOp:
    return ShiftInvariantOp(
        Indicator.from_poly_terms(dim, {mi.zero(dim): 1}, name="I")
    )


def shift_op(dim, v) -> ShiftInvariantOp:
    """The shift p(x) -> p(x + v); indicator exp(v . x)."""
    v = tuple(Q(c) for c in v)
    if len(v) != dim:
        raise DimensionMismatch(f"shift vector of length {len(v)} in dimension {dim}")

    def fn(idx):
        coef = Q(1, mi.index_factorial(idx))
        for axis, e in enumerate(idx):
            if e:
                coef = coef * v[axis] ** e
        return coef

    axes = [j for j, c in enumerate(v) if c]
    axis = axes[0] if len(axes) == 1 else None
    ind = Indicator(dim, fn, order=None, axis=axis, name=f"E{v}")
    return ShiftInvariantOp(ind, shift=v)


def forward_difference_op(dim, axis) -> ShiftInvariantOp:
    """p(x) -> p(x + e_axis) - p(x); indicator e^{x_axis} - 1."""
    ind = Indicator.univariate(
        dim, axis,
        lambda k: ZERO if k == 0 else Q(1, factorial(k)),
        name=f"fwd{axis + 1}",
    )
    return ShiftInvariantOp(ind)


def backward_difference_op(dim, axis) -> ShiftInvariantOp:
    """p(x) -> p(x) - p(x - e_axis); indicator 1 - e^{-x_axis}."""
    ind = Indicator.univariate(
        dim, axis,
        lambda k: ZERO if k == 0 else Q((-1) ** (k + 1), factorial(k)),
        name=f"bwd{axis + 1}",
    )
    return ShiftInvariantOp(ind)


def _factor_indicator(dim, axis, kind, coeffs=None) -> Indicator:
    """Indicator of the invertible factor in d_i = D_i L_i, per axis."""
    if kind == "derivative":
        return Indicator.from_poly_terms(dim, {mi.zero(dim): 1}, name="1")
    if kind == "forward_diff":
        # (e^t - 1)/t, the averaging operator over a unit step ahead
        return Indicator.univariate(
            dim, axis, lambda k: Q(1, factorial(k + 1)), name=f"fwdL{axis + 1}"
        )
    if kind == "backward_diff":
        return Indicator.univariate(
            dim, axis, lambda k: Q((-1) ** k, factorial(k + 1)), name=f"bwdL{axis + 1}"
        )
    if kind == "custom":
        values = [parse_rational(c) if isinstance(c, str) else Q(c) for c in coeffs]
        if not values or not values[0]:
            raise BadParams("custom factor needs a nonzero constant coefficient")
        table = dict(enumerate(values))
        return Indicator.univariate(
            dim, axis,
            lambda k: table.get(k, ZERO),
            order=len(values) - 1,
            name=f"customL{axis + 1}",
        )
    raise BadParams(f"unknown separable factor kind {kind!r}")


# ----------------------------------------------------------------------
# delta systems

class DeltaSystem:
    """d validated delta operators: zero constant terms, nonsingular linear part."""

    __slots__ = ("dim", "ops", "jacobian", "det_jacobian")

    def __init__(self, ops: Sequence[ShiftInvariantOp]):
        ops = tuple(ops)
        dim = len(ops)
        if dim < 1:
            raise ValueError("a system needs at least one operator")
        for i, op in enumerate(ops):
            if op.dim != dim:
                raise DimensionMismatch(
                    f"operator {i} lives in dimension {op.dim}, system is {dim}"
                )
            if op.indicator.constant_term:
                raise NonzeroConstantTerm(
                    f"indicator of operator {i} has nonzero constant term",
                    component=i,
                )
        jac = [
            [ops[i].indicator.linear_coefficient(j) for j in range(dim)]
            for i in range(dim)
        ]
        det = linalg.determinant(jac)
        if not det:
            raise SingularJacobian("linear part of the indicator system is singular")
        self.dim = dim
        self.ops = ops
        self.jacobian = jac
        self.det_jacobian = det

    def __getitem__(self, i) -> ShiftInvariantOp:
        return self.ops[i]

    def __iter__(self):
        return iter(self.ops)

    def apply_power(self, k, p: MPoly) -> MPoly:
        """Apply d_1^{k_1} ... d_d^{k_d} to a polynomial."""
        k = mi.check_index(k, self.dim)
        for axis, reps in enumerate(k):
            for _ in range(reps):
                if p.is_zero:
                    return p
                p = self.ops[axis].apply(p)
        return p

    def indicator_series(self, order) -> SeriesSystem:
        """The indicators as a truncated series system."""
        return SeriesSystem([op.indicator.as_series(order) for op in self.ops])

    def inverse_indicator_series(self, order) -> SeriesSystem:
        """Compositional inverse of the indicators, to the given order."""
        return self.indicator_series(order).inverse()


class SeparableSystem(DeltaSystem):
    """System with d_i = D_i L_i, the factor L_i acting on x_i alone."""

    __slots__ = ("factors",)

    def __init__(self, factors: Sequence[Indicator]):
        factors = tuple(factors)
        dim = len(factors)
        ops = []
        for axis, ell in enumerate(factors):
            if ell.dim != dim:
                raise DimensionMismatch(
                    f"factor {axis} lives in dimension {ell.dim}, system is {dim}"
                )
            if ell.axis is not None and ell.axis != axis:
                raise BadParams(
                    f"factor {axis} acts on axis {ell.axis}, expected {axis}"
                )
            if not ell.constant_term:
                raise BadParams(
                    f"factor {axis} must be invertible (nonzero constant term)"
                )
            ops.append(ShiftInvariantOp(_delta_indicator(dim, axis, ell)))
        super().__init__(ops)
        self.factors = factors

    def factor_op(self, axis) -> ShiftInvariantOp:
        """The invertible factor L_axis as an operator."""
        return ShiftInvariantOp(self.factors[axis])


def _delta_indicator(dim, axis, ell: Indicator) -> Indicator:
    """Indicator x_axis * ell(x_axis) of the separable operator D L."""

    def fn(idx):
        k = idx[axis]
        if k == 0 or sum(idx) != k:
            return ZERO
        return ell.coefficient(tuple(k - 1 if j == axis else 0 for j in range(dim)))

    order = None if ell.order is None else ell.order + 1
    return Indicator(dim, fn, order=order, axis=axis, name=f"x*({ell.name})")


def separable_system(dim, axis_specs: Sequence) -> SeparableSystem:
    """Build a separable system from one factor spec per axis.

    Each spec is "derivative" | "forward_diff" | "backward_diff" or a
    sequence of rational coefficients for a custom factor.
    """
    if len(axis_specs) != dim:
        raise BadParams(f"need {dim} axis specs, got {len(axis_specs)}")
    factors = []
    for axis, spec in enumerate(axis_specs):
        if isinstance(spec, str):
            factors.append(_factor_indicator(dim, axis, spec))
        else:
            factors.append(_factor_indicator(dim, axis, "custom", coeffs=spec))
    return SeparableSystem(factors)


def validate_system(items: Sequence) -> DeltaSystem:
    """Validate operators (or bare indicators) as a delta system."""
    ops = [
        item if isinstance(item, ShiftInvariantOp) else ShiftInvariantOp(item)
        for item in items
    ]
    return DeltaSystem(ops)


# ----------------------------------------------------------------------
# strictness

@dataclass(frozen=True)
class StrictnessReport:
    """Per-axis strictness: indicator i supported on monomials with x_i present."""

    per_axis: tuple
    strict: bool
    checked_order: int


def check_strict(system: DeltaSystem, probe_order=DEFAULT_PROBE_ORDER) -> StrictnessReport:
    """Strict iff every indicator i is x_i times an invertible series.

    Explicit finite-order indicators are scanned over all their available
    coefficients, so for them the verdict means "strict up to that order".
    """
    per_axis = []
    checked = probe_order
    for axis, op in enumerate(system.ops):
        ind = op.indicator
        upto = probe_order if ind.order is None else min(probe_order, ind.order)
        checked = min(checked, upto)
        ok = bool(ind.linear_coefficient(axis))
        if ok:
            for idx in ind.support_upto(upto):
                if idx[axis] == 0 and ind.coefficient(idx):
                    ok = False
                    break
        per_axis.append(ok)
    return StrictnessReport(tuple(per_axis), all(per_axis), checked)


# ----------------------------------------------------------------------
# JSON operator specs (CLI surface)

def operator_from_spec(dim, spec: Mapping) -> ShiftInvariantOp:
    """Build an operator from its JSON description."""
    if not isinstance(spec, Mapping):
        raise BadParams(f"operator spec must be an object, got {spec!r}")
    if "preset" in spec:
        name = spec["preset"]
        if name == "derivative":
            return derivative_op(dim, _axis_of(spec, dim))
        if name == "forward_diff":
            return forward_difference_op(dim, _axis_of(spec, dim))
        if name == "backward_diff":
            return backward_difference_op(dim, _axis_of(spec, dim))
        if name == "shift":
            v = spec.get("v")
            if not isinstance(v, list) or len(v) != dim:
                raise BadParams(f"shift preset needs a length-{dim} vector 'v'")
            return shift_op(dim, [parse_rational(str(c)) for c in v])
        raise BadParams(f"unknown preset {name!r}")
    if "custom_L" in spec:
        body = spec["custom_L"]
        axis = _axis_of(body, dim)
        ell = _factor_indicator(dim, axis, "custom", coeffs=body.get("coeffs", []))
        return ShiftInvariantOp(_delta_indicator(dim, axis, ell))
    if "poly" in spec:
        terms = {tuple(t["exp"]): parse_rational(t["coef"]) for t in spec["poly"]}
        return ShiftInvariantOp(Indicator.from_poly_terms(dim, terms))
    if "series" in spec:
        body = spec["series"]
        try:
            ts = TruncatedSeries(
                dim,
                int(body["order"]),
                {tuple(t["exp"]): parse_rational(t["coef"]) for t in body["terms"]},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BadParams(f"malformed series spec: {exc}") from exc
        return ShiftInvariantOp(Indicator.from_series(ts))
    raise BadParams(f"operator spec needs 'preset', 'custom_L', 'poly' or 'series': {spec!r}")


def system_from_specs(dim, specs: Sequence) -> DeltaSystem:
    """Build a validated system from JSON operator specs.

    When spec i describes a separable operator on axis i the result is a
    SeparableSystem, unlocking the closed Abel formulas.
    """
    if len(specs) != dim:
        raise BadParams(f"need {dim} operator specs, got {len(specs)}")
    separable_kinds = {"derivative", "forward_diff", "backward_diff"}
    factors = []
    for axis, spec in enumerate(specs):
        if not isinstance(spec, Mapping):
            factors = None
            break
        if spec.get("preset") in separable_kinds and _axis_of(spec, dim) == axis:
            factors.append(_factor_indicator(dim, axis, spec["preset"]))
        elif "custom_L" in spec and _axis_of(spec["custom_L"], dim) == axis:
            factors.append(
                _factor_indicator(dim, axis, "custom", coeffs=spec["custom_L"].get("coeffs", []))
            )
        else:
            factors = None
            break
    if factors is not None:
        return SeparableSystem(factors)
    return validate_system([operator_from_spec(dim, spec) for spec in specs])


def _axis_of(spec, dim) -> int:
    axis = spec.get("axis")
    if not isinstance(axis, int) or isinstance(axis, bool) or not 0 <= axis < dim:
        raise BadParams(f"axis must be an integer in [0, {dim}), got {axis!r}")
    return axis

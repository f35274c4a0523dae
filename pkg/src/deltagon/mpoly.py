"""Sparse multivariate polynomials over the exact rationals.

A polynomial stores a dict from exponent tuples to nonzero rational
coefficients.  Instances are immutable after construction: every operation
returns a fresh value, so polynomials can be shared freely, including
across threads.  The canonical term order for serialization and leading
terms is graded lexicographic.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Mapping, Sequence

from . import multiindex as mi
from .errors import DimensionMismatch, NonExactDivision
from .rationals import Q, Rational, ZERO, format_rational, parse_rational


def _coerce_scalar(value) -> Rational:
    if isinstance(value, float):
        raise TypeError("floating-point coefficients rejected")
    return Q(value)


class MPoly:
    """Sparse exact-rational polynomial in d variables."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping | None = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        clean = {}
        if terms:
            for exp, coef in terms.items():
                exp = mi.check_index(exp, dim)
                coef = _coerce_scalar(coef)
                if coef:
                    clean[exp] = coef
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    @classmethod
    def _raw(cls, dim: int, terms: dict) -> "MPoly":
        # internal: terms already validated, nonzero, owned by the callee
        self = object.__new__(cls)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", terms)
        return self

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, dim: int) -> "MPoly":
        return cls._raw(dim, {})

    @classmethod
    def one(cls, dim: int) -> "MPoly":
        return cls.constant(dim, 1)

    @classmethod
    def constant(cls, dim: int, value) -> "MPoly":
        value = _coerce_scalar(value)
        return cls._raw(dim, {mi.zero(dim): value} if value else {})

    @classmethod
    def variable(cls, dim: int, axis: int) -> "MPoly":
        if not 0 <= axis < dim:
            raise ValueError(f"axis {axis} out of range for dimension {dim}")
        return cls._raw(dim, {mi.unit(dim, axis): Q(1)})

    @classmethod
    def monomial(cls, dim: int, exp, coef=1) -> "MPoly":
        return cls(dim, {tuple(exp): coef})

    # ------------------------------------------------------------------
    # basic structure

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def coefficient(self, exp) -> Rational:
        return self.terms.get(mi.check_index(exp, self.dim), ZERO)

    @property
    def constant_term(self) -> Rational:
        return self.terms.get(mi.zero(self.dim), ZERO)

    def sorted_terms(self) -> list:
        """Terms in ascending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: mi.grlex_key(t[0]))

    def leading_term(self):
        """(exponent, coefficient) maximal in graded-lex order; None if zero."""
        if not self.terms:
            return None
        exp = max(self.terms, key=mi.grlex_key)
        return exp, self.terms[exp]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        if not self.terms:
            return f"MPoly({self.dim}, 0)"
        body = " + ".join(
            f"{format_rational(c)}*x^{list(e)}" for e, c in self.sorted_terms()
        )
        return f"MPoly({self.dim}, {body})"

    def _check_same_dim(self, other: "MPoly"):
        if self.dim != other.dim:
            raise DimensionMismatch(
                f"polynomials of dimension {self.dim} and {other.dim}"
            )

    # ------------------------------------------------------------------
    # arithmetic

    def __add__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check_same_dim(other)
        out = dict(self.terms)
        for exp, coef in other.terms.items():
            acc = out.get(exp)
            if acc is None:
                out[exp] = coef
            else:
                acc = acc + coef
                if acc:
                    out[exp] = acc
                else:
                    del out[exp]
        return MPoly._raw(self.dim, out)

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check_same_dim(other)
        out = dict(self.terms)
        for exp, coef in other.terms.items():
            acc = out.get(exp)
            if acc is None:
                out[exp] = -coef
            else:
                acc = acc - coef
                if acc:
                    out[exp] = acc
                else:
                    del out[exp]
        return MPoly._raw(self.dim, out)

    def __neg__(self):
        return MPoly._raw(self.dim, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, MPoly):
            self._check_same_dim(other)
            out = {}
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    exp = mi.add(ea, eb)
                    prod = ca * cb
                    acc = out.get(exp)
                    out[exp] = prod if acc is None else acc + prod
            return MPoly._raw(self.dim, {e: c for e, c in out.items() if c})
        scalar = _coerce_scalar(other)
        if not scalar:
            return MPoly.zero(self.dim)
        return MPoly._raw(self.dim, {e: c * scalar for e, c in self.terms.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        scalar = _coerce_scalar(other)
        if not scalar:
            raise ZeroDivisionError("division of polynomial by zero scalar")
        return MPoly._raw(self.dim, {e: c / scalar for e, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be naturals")
        out = MPoly.one(self.dim)
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # ------------------------------------------------------------------
    # translation, evaluation, derivatives

    def translate(self, v: Sequence) -> "MPoly":
        """p(x) -> p(x + v), by exact binomial expansion."""
        if len(v) != self.dim:
            raise DimensionMismatch(f"shift of length {len(v)} in dimension {self.dim}")
        shift = [_coerce_scalar(c) for c in v]
        if not any(shift):
            return self
        out = {}
        for exp, coef in self.terms.items():
            partial = {(): coef}
            for axis, e in enumerate(exp):
                s = shift[axis]
                grown = {}
                if not s:
                    for prefix, c in partial.items():
                        grown[prefix + (e,)] = c
                else:
                    spow = [Q(1)]
                    for _ in range(e):
                        spow.append(spow[-1] * s)
                    for prefix, c in partial.items():
                        for j in range(e + 1):
                            key = prefix + (j,)
                            term = c * comb(e, j) * spow[e - j]
                            acc = grown.get(key)
                            grown[key] = term if acc is None else acc + term
                partial = grown
            for key, c in partial.items():
                acc = out.get(key)
                out[key] = c if acc is None else acc + c
        return MPoly._raw(self.dim, {e: c for e, c in out.items() if c})

    def evaluate(self, point: Sequence) -> Rational:
        """Exact value at a rational point."""
        if len(point) != self.dim:
            raise DimensionMismatch(
                f"point of length {len(point)} in dimension {self.dim}"
            )
        vals = [_coerce_scalar(c) for c in point]
        powers = [{0: Q(1)} for _ in range(self.dim)]
        total = ZERO
        for exp, coef in self.terms.items():
            term = coef
            for axis, e in enumerate(exp):
                if e == 0:
                    continue
                cache = powers[axis]
                p = cache.get(e)
                if p is None:
                    p = vals[axis] ** e
                    cache[e] = p
                term = term * p
            total = total + term
        return total

    def derivative(self, order) -> "MPoly":
        """Apply the mixed partial derivative of the given multi-order."""
        order = mi.check_index(order, self.dim)
        if not any(order):
            return self
        out = {}
        for exp, coef in self.terms.items():
            factor = 1
            for e, o in zip(exp, order):
                if o > e:
                    factor = 0
                    break
                for j in range(e, e - o, -1):
                    factor *= j
            if factor:
                out[mi.sub(exp, order)] = coef * factor
        return MPoly._raw(self.dim, out)

    def exact_divide(self, q: "MPoly") -> "MPoly":
        """Return r with self = q * r, or raise NonExactDivision.

        Single-divisor division in graded-lex order: when the division is
        exact the leading term of the remainder is always divisible by the
        leading term of q, so the first failure proves non-exactness.
        """
        if not isinstance(q, MPoly):
            raise TypeError("divisor must be an MPoly")
        self._check_same_dim(q)
        if q.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        q_exp, q_coef = q.leading_term()
        quotient = {}
        rem = self
        while rem.terms:
            r_exp, r_coef = rem.leading_term()
            if not mi.leq(q_exp, r_exp):
                raise NonExactDivision(
                    f"leading monomial {r_exp} not divisible by {q_exp}"
                )
            t_exp = mi.sub(r_exp, q_exp)
            t_coef = r_coef / q_coef
            quotient[t_exp] = t_coef
            rem = rem - q._shift_scale(t_exp, t_coef)
        return MPoly._raw(self.dim, quotient)

    def _shift_scale(self, exp, coef) -> "MPoly":
        return MPoly._raw(
            self.dim, {mi.add(e, exp): c * coef for e, c in self.terms.items()}
        )

    # ------------------------------------------------------------------
    # serialization

    def to_json_terms(self) -> list:
        """JSON form: [{"exp": [...], "coef": "p/q"}, ...] in ascending graded-lex."""
        return [
            {"exp": list(e), "coef": format_rational(c)}
            for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json_terms(cls, dim: int, data: Iterable) -> "MPoly":
        terms = {}
        for item in data:
            exp = mi.check_index(item["exp"], dim)
            coef = parse_rational(item["coef"])
            if exp in terms:
                raise ValueError(f"duplicate exponent {exp} in polynomial data")
            terms[exp] = coef
        return cls(dim, terms)

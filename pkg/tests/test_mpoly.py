"""Polynomial arithmetic: translation, evaluation, exact division, serialization."""

import random

import pytest

from deltagon.errors import DimensionMismatch, NonExactDivision
from deltagon.mpoly import MPoly
from deltagon.rationals import Q


def P(dim, terms):
    return MPoly(dim, terms)


def random_poly(rng, dim, maxdeg, nterms):
    terms = {}
    for _ in range(nterms):
        exp = tuple(rng.randint(0, maxdeg) for _ in range(dim))
        if sum(exp) > maxdeg:
            continue
        terms[exp] = Q(rng.randint(-9, 9), rng.randint(1, 9))
    return MPoly(dim, terms)


class TestBasics:
    def test_zero_terms_dropped(self):
        p = P(2, {(1, 0): 0, (0, 1): 3})
        assert p.terms == {(0, 1): Q(3)}

    def test_degree_of_zero_is_none(self):
        assert MPoly.zero(3).degree is None
        assert P(1, {(4,): 1}).degree == 4

    def test_float_coefficients_rejected(self):
        with pytest.raises(TypeError):
            P(1, {(1,): 0.5})
        with pytest.raises(TypeError):
            MPoly.variable(1, 0) * 0.5

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            MPoly.one(2) + MPoly.one(3)

    def test_pow(self):
        x = MPoly.variable(1, 0)
        assert (x + MPoly.one(1)) ** 2 == P(1, {(2,): 1, (1,): 2, (0,): 1})
        assert x ** 0 == MPoly.one(1)


class TestTranslate:
    def test_xy_shift(self):
        # (x+1)(y+2) = xy + 2x + y + 2
        p = P(2, {(1, 1): 1})
        assert p.translate([1, 2]) == P(2, {(1, 1): 1, (1, 0): 2, (0, 1): 1, (0, 0): 2})

    def test_zero_shift_is_identity(self):
        rng = random.Random(7)
        for _ in range(10):
            p = random_poly(rng, 2, 5, 6)
            assert p.translate([0, 0]) == p

    def test_square_binomial(self):
        p = P(1, {(2,): 1})
        assert p.translate([1]) == P(1, {(2,): 1, (1,): 2, (0,): 1})

    def test_translate_is_multiplicative(self):
        rng = random.Random(11)
        left = random_poly(rng, 3, 4, 5)
        right = random_poly(rng, 3, 4, 5)
        v = [Q(1, 2), Q(-3), Q(2, 5)]
        assert (left * right).translate(v) == left.translate(v) * right.translate(v)

    def test_translate_round_trip(self):
        rng = random.Random(13)
        for _ in range(5):
            p = random_poly(rng, 2, 6, 8)
            v = [Q(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(2)]
            back = [-c for c in v]
            assert p.translate(v).translate(back) == p


class TestEvaluate:
    def test_at_zero(self):
        p = P(1, {(2,): 1, (1,): -2})
        assert p.evaluate([0]) == 0

    def test_root_of_quadratic(self):
        p = P(1, {(2,): 1, (1,): -2})
        assert p.evaluate([2]) == 0

    def test_rational_point(self):
        p = P(2, {(1, 1): 1, (0, 0): 1})
        assert p.evaluate([Q(1, 2), 2]) == 2

    def test_evaluation_is_ring_hom(self):
        rng = random.Random(17)
        a = random_poly(rng, 2, 4, 5)
        b = random_poly(rng, 2, 4, 5)
        pt = [Q(2, 3), Q(-1, 2)]
        assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
        assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


class TestExactDivide:
    def test_factor_out_x(self):
        p = P(1, {(2,): 1, (1,): -2})
        assert p.exact_divide(MPoly.variable(1, 0)) == P(1, {(1,): 1, (0,): -2})

    def test_explicit_factor(self):
        # x(x-3b)^2 / (x-3b) = x(x-3b), with b = 5
        b = 5
        x = MPoly.variable(1, 0)
        factor = x - MPoly.constant(1, 3 * b)
        p = x * factor * factor
        assert p.exact_divide(factor) == x * factor

    def test_non_exact(self):
        p = P(1, {(2,): 1, (0,): 1})
        with pytest.raises(NonExactDivision):
            p.exact_divide(MPoly.variable(1, 0))

    def test_divide_round_trip(self):
        rng = random.Random(23)
        for _ in range(10):
            p = random_poly(rng, 2, 4, 5)
            q = random_poly(rng, 2, 3, 4)
            if q.is_zero:
                continue
            assert (p * q).exact_divide(q) == p

    def test_non_exact_multivariate(self):
        p = P(2, {(1, 1): 1, (0, 0): 1})
        with pytest.raises(NonExactDivision):
            p.exact_divide(P(2, {(1, 0): 1}))


class TestDerivative:
    def test_mixed_partial(self):
        p = P(2, {(2, 3): 1})
        assert p.derivative((1, 2)) == P(2, {(1, 1): 12})

    def test_vanishing(self):
        p = P(2, {(1, 0): 5})
        assert p.derivative((2, 0)).is_zero


class TestSerialization:
    def test_graded_lex_order(self):
        p = P(2, {(2, 0): 1, (0, 1): 2, (1, 1): 3, (0, 0): 4})
        exps = [tuple(t["exp"]) for t in p.to_json_terms()]
        assert exps == [(0, 0), (0, 1), (1, 1), (2, 0)]

    def test_round_trip(self):
        rng = random.Random(31)
        for _ in range(10):
            p = random_poly(rng, 3, 5, 8)
            assert MPoly.from_json_terms(3, p.to_json_terms()) == p

    def test_single_term(self):
        p = P(2, {(1, 1): Q(3, 2)})
        assert p.to_json_terms() == [{"exp": [1, 1], "coef": "3/2"}]

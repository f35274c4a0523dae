"""Interpolation tables: recurrence vs dense oracle, biorthogonality, solve/expand."""

import random

import pytest

from deltagon.errors import MissingNode, MissingValue, NotInSpan
from deltagon.goncarov import (
    GoncarovTable,
    LowerSet,
    RuleGrid,
    TableGrid,
    biorthogonality_check,
    dense_goncarov_poly,
    expand_in_goncarov,
    goncarov_poly,
    interpolation_solve,
)
from deltagon.mpoly import MPoly
from deltagon.multiindex import indices_up_to_weight
from deltagon.operators import separable_system
from deltagon.rationals import Q
from deltagon.sequences import BasicSequence


def P(dim, terms):
    return MPoly(dim, terms)


def random_grid(rng, dim, maxdeg):
    nodes = {
        idx: tuple(Q(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(dim))
        for idx in indices_up_to_weight(dim, maxdeg)
    }
    return TableGrid(dim, nodes)


def zero_grid(dim):
    return RuleGrid(dim, lambda idx: (0,) * dim)


class TestLowerSet:
    def test_box(self):
        assert list(LowerSet.box((1, 1))) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_rejects_non_closed(self):
        with pytest.raises(ValueError):
            LowerSet([(0, 0), (1, 1)])

    def test_contains(self):
        s = LowerSet.with_max_weight(2, 2)
        assert (1, 1) in s and (2, 1) not in s


class TestGrids:
    def test_table_grid_missing_node(self):
        grid = TableGrid(2, {(0, 0): (0, 0)})
        with pytest.raises(MissingNode):
            grid.node((1, 0))

    def test_translated(self):
        grid = TableGrid(1, {(0,): (1,), (1,): (2,)})
        moved = grid.translated([Q(1, 2)])
        assert moved.node((0,)) == (Q(3, 2),)

    def test_float_nodes_rejected(self):
        with pytest.raises(TypeError):
            TableGrid(1, {(0,): (0.5,)})


class TestRecurrence:
    def test_t0_is_one(self):
        rng = random.Random(1)
        sys2 = separable_system(2, ["forward_diff", "derivative"])
        assert goncarov_poly(sys2, random_grid(rng, 2, 0), (0, 0)) == MPoly.one(2)

    def test_univariate_classical(self):
        # derivative, nodes a_0 = 0, a_1 = 1: t_2 = x^2 - 2x
        sys1 = separable_system(1, ["derivative"])
        grid = TableGrid(1, {(0,): (0,), (1,): (1,), (2,): (5,)})
        assert goncarov_poly(sys1, grid, (2,)) == P(1, {(2,): 1, (1,): -2})

    def test_zero_grid_gives_basic_sequence(self):
        for specs in (["derivative", "derivative"], ["forward_diff", "backward_diff"]):
            sys2 = separable_system(2, specs)
            seq = BasicSequence(sys2)
            table = GoncarovTable(sys2, zero_grid(2), basic=seq)
            for idx in indices_up_to_weight(2, 4):
                assert table.poly(idx) == seq.poly(idx)

    def test_locality(self):
        # t_n only depends on nodes at k <= n
        rng = random.Random(2)
        sys2 = separable_system(2, ["derivative", "forward_diff"])
        nodes = {
            idx: tuple(Q(rng.randint(-3, 3)) for _ in range(2))
            for idx in indices_up_to_weight(2, 4)
        }
        t = goncarov_poly(sys2, TableGrid(2, nodes), (2, 1))
        perturbed = dict(nodes)
        perturbed[(0, 3)] = (Q(99), Q(-99))  # (0,3) is not <= (2,1)
        perturbed[(3, 0)] = (Q(11), Q(7))
        assert goncarov_poly(sys2, TableGrid(2, perturbed), (2, 1)) == t

    def test_translation_invariance(self):
        rng = random.Random(3)
        sys2 = separable_system(2, ["forward_diff", "derivative"])
        grid = random_grid(rng, 2, 3)
        v = (Q(1, 3), Q(-2))
        t = goncarov_poly(sys2, grid, (2, 1))
        t_shifted = goncarov_poly(sys2, grid.translated(v), (2, 1))
        # evaluating the shifted-grid polynomial at x + v recovers the original
        assert t_shifted.translate(v) == t

    def test_missing_node_surfaces(self):
        # z_n itself never enters t_n (the top recurrence weight is p_0 = 1),
        # so the first genuinely required node for t_2 is z_1
        sys1 = separable_system(1, ["derivative"])
        grid = TableGrid(1, {(0,): (0,)})
        with pytest.raises(MissingNode) as info:
            goncarov_poly(sys1, grid, (2,))
        assert info.value.index == (1,)

    def test_parallel_population_matches_serial(self):
        rng = random.Random(4)
        sys2 = separable_system(2, ["forward_diff", "backward_diff"])
        grid = random_grid(rng, 2, 4)
        serial = GoncarovTable(sys2, grid).populate(4, jobs=1)
        parallel = GoncarovTable(sys2, grid).populate(4, jobs=4)
        assert serial == parallel


class TestDenseOracle:
    def test_matches_recurrence(self):
        rng = random.Random(5)
        for specs in (["derivative"], ["forward_diff"]):
            sys1 = separable_system(1, specs)
            grid = random_grid(rng, 1, 4)
            for n in range(5):
                assert dense_goncarov_poly(sys1, grid, (n,)) == goncarov_poly(sys1, grid, (n,))

    def test_matches_recurrence_bivariate(self):
        rng = random.Random(6)
        sys2 = separable_system(2, ["derivative", "forward_diff"])
        grid = random_grid(rng, 2, 4)
        table = GoncarovTable(sys2, grid)
        for idx in indices_up_to_weight(2, 3):
            assert dense_goncarov_poly(sys2, grid, idx) == table.poly(idx)


class TestBiorthogonality:
    def test_generated_table_passes(self):
        rng = random.Random(7)
        sys2 = separable_system(2, ["forward_diff", "derivative"])
        report = biorthogonality_check(sys2, random_grid(rng, 2, 3), 3)
        assert report.passed

    def test_perturbed_entry_fails_at_origin_condition(self):
        rng = random.Random(8)
        sys2 = separable_system(2, ["derivative", "derivative"])
        grid = random_grid(rng, 2, 2)
        table = GoncarovTable(sys2, grid).populate(2)
        table[(1, 1)] = table[(1, 1)] + MPoly.one(2)
        report = biorthogonality_check(sys2, grid, 2, table=table)
        assert not report.passed
        assert report.witness == ((0, 0), (1, 1))

    def test_zero_grid_reduces_to_basic_biorthogonality(self):
        sys1 = separable_system(1, ["backward_diff"])
        report = biorthogonality_check(sys1, zero_grid(1), 4)
        assert report.passed


class TestSolveAndExpand:
    def test_delta_data_returns_basis_polynomial(self):
        rng = random.Random(9)
        sys2 = separable_system(2, ["derivative", "forward_diff"])
        grid = random_grid(rng, 2, 3)
        n = (1, 2)
        from deltagon.multiindex import index_factorial

        values = {k: 0 for k in LowerSet.box(n)}
        values[n] = index_factorial(n)
        got = interpolation_solve(sys2, grid, LowerSet.box(n), values)
        assert got == goncarov_poly(sys2, grid, n)

    def test_univariate_worked_example(self):
        # derivative, nodes (0, 1, anything), data (1, 2, 3):
        # P = t_0 + 2 t_1 + 3/2 t_2 = 1 + 2x + 3/2 (x^2 - 2x) = 1 - x + 3/2 x^2
        sys1 = separable_system(1, ["derivative"])
        grid = TableGrid(1, {(0,): (0,), (1,): (1,), (2,): (7,)})
        s = LowerSet([(0,), (1,), (2,)])
        p = interpolation_solve(sys1, grid, s, {(0,): 1, (1,): 2, (2,): 3})
        assert p == P(1, {(0,): 1, (1,): -1, (2,): Q(3, 2)})
        # spot-check the three conditions
        assert p.evaluate([0]) == 1
        assert p.derivative((1,)).evaluate([1]) == 2
        assert p.derivative((2,)).evaluate([7]) == 3

    def test_zero_values_give_zero(self):
        rng = random.Random(10)
        sys1 = separable_system(1, ["forward_diff"])
        grid = random_grid(rng, 1, 3)
        s = LowerSet([(0,), (1,), (2,)])
        assert interpolation_solve(sys1, grid, s, {k: 0 for k in s}).is_zero

    def test_missing_value(self):
        sys1 = separable_system(1, ["derivative"])
        grid = TableGrid(1, {(0,): (0,), (1,): (1,)})
        with pytest.raises(MissingValue):
            interpolation_solve(sys1, grid, LowerSet([(0,), (1,)]), {(0,): 1})

    def test_expand_basis_polynomial(self):
        rng = random.Random(11)
        sys2 = separable_system(2, ["forward_diff", "forward_diff"])
        grid = random_grid(rng, 2, 3)
        table = GoncarovTable(sys2, grid)
        n = (1, 1)
        coeffs = expand_in_goncarov(sys2, grid, table.poly(n), LowerSet.box((2, 1)))
        for k, c in coeffs.items():
            assert c == (1 if k == n else 0)

    def test_expand_constant(self):
        rng = random.Random(12)
        sys1 = separable_system(1, ["derivative"])
        grid = random_grid(rng, 1, 2)
        coeffs = expand_in_goncarov(sys1, grid, MPoly.one(1), LowerSet([(0,), (1,)]))
        assert coeffs[(0,)] == 1 and coeffs[(1,)] == 0

    def test_expand_recovers_recurrence_weights(self):
        # expanding p_n itself gives binom(n,k) p_{n-k}(z_k)
        rng = random.Random(13)
        sys1 = separable_system(1, ["forward_diff"])
        grid = random_grid(rng, 1, 4)
        seq = BasicSequence(sys1)
        n = (3,)
        coeffs = expand_in_goncarov(sys1, grid, seq.poly(n), LowerSet.box(n))
        from deltagon.multiindex import index_binomial, sub

        for k, c in coeffs.items():
            expected = Q(index_binomial(n, k)) * seq.poly(sub(n, k)).evaluate(grid.node(k))
            assert c == expected

    def test_round_trip_on_random_members(self):
        rng = random.Random(14)
        sys2 = separable_system(2, ["derivative", "backward_diff"])
        grid = random_grid(rng, 2, 3)
        table = GoncarovTable(sys2, grid)
        s = LowerSet.with_max_weight(2, 3)
        member = MPoly.zero(2)
        for k in s:
            member = member + table.poly(k) * Q(rng.randint(-5, 5), rng.randint(1, 3))
        coeffs = expand_in_goncarov(sys2, grid, member, s)
        rebuilt = MPoly.zero(2)
        for k, c in coeffs.items():
            rebuilt = rebuilt + table.poly(k) * c
        assert rebuilt == member

    def test_not_in_span(self):
        rng = random.Random(15)
        sys1 = separable_system(1, ["derivative"])
        grid = random_grid(rng, 1, 2)
        with pytest.raises(NotInSpan):
            expand_in_goncarov(sys1, grid, P(1, {(3,): 1}), LowerSet([(0,), (1,)]))

    def test_round_trip_three_variables(self):
        rng = random.Random(16)
        sys3 = separable_system(3, ["derivative", "forward_diff", "backward_diff"])
        grid = random_grid(rng, 3, 3)
        table = GoncarovTable(sys3, grid)
        s = LowerSet.with_max_weight(3, 3)
        member = MPoly.zero(3)
        for k in s:
            member = member + table.poly(k) * Q(rng.randint(-4, 4), rng.randint(1, 3))
        coeffs = expand_in_goncarov(sys3, grid, member, s)
        rebuilt = MPoly.zero(3)
        for k, c in coeffs.items():
            rebuilt = rebuilt + table.poly(k) * c
        assert rebuilt == member

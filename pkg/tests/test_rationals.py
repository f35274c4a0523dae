"""Rational scalars: exactness, parsing, formatting, float rejection."""

import pytest

from deltagon.errors import BadParams
from deltagon.rationals import Q, format_rational, parse_rational


class TestConstruction:
    def test_lowest_terms_positive_denominator(self):
        q = Q(-4, -6)
        assert q.numerator == 2 and q.denominator == 3

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            Q(0.5)
        with pytest.raises(TypeError):
            Q(1, 2.0)

    def test_string_form(self):
        assert Q("3/2") == Q(3, 2)
        assert Q("-7") == -7


class TestParsing:
    @pytest.mark.parametrize("text", ["3/2", "-3/2", "0", "12", "-1/7"])
    def test_round_trip(self, text):
        assert format_rational(parse_rational(text)) == text

    def test_unreduced_input_normalizes(self):
        assert format_rational(parse_rational("4/6")) == "2/3"

    @pytest.mark.parametrize("text", ["1.5", "1/0", "1/-2", "a", "", "1 / 2", "+3"])
    def test_rejects_non_literals(self, text):
        with pytest.raises(BadParams):
            parse_rational(text)


class TestConcurrentOracle:
    def test_indicator_memo_is_stable_under_threads(self):
        from concurrent.futures import ThreadPoolExecutor

        from deltagon.operators import forward_difference_op
        from deltagon.multiindex import indices_up_to_weight

        ind = forward_difference_op(2, 0).indicator
        indices = list(indices_up_to_weight(2, 12)) * 4

        def query(idx):
            return idx, ind.coefficient(idx)

        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(query, indices))
        reference = {idx: ind.coefficient(idx) for idx in set(indices)}
        for idx, value in results:
            assert value == reference[idx]

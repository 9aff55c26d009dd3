from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from gradkernel import (
    BigradedElement,
    Coefficient,
    GradedSeries,
    VariableTable,
    associated_graded,
    check_gr_idempotence,
    euler,
    regrade,
    truncate,
)
from gradkernel.bigrading import weight_pair
from strategies import series, series_pairs, tables

T = VariableTable(("x",), (("xi", 2), ("zeta", -1), ("psi", 1)))


def gen(name, order=4):
    return GradedSeries.generator(T, name, order)


class TestSplit:
    def test_explicit_pairs(self):
        f = gen("xi") + gen("zeta") * gen("psi") + GradedSeries.one(T, 4)
        b = associated_graded(f)
        assert b.pairs() == ((0, 0), (1, 1), (2, 0))
        assert b.component((2, 0)) == gen("xi")
        assert b.component((5, 5)).is_zero()

    def test_component_filing_validated(self):
        with pytest.raises(ValueError):
            BigradedElement(T, 4, {(0, 0): gen("xi")})

    def test_zero_components_dropped(self):
        b = BigradedElement(T, 4, {(2, 0): GradedSeries.zero(T, 4)})
        assert b.pairs() == ()

    @given(series())
    def test_regrade_inverts_split(self, f):
        assert regrade(associated_graded(f)) == f

    @given(series())
    def test_components_are_weight_pure(self, f):
        b = associated_graded(f)
        for pair, piece in b.components.items():
            for expo in piece.terms:
                assert weight_pair(f.table, expo) == pair

    @given(series_pairs())
    def test_split_respects_products(self, pair):
        # weights add under multiplication, so the split of a product is
        # the pairwise convolution of the splits
        f, g = pair
        zero = GradedSeries.zero(f.table, f.order)
        buckets = {}
        for (pf, nf_), fp in associated_graded(f).components.items():
            for (pg, ng), gp in associated_graded(g).components.items():
                key = (pf + pg, nf_ + ng)
                buckets[key] = buckets.get(key, zero) + fp * gp
        split = associated_graded(f * g)
        for key, piece in buckets.items():
            assert split.component(key) == piece
        for key in split.pairs():
            assert key in buckets


class TestEuler:
    def test_diagonal_action(self):
        f = gen("xi") + gen("zeta")
        assert euler(f, "plus") == gen("xi") * 2
        assert euler(f, "minus") == gen("zeta")
        assert euler(f, "total") == gen("xi") * 2 - gen("zeta")

    def test_unknown_selector(self):
        with pytest.raises(ValueError):
            euler(gen("xi"), "sideways")

    @given(series_pairs(), st.sampled_from(["plus", "minus", "total"]))
    def test_leibniz(self, pair, which):
        f, g = pair
        assert euler(f * g, which) == euler(f, which) * g + f * euler(
            g, which
        )

    @given(series(), st.sampled_from(["plus", "minus", "total"]))
    def test_linear(self, f, which):
        assert euler(f + f, which) == euler(f, which) + euler(f, which)

    @given(series())
    def test_total_is_plus_minus_difference(self, f):
        assert euler(f, "total") == euler(f, "plus") - euler(f, "minus")

    @given(series(), st.sampled_from(["plus", "minus", "total"]))
    def test_operators_commute(self, f, which):
        other = {"plus": "minus", "minus": "total", "total": "plus"}[which]
        assert euler(euler(f, which), other) == euler(
            euler(f, other), which
        )

    @given(series())
    def test_eigenvalue_on_pure_components(self, f):
        # each weight-pure component is an eigenvector of both operators
        b = associated_graded(f)
        for (pos, neg), piece in b.components.items():
            assert euler(piece, "plus") == piece * pos
            assert euler(piece, "minus") == piece * neg


class TestGrIdempotence:
    @given(series())
    def test_always_holds(self, f):
        report = check_gr_idempotence(f)
        assert report.passed
        assert len(report.layers) == f.order

    @given(series(), st.data())
    def test_truncated_prefix(self, f, data):
        p = data.draw(st.integers(1, f.order))
        report = check_gr_idempotence(f, p)
        assert report.passed
        assert [q for q, _ in report.layers] == list(range(p))

    def test_layers_match_slices(self):
        f = gen("zeta", 4) + gen("xi", 4) * gen("zeta", 4)
        report = check_gr_idempotence(f)
        assert all(ok for _, ok in report.layers)
        # nothing lives at weight >= 2 here, so cutting there drops no terms
        assert truncate(f, 2) == gen("zeta", 2) + gen("xi", 2) * gen("zeta", 2)

"""Normal forms: factor homogeneous series over minimal degree-0 monomials."""

from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from gradkernel import (
    Coefficient,
    GradedSeries,
    VariableTable,
    degree_zero_monomial_basis,
    from_normal_form,
    to_normal_form,
    truncate,
)
from strategies import series, tables

# one even climbing generator, one even falling one; the degree equation
# 2p = 4q has Hilbert basis {(2; 1)}
XIPSI = VariableTable(("x",), (("xi", 2), ("psi", -4)))

# odd generators never take part in the degree-0 basis
MIXED = VariableTable(
    ("x",), (("xi", 2), ("psi", -4), ("e", 1), ("f", -1))
)


class TestBasis:
    def test_single_pair(self):
        assert degree_zero_monomial_basis(XIPSI) == ((2, 1),)

    def test_odd_generators_ignored(self):
        assert degree_zero_monomial_basis(MIXED) == ((2, 1, 0, 0),)

    def test_no_cancellation_no_basis(self):
        up_only = VariableTable((), (("u", 2), ("v", 4)))
        assert degree_zero_monomial_basis(up_only) == ()
        odd_pair = VariableTable((), (("e", 1), ("f", -1)))
        assert degree_zero_monomial_basis(odd_pair) == ()

    def test_incommensurable_degrees(self):
        t = VariableTable((), (("u", 2), ("em", -2), ("en", -4)))
        assert degree_zero_monomial_basis(t) == ((1, 1, 0), (2, 0, 1))


class TestToNormalForm:
    def test_two_term_example(self):
        # frozen: xi and x xi^3 psi share the leading monomial xi; the
        # second carries one copy of the basis monomial
        f = GradedSeries(
            XIPSI,
            6,
            {
                (1, 0): Coefficient.one(XIPSI),
                (3, 1): Coefficient.symbol(XIPSI, "x"),
            },
        )
        nf = to_normal_form(f)
        assert nf.degree == 2
        assert nf.basis == ((2, 1),)
        assert nf.parts == {
            (1, 0): {
                (0,): Coefficient.one(XIPSI),
                (1,): Coefficient.symbol(XIPSI, "x"),
            }
        }

    def test_zero_series(self):
        nf = to_normal_form(GradedSeries.zero(XIPSI, 4))
        assert nf.degree is None
        assert nf.parts == {}
        assert from_normal_form(nf).is_zero()

    def test_mixed_degrees_rejected(self):
        f = GradedSeries.generator(
            XIPSI, "xi", 4
        ) + GradedSeries.one(XIPSI, 4)
        with pytest.raises(ValueError):
            to_normal_form(f)

    def test_component_input_accepted(self):
        f = GradedSeries.generator(XIPSI, "xi", 4) + GradedSeries.one(XIPSI, 4)
        nf = to_normal_form(f.component(2))
        assert nf.degree == 2
        assert from_normal_form(nf) == f.component(2).as_series()

    def test_odd_factors_ride_in_the_lead(self):
        # e f xi^2 psi: even part is one full basis monomial, odd part
        # stays in the leading exponent tuple
        f = GradedSeries.monomial(MIXED, (2, 1, 1, 1), 8)
        nf = to_normal_form(f)
        assert list(nf.parts) == [(0, 0, 1, 1)]
        assert nf.parts[(0, 0, 1, 1)] == {(1,): Coefficient.one(MIXED)}

    def test_deterministic_tie_break(self):
        t = VariableTable((), (("u", 2), ("em", -2), ("en", -4)))
        # u^3 em en: c = 6 - 2 - 4 = 0; greedy subtracts the lex-largest
        # basis element (2; 0, 1) first
        f = GradedSeries.monomial(t, (3, 1, 1), 9)
        nf = to_normal_form(f)
        assert nf.basis == ((1, 1, 0), (2, 0, 1))
        assert nf.parts == {
            (0, 0, 0): {(1, 1): Coefficient.one(t)}
        }


class TestRoundTrip:
    def test_exact_at_original_order(self):
        f = GradedSeries(
            XIPSI,
            6,
            {
                (1, 0): Coefficient.one(XIPSI),
                (3, 1): Coefficient.symbol(XIPSI, "x"),
            },
        )
        assert from_normal_form(to_normal_form(f)) == f

    def test_smaller_order_matches_truncation(self):
        # falling weights 0, 4, 8 across the three terms
        f = GradedSeries(
            XIPSI,
            10,
            {
                (1, 0): Coefficient.one(XIPSI),
                (3, 1): Coefficient.symbol(XIPSI, "x"),
                (5, 2): Coefficient.scalar(XIPSI, Fraction(1, 2)),
            },
        )
        nf = to_normal_form(f)
        for p in (10, 9, 6, 3, 1):
            assert from_normal_form(nf, p) == truncate(f, p)

    @given(st.data())
    def test_random_components_roundtrip(self, data):
        table = data.draw(tables(max_graded=4))
        f = data.draw(series(table=table, max_terms=5))
        for degree, comp in f.components().items():
            nf = to_normal_form(comp)
            assert nf.degree == degree
            assert from_normal_form(nf) == comp.as_series()

    @given(st.data())
    def test_random_truncation_consistency(self, data):
        table = data.draw(tables(max_graded=3))
        f = data.draw(series(table=table, order=5, max_terms=5))
        p = data.draw(st.integers(1, 5))
        for _, comp in f.components().items():
            nf = to_normal_form(comp)
            assert from_normal_form(nf, p) == truncate(comp.as_series(), p)

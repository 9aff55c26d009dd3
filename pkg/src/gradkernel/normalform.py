"""Canonical factorization of homogeneous series over the degree-0 basis.

Every graded monomial factors uniquely as a leading monomial times a product
of minimal degree-0 monomials in the even generators.  The odd factors ride
along in the leading part untouched (they never help build degree 0, since an
odd generator cannot repeat).  On the even exponents the factorization is the
greedy decomposition of a solution to the degree equation into a minimal
inhomogeneous part plus multiples of the homogeneous Hilbert basis.

The normal form is exact: rebuilding at the original order recovers the
series on the nose, and rebuilding at a smaller order agrees with truncation.
"""

from __future__ import annotations

from .coefficients import Coefficient
from .diophantine import Solution, decompose_solution, hilbert_basis, hilbert_data
from .grading import VariableTable
from .series import Exponents, GradedSeries, HomogeneousComponent

TailKey = tuple[int, ...]


def _even_sides(table: VariableTable):
    """Indices and weights of the even positive / even negative generators."""
    pos = [i for i in table.even_indices if table.degrees[i] > 0]
    neg = [i for i in table.even_indices if table.degrees[i] < 0]
    a = tuple(table.degrees[i] for i in pos)
    b = tuple(-table.degrees[i] for i in neg)
    return pos, neg, a, b


def _embed(table: VariableTable, pos, neg, sol: Solution) -> Exponents:
    expo = [0] * len(table.graded)
    for i, e in zip(pos, sol.p):
        expo[i] = e
    for i, e in zip(neg, sol.q):
        expo[i] = e
    return tuple(expo)


def degree_zero_monomial_basis(table: VariableTable) -> tuple[Exponents, ...]:
    """Minimal nontrivial degree-0 monomials, as full exponent tuples.

    Only even generators take part.  Empty when either even side is empty,
    and more generally whenever no cancellation between positive and
    negative even degrees is possible.
    """
    pos, neg, a, b = _even_sides(table)
    return tuple(_embed(table, pos, neg, s) for s in hilbert_basis(a, b))


class NormalForm:
    """A homogeneous series as leading monomials with degree-0 tails.

    ``parts`` maps each leading exponent tuple to its tail, a map from
    multiplicity vectors over ``basis`` to coefficients.  ``degree`` is None
    exactly for the zero series.
    """

    __slots__ = ("table", "order", "degree", "basis", "parts")

    def __init__(
        self,
        table: VariableTable,
        order: int,
        degree: int | None,
        basis: tuple[Exponents, ...],
        parts: dict[Exponents, dict[TailKey, Coefficient]],
    ):
        self.table = table
        self.order = order
        self.degree = degree
        self.basis = basis
        self.parts = parts

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return (
            self.table == other.table
            and self.order == other.order
            and self.degree == other.degree
            and self.basis == other.basis
            and self.parts == other.parts
        )

    def __repr__(self):
        return (
            f"NormalForm(degree={self.degree}, leadings={len(self.parts)}, "
            f"basis={len(self.basis)})"
        )


def to_normal_form(f) -> NormalForm:
    """Factor a homogeneous series (or component) over the degree-0 basis.

    Ties in the factorization are broken by the greedy decomposition, so the
    result is deterministic.  Raises ValueError on mixed degrees.
    """
    if isinstance(f, HomogeneousComponent):
        f = f.as_series()
    if not f.is_homogeneous():
        raise ValueError(
            f"series mixes degrees {sorted(f.component_degrees())}"
        )
    degrees = f.component_degrees()
    degree = degrees[0] if degrees else None
    table = f.table
    pos, neg, a, b = _even_sides(table)
    basis = degree_zero_monomial_basis(table)
    basis_solutions = hilbert_basis(a, b)
    parts: dict[Exponents, dict[TailKey, Coefficient]] = {}
    for expo, coef in f.terms.items():
        p = tuple(expo[i] for i in pos)
        q = tuple(expo[i] for i in neg)
        c = sum(x * y for x, y in zip(a, p)) - sum(
            x * y for x, y in zip(b, q)
        )
        minimal, counts = decompose_solution(
            Solution(p, q), hilbert_data(a, b, c)
        )
        lead = list(_embed(table, pos, neg, minimal))
        even = set(pos) | set(neg)
        for i in range(len(expo)):
            if i not in even:
                lead[i] = expo[i]
        key = tuple(counts.get(s, 0) for s in basis_solutions)
        parts.setdefault(tuple(lead), {})[key] = coef
    return NormalForm(table, f.order, degree, basis, parts)


def from_normal_form(nf: NormalForm, p: int | None = None) -> GradedSeries:
    """Expand the factorization back into a series at order p.

    p defaults to the order the form was taken at; a smaller p drops the
    tails that dig too deep, matching plain truncation.
    """
    if p is None:
        p = nf.order
    out: dict[Exponents, Coefficient] = {}
    for lead, tail in nf.parts.items():
        for counts, coef in tail.items():
            expo = list(lead)
            for mult, basis_expo in zip(counts, nf.basis):
                for i, e in enumerate(basis_expo):
                    expo[i] += mult * e
            out[tuple(expo)] = coef
    return GradedSeries(nf.table, p, out)

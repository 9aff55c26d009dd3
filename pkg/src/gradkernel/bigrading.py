"""Refining the degree into a weight pair, and the operators that see it.

Each graded monomial carries a positive weight (degree climbed through
positive generators) and a negative weight (degree spent on negative ones);
the difference is the plain degree.  Splitting a series by the pair is exact
and loses nothing below the truncation order, so the split both refines the
degree decomposition and realizes the filtration layers.  Rebuilding from
the split is the identity, on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TableMismatch, TruncationMismatch
from .grading import VariableTable
from .series import (
    GradedSeries,
    negative_weight,
    positive_weight,
    slice_by_negative_weight,
    truncate,
)

WeightPair = tuple[int, int]


def weight_pair(table: VariableTable, expo) -> WeightPair:
    return positive_weight(table, expo), negative_weight(table, expo)


class BigradedElement:
    """A series split into components of fixed weight pair."""

    __slots__ = ("table", "order", "components")

    def __init__(
        self,
        table: VariableTable,
        order: int,
        components: dict[WeightPair, GradedSeries],
    ):
        self.table = table
        self.order = order
        clean: dict[WeightPair, GradedSeries] = {}
        for pair, piece in sorted(components.items()):
            if piece.table != table:
                raise TableMismatch("component lives over a different table")
            if piece.order != order:
                raise TruncationMismatch(
                    f"component order {piece.order} differs from {order}"
                )
            for expo in piece.terms:
                if weight_pair(table, expo) != pair:
                    raise ValueError(
                        f"component filed under {pair} contains a monomial "
                        f"of weight pair {weight_pair(table, expo)}"
                    )
            if not piece.is_zero():
                clean[pair] = piece
        self.components = clean

    def pairs(self) -> tuple[WeightPair, ...]:
        return tuple(self.components)

    def component(self, pair: WeightPair) -> GradedSeries:
        return self.components.get(
            pair, GradedSeries.zero(self.table, self.order)
        )

    def __eq__(self, other):
        if not isinstance(other, BigradedElement):
            return NotImplemented
        return (
            self.table == other.table
            and self.order == other.order
            and self.components == other.components
        )

    def __repr__(self):
        return f"BigradedElement(pairs={list(self.components)})"


def associated_graded(f: GradedSeries) -> BigradedElement:
    """Split f into its weight-pair components."""
    buckets: dict[WeightPair, dict] = {}
    for expo, coef in f.terms.items():
        buckets.setdefault(weight_pair(f.table, expo), {})[expo] = coef
    return BigradedElement(
        f.table,
        f.order,
        {
            pair: GradedSeries(f.table, f.order, terms)
            for pair, terms in buckets.items()
        },
    )


def regrade(b: BigradedElement) -> GradedSeries:
    """Reassemble the series; inverse to :func:`associated_graded`."""
    total = GradedSeries.zero(b.table, b.order)
    for piece in b.components.values():
        total = total + piece
    return total


def euler(f: GradedSeries, which: str = "total") -> GradedSeries:
    """Scale each monomial by its weight: "plus", "minus", or "total".

    The total version uses the plain degree, the difference of the two
    weights.  All three act diagonally, so they satisfy the Leibniz rule
    over products and commute with each other.
    """
    if which not in ("plus", "minus", "total"):
        raise ValueError(f"unknown weight selector {which!r}")
    out = {}
    for expo, coef in f.terms.items():
        pos, neg = weight_pair(f.table, expo)
        factor = {"plus": pos, "minus": neg, "total": pos - neg}[which]
        if factor:
            out[expo] = coef * factor
    return GradedSeries(f.table, f.order, out)


@dataclass
class GrIdempotenceReport:
    """Per-layer outcome of the truncation-compatibility check."""

    layers: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.layers)


def check_gr_idempotence(
    f: GradedSeries, p: int | None = None
) -> GrIdempotenceReport:
    """Each filtration layer of f must survive truncation just above it.

    The layer at negative weight q only involves monomials of that exact
    weight, so computing it before or after truncating to order q + 1 has
    to agree.  Checks every q below p (default: below f's order).
    """
    if p is None:
        p = f.order
    report = GrIdempotenceReport()
    for q in range(p):
        direct = slice_by_negative_weight(f, q)
        after = slice_by_negative_weight(truncate(f, q + 1), q)
        report.layers.append((q, direct.terms == after.terms))
    return report

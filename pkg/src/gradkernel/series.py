"""Graded formal series truncated at a filtration order.

A monomial in the graded symbols is an exponent vector aligned with the
table; odd-degree symbols never carry an exponent above 1.  Its positive and
negative weights count the degree contributions of positive and negative
generators separately, and the total degree is their difference.

The negative weight drives the filtration: a series of truncation order p
represents a function modulo everything of negative weight >= p, so monomials
at or past the order are dropped on sight.  Products pick up the Koszul sign
from transposing odd factors back into table order.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .coefficients import Coefficient
from .errors import (
    CapTooSmall,
    OddExponent,
    TableMismatch,
    TruncationMismatch,
    ZeroInput,
)
from .grading import GradedDimension, VariableTable

Exponents = tuple[int, ...]


def monomial_degree(table: VariableTable, expo: Exponents) -> int:
    return sum(e * d for e, (_, d) in zip(expo, table.graded))


def positive_weight(table: VariableTable, expo: Exponents) -> int:
    return sum(e * d for e, (_, d) in zip(expo, table.graded) if d > 0)


def negative_weight(table: VariableTable, expo: Exponents) -> int:
    return -sum(e * d for e, (_, d) in zip(expo, table.graded) if d < 0)


def validate_monomial(table: VariableTable, expo: Exponents) -> Exponents:
    expo = tuple(expo)
    if len(expo) != len(table.graded):
        raise ValueError(
            f"exponent vector {expo} does not fit {len(table.graded)} graded symbols"
        )
    for i, e in enumerate(expo):
        if e < 0:
            raise ValueError(f"negative exponent {e} on graded symbol")
        if e > 1 and table.is_odd(i):
            raise OddExponent(
                f"odd symbol {table.graded[i][0]} with exponent {e}"
            )
    return expo


def monomial_multiply(table: VariableTable, e1: Exponents, e2: Exponents):
    """Product of two canonical monomials: (exponents, sign), or None.

    None signals that an odd symbol appears in both factors, so the product
    vanishes.  The sign counts the transpositions needed to merge the odd
    factors of e2 past those of e1 into table order.
    """
    crossings = 0
    left = [i for i in table.odd_indices if e1[i]]
    right = [j for j in table.odd_indices if e2[j]]
    for i in left:
        for j in right:
            if i == j:
                return None
            if i > j:
                crossings += 1
    expo = tuple(x + y for x, y in zip(e1, e2))
    return expo, (-1 if crossings % 2 else 1)


class GradedSeries:
    """Finitely many graded monomials with Laurent coefficients, mod order p.

    ``terms`` maps exponent vectors to nonzero :class:`Coefficient` values;
    anything of negative weight >= p is dropped during normalization, which
    is exactly what working in the quotient means.
    """

    __slots__ = ("table", "order", "terms")

    def __init__(self, table: VariableTable, order: int, terms=None):
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        self.table = table
        self.order = order
        clean: dict[Exponents, Coefficient] = {}
        for expo, coef in (terms or {}).items():
            expo = validate_monomial(table, expo)
            if negative_weight(table, expo) >= order:
                continue
            if isinstance(coef, Rational):
                coef = Coefficient.scalar(table, coef)
            if coef.is_zero():
                continue
            if expo in clean:
                merged = clean[expo] + coef
                if merged.is_zero():
                    del clean[expo]
                else:
                    clean[expo] = merged
            else:
                clean[expo] = coef
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, table: VariableTable, order: int) -> "GradedSeries":
        return cls(table, order)

    @classmethod
    def one(cls, table: VariableTable, order: int) -> "GradedSeries":
        return cls.from_coefficient(Coefficient.one(table), order)

    @classmethod
    def from_coefficient(cls, coef: Coefficient, order: int) -> "GradedSeries":
        trivial = (0,) * len(coef.table.graded)
        return cls(coef.table, order, {trivial: coef})

    @classmethod
    def generator(
        cls, table: VariableTable, name: str, order: int
    ) -> "GradedSeries":
        if name in table.base:
            return cls.from_coefficient(Coefficient.symbol(table, name), order)
        i = table.graded_index(name)
        expo = tuple(1 if j == i else 0 for j in range(len(table.graded)))
        return cls(table, order, {expo: Coefficient.one(table)})

    @classmethod
    def monomial(
        cls, table: VariableTable, expo: Exponents, order: int, coef=1
    ) -> "GradedSeries":
        if isinstance(coef, Rational):
            coef = Coefficient.scalar(table, coef)
        return cls(table, order, {tuple(expo): coef})

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def component_degrees(self) -> tuple[int, ...]:
        return tuple(
            sorted({monomial_degree(self.table, e) for e in self.terms})
        )

    def component(self, degree: int) -> "HomogeneousComponent":
        terms = {
            e: c
            for e, c in self.terms.items()
            if monomial_degree(self.table, e) == degree
        }
        return HomogeneousComponent(self.table, degree, self.order, terms)

    def components(self) -> dict[int, "HomogeneousComponent"]:
        return {d: self.component(d) for d in self.component_degrees()}

    def is_homogeneous(self) -> bool:
        return len(self.component_degrees()) <= 1

    def coefficient_part(self) -> Coefficient:
        """The coefficient sitting on the trivial graded monomial."""
        trivial = (0,) * len(self.table.graded)
        return self.terms.get(trivial, Coefficient.zero(self.table))

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "GradedSeries"):
        if self.table != other.table:
            raise TableMismatch("series over different tables")
        if self.order != other.order:
            raise TruncationMismatch(
                f"series orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other):
        if isinstance(other, Rational):
            other = GradedSeries.from_coefficient(
                Coefficient.scalar(self.table, other), self.order
            )
        if not isinstance(other, GradedSeries):
            return NotImplemented
        self._check(other)
        merged = dict(self.terms)
        for expo, coef in other.terms.items():
            merged[expo] = merged[expo] + coef if expo in merged else coef
        return GradedSeries(self.table, self.order, merged)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries(
            self.table, self.order, {e: -c for e, c in self.terms.items()}
        )

    def __sub__(self, other):
        if isinstance(other, Rational):
            other = GradedSeries.from_coefficient(
                Coefficient.scalar(self.table, other), self.order
            )
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (Rational, Coefficient)):
            return GradedSeries(
                self.table,
                self.order,
                {e: c * other for e, c in self.terms.items()},
            )
        if not isinstance(other, GradedSeries):
            return NotImplemented
        self._check(other)
        out: dict[Exponents, Coefficient] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                hit = monomial_multiply(self.table, e1, e2)
                if hit is None:
                    continue
                expo, sign = hit
                if negative_weight(self.table, expo) >= self.order:
                    continue
                coef = c1 * c2 if sign > 0 else -(c1 * c2)
                out[expo] = out[expo] + coef if expo in out else coef
        return GradedSeries(self.table, self.order, out)

    def __rmul__(self, other):
        if isinstance(other, (Rational, Coefficient)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if not isinstance(other, Rational):
            return NotImplemented
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative series power; invert explicitly")
        result = GradedSeries.one(self.table, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (
            self.table == other.table
            and self.order == other.order
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(
            (self.table, self.order, frozenset(
                (e, frozenset(c.terms.items())) for e, c in self.terms.items()
            ))
        )

    def __repr__(self):
        from .render import format_series

        return f"GradedSeries({format_series(self)} @ {self.order})"


class HomogeneousComponent:
    """Single-degree slice of a series; the normal-form machinery's input."""

    __slots__ = ("table", "degree", "order", "terms")

    def __init__(self, table, degree, order, terms=None):
        self.table = table
        self.degree = degree
        self.order = order
        clean = {}
        for expo, coef in (terms or {}).items():
            expo = validate_monomial(table, expo)
            if monomial_degree(table, expo) != degree:
                raise ValueError(
                    f"monomial {expo} has degree "
                    f"{monomial_degree(table, expo)}, component wants {degree}"
                )
            if negative_weight(table, expo) >= order:
                continue
            if not coef.is_zero():
                clean[expo] = coef
        self.terms = clean

    def as_series(self) -> GradedSeries:
        return GradedSeries(self.table, self.order, dict(self.terms))

    def __eq__(self, other):
        if not isinstance(other, HomogeneousComponent):
            return NotImplemented
        return (
            self.table == other.table
            and self.degree == other.degree
            and self.order == other.order
            and self.terms == other.terms
        )

    def __repr__(self):
        from .render import format_series

        return (
            f"HomogeneousComponent({format_series(self.as_series())}"
            f" @ deg {self.degree})"
        )


def series_multiply(f: GradedSeries, g: GradedSeries) -> GradedSeries:
    """Function form of the graded product."""
    return f * g


def truncate(f: GradedSeries, p: int) -> GradedSeries:
    """Push f down the truncation tower to order p <= f.order."""
    if p > f.order:
        raise TruncationMismatch(
            f"cannot refine order {f.order} to {p}; towers only descend"
        )
    return GradedSeries(f.table, p, dict(f.terms))


def filtration_level(f: GradedSeries) -> int:
    """Largest q with f inside the q-th filtration ideal.

    Concretely the least negative weight among the monomials of f.  The zero
    series sits in every level, so it is rejected.
    """
    if f.is_zero():
        raise ZeroInput("the zero series has no filtration level")
    return min(negative_weight(f.table, e) for e in f.terms)


def slice_by_negative_weight(f: GradedSeries, q: int) -> GradedSeries:
    """Monomials of f with negative weight exactly q."""
    return GradedSeries(
        f.table,
        f.order,
        {
            e: c
            for e, c in f.terms.items()
            if negative_weight(f.table, e) == q
        },
    )


def _profile_table(gd: GradedDimension) -> VariableTable:
    names = []
    for d, n in gd.dims:
        tag = f"g{d}" if d > 0 else f"gm{-d}"
        for j in range(n):
            names.append((f"{tag}_{j}", d))
    return VariableTable(base=(), graded=tuple(names))


def quotient_graded_dimension(
    gd: GradedDimension, p: int, i: int, weight_cap: int
) -> int:
    """Count degree-i monomials with positive weight at most p.

    This is the graded dimension, in degree i, of the span of monomials the
    order-p quotient still sees.  Counting is by explicit enumeration over a
    synthetic table realizing ``gd``; odd generators are capped at exponent
    1.  Any qualifying monomial has polynomial weight at most 2p - i, so
    ``weight_cap`` below that is rejected as inexact.
    """
    if p < 0:
        raise ValueError("negative order")
    if weight_cap < 2 * p - i:
        raise CapTooSmall(
            f"weight cap {weight_cap} below exact bound {2 * p - i}"
        )
    table = _profile_table(gd)
    degrees = table.degrees
    count = 0

    def walk(idx: int, deg: int, pos: int, weight: int):
        nonlocal count
        if pos > p or weight > weight_cap:
            return
        if idx == len(degrees):
            if deg == i:
                count += 1
            return
        d = degrees[idx]
        cap = 1 if d % 2 else weight_cap
        e = 0
        while e <= cap:
            if weight + e > weight_cap:
                break
            if d > 0 and pos + e * d > p:
                break
            walk(idx + 1, deg + e * d, pos + max(d, 0) * e, weight + e)
            e += 1

    walk(0, 0, 0, 0)
    return count

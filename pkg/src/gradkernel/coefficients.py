"""Laurent polynomial coefficients with exact rational arithmetic.

Series coefficients are Laurent polynomials in the degree-0 base symbols of a
table, with :class:`fractions.Fraction` scalars.  Negative exponents are what
let a chart transition write 1/x on an overlap.  The representation is the
usual sparse one: a dict from exponent vectors (one slot per base symbol) to
nonzero Fractions.

Values are immutable after construction; every operation returns a fresh
object.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import OrderTooLarge, TableMismatch
from .grading import VariableTable

#: Guard for runaway Taylor expansions requested through the public helper.
MAX_TAYLOR_ORDER = 128


class Coefficient:
    """Sparse Laurent polynomial over the base symbols of a table."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VariableTable, terms=None):
        self.table = table
        clean: dict[tuple[int, ...], Fraction] = {}
        width = len(table.base)
        for expo, value in (terms or {}).items():
            expo = tuple(expo)
            if len(expo) != width:
                raise ValueError(
                    f"exponent vector {expo} does not fit {width} base symbols"
                )
            value = Fraction(value)
            if value:
                clean[expo] = clean.get(expo, Fraction(0)) + value
                if not clean[expo]:
                    del clean[expo]
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, table: VariableTable) -> "Coefficient":
        return cls(table)

    @classmethod
    def scalar(cls, table: VariableTable, value) -> "Coefficient":
        return cls(table, {(0,) * len(table.base): Fraction(value)})

    @classmethod
    def one(cls, table: VariableTable) -> "Coefficient":
        return cls.scalar(table, 1)

    @classmethod
    def symbol(cls, table: VariableTable, name: str) -> "Coefficient":
        i = table.base_index(name)
        expo = tuple(1 if j == i else 0 for j in range(len(table.base)))
        return cls(table, {expo: Fraction(1)})

    @classmethod
    def monomial(cls, table: VariableTable, expo, value=1) -> "Coefficient":
        return cls(table, {tuple(expo): Fraction(value)})

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        z = (0,) * len(self.table.base)
        return self.terms == {z: Fraction(1)}

    def as_unit(self):
        """Return (exponents, scalar) if this is a single Laurent monomial.

        Units of the Laurent ring are exactly these; returns None otherwise.
        """
        if len(self.terms) != 1:
            return None
        [(expo, value)] = self.terms.items()
        return expo, value

    def items(self):
        return self.terms.items()

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.table.base), Fraction(0))

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "Coefficient"):
        if self.table is not other.table and self.table != other.table:
            raise TableMismatch("coefficients over different tables")

    def __add__(self, other):
        if isinstance(other, Rational):
            other = Coefficient.scalar(self.table, other)
        if not isinstance(other, Coefficient):
            return NotImplemented
        self._check(other)
        merged = dict(self.terms)
        for expo, value in other.terms.items():
            merged[expo] = merged.get(expo, Fraction(0)) + value
        return Coefficient(self.table, merged)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(
            self.table, {e: -v for e, v in self.terms.items()}
        )

    def __sub__(self, other):
        if isinstance(other, Rational):
            other = Coefficient.scalar(self.table, other)
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Rational):
            q = Fraction(other)
            return Coefficient(
                self.table, {e: v * q for e, v in self.terms.items()}
            )
        if not isinstance(other, Coefficient):
            return NotImplemented
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + v1 * v2
        return Coefficient(self.table, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            unit = self.as_unit()
            if unit is None:
                raise ValueError("only monomial coefficients can be inverted")
            expo, value = unit
            inv = Coefficient(
                self.table, {tuple(-e for e in expo): Fraction(1) / value}
            )
            return inv ** (-n)
        result = Coefficient.one(self.table)
        square = self
        while n:
            if n & 1:
                result = result * square
            square = square * square if n > 1 else square
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Rational):
            other = Coefficient.scalar(self.table, other)
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash((self.table, frozenset(self.terms.items())))

    def __repr__(self):
        from .render import format_coefficient

        return f"Coefficient({format_coefficient(self)})"


def derivative(f: Coefficient, symbol: str) -> Coefficient:
    """Formal partial derivative; d(x^n) = n*x^(n-1) for any integer n."""
    i = f.table.base_index(symbol)
    out: dict[tuple[int, ...], Fraction] = {}
    for expo, value in f.terms.items():
        n = expo[i]
        if n == 0:
            continue
        e = list(expo)
        e[i] = n - 1
        e = tuple(e)
        out[e] = out.get(e, Fraction(0)) + n * value
    return Coefficient(f.table, out)


def taylor_shift(f: Coefficient, symbol: str, order: int) -> list[Coefficient]:
    """Successive scaled derivatives [f, f', f''/2!, ...] up to ``order``.

    Entry k is the k-th Taylor coefficient of f(x + t) as a polynomial in t,
    valid verbatim for negative exponents of x as well.
    """
    if order < 0:
        raise ValueError("negative Taylor order")
    if order > MAX_TAYLOR_ORDER:
        raise OrderTooLarge(f"Taylor order {order} exceeds cap {MAX_TAYLOR_ORDER}")
    out = [f]
    for k in range(1, order + 1):
        out.append(derivative(out[-1], symbol) * Fraction(1, k))
    return out


def binomial(n: int, k: int) -> Fraction:
    """Generalized binomial coefficient n*(n-1)*...*(n-k+1)/k! for integer n."""
    num = 1
    den = 1
    for t in range(k):
        num *= n - t
        den *= t + 1
    return Fraction(num, den)

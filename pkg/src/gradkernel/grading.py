"""Degrees, graded dimensions and variable tables.

The ground grading group is the integers.  A generator of degree d has parity
d mod 2: odd generators anticommute among themselves and square to zero, even
generators are ordinary polynomial variables.  The sign picked up when two
homogeneous elements swap places is ``commutation_sign``.

A :class:`VariableTable` fixes the ambient coordinates once and for all: an
ordered list of degree-0 base symbols (coefficients live in Laurent
polynomials over these) and an ordered list of graded symbols with nonzero
degrees.  Everything downstream (series, morphisms, charts) refers back to a
table, and mixing tables is an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ShiftCreatesDegreeZero

Degree = int

_NAME_OK = None  # compiled lazily


def _valid_name(name: str) -> bool:
    # identifier with optional trailing primes, e.g. x, zeta3, x', xi''
    global _NAME_OK
    if _NAME_OK is None:
        import re

        _NAME_OK = re.compile(r"[A-Za-z_][A-Za-z_0-9]*'*\Z")
    return bool(_NAME_OK.match(name))


def commutation_sign(d1: Degree, d2: Degree) -> int:
    """Sign (-1)^(d1*d2) governing the swap of two homogeneous factors."""
    return -1 if (d1 * d2) % 2 else 1


@dataclass(frozen=True)
class GradedDimension:
    """Finitely supported dimension count per nonzero degree.

    ``dims`` maps degree -> dimension; zero dimensions are dropped on
    construction and degree 0 is not allowed as a key.
    """

    dims: tuple[tuple[int, int], ...]

    def __init__(self, dims):
        items = dict(dims)
        for d, n in items.items():
            if d == 0:
                raise ValueError("degree 0 has no place in a graded dimension")
            if n < 0:
                raise ValueError(f"negative dimension {n} at degree {d}")
        cleaned = tuple(sorted((d, n) for d, n in items.items() if n > 0))
        object.__setattr__(self, "dims", cleaned)

    def as_dict(self) -> dict[int, int]:
        return dict(self.dims)

    def dimension(self, degree: int) -> int:
        return dict(self.dims).get(degree, 0)

    @property
    def total(self) -> int:
        return sum(n for _, n in self.dims)

    def degrees(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.dims)


def shift(gd: GradedDimension, k: int) -> GradedDimension:
    """Shift all degrees down by k: the result has dims'(i) = dims(i + k).

    Raises :class:`ShiftCreatesDegreeZero` when the shift would park a
    nonzero dimension at degree 0.
    """
    if gd.dimension(k) > 0:
        raise ShiftCreatesDegreeZero(f"shift by {k} moves degree {k} onto 0")
    return GradedDimension({d - k: n for d, n in gd.dims})


def dual(gd: GradedDimension) -> GradedDimension:
    """Reflect degrees: dims'(i) = dims(-i)."""
    return GradedDimension({-d: n for d, n in gd.dims})


def hom_dimension(gd1: GradedDimension, gd2: GradedDimension, p: int) -> int:
    """Dimension of the degree-p homogeneous maps between graded spaces.

    A map of degree p pairs the degree-i slot of the source with the
    degree-(i+p) slot of the target, so the count is
    sum_i dims1(i) * dims2(i + p).
    """
    return sum(n * gd2.dimension(d + p) for d, n in gd1.dims)


@dataclass(frozen=True)
class VariableTable:
    """Ordered coordinate system: base symbols and graded symbols.

    base:    names of the degree-0 symbols (the Laurent coefficient ring).
    graded:  (name, degree) pairs with degree != 0, in a fixed order that
             also fixes the canonical order of monomial factors.
    """

    base: tuple[str, ...]
    graded: tuple[tuple[str, int], ...]
    _degree_index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = list(self.base) + [n for n, _ in self.graded]
        if len(set(names)) != len(names):
            raise ValueError("duplicate symbol name in table")
        for n in names:
            if not _valid_name(n):
                raise ValueError(f"bad symbol name {n!r}")
        for n, d in self.graded:
            if d == 0:
                raise ValueError(f"graded symbol {n} has degree 0")
        object.__setattr__(
            self, "_degree_index", {n: d for n, d in self.graded}
        )

    # -- lookups ---------------------------------------------------------

    @property
    def graded_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.graded)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.graded)

    def degree_of(self, name: str) -> int:
        """Degree of a symbol; base symbols have degree 0."""
        if name in self._degree_index:
            return self._degree_index[name]
        if name in self.base:
            return 0
        raise KeyError(f"unknown symbol {name!r}")

    def has_symbol(self, name: str) -> bool:
        return name in self.base or name in self._degree_index

    def graded_index(self, name: str) -> int:
        return self.graded_names.index(name)

    def base_index(self, name: str) -> int:
        return self.base.index(name)

    def is_odd(self, i: int) -> bool:
        """Parity of the i-th graded symbol."""
        return self.graded[i][1] % 2 != 0

    @property
    def odd_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.graded)) if self.is_odd(i))

    @property
    def even_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.graded)) if not self.is_odd(i))

    def graded_dimension(self) -> GradedDimension:
        counts: dict[int, int] = {}
        for _, d in self.graded:
            counts[d] = counts.get(d, 0) + 1
        return GradedDimension(counts)

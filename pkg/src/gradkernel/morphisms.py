"""Graded algebra morphisms given by generator images, and their pullbacks.

A morphism from a source table to a target table assigns to every target
symbol a series over the source; pulling back a series substitutes these
images.  Graded symbols substitute by plain (signed) multiplication.  A base
symbol image splits as beta + delta, the part on the trivial graded monomial
plus a graded correction, and a power x^n expands binomially around beta:

    (beta + delta)^n  =  sum_k  C(n, k) beta^(n-k) delta^k.

For a degree-preserving morphism the correction delta automatically sits in
filtration level >= 1 (a nontrivial degree-0 monomial must contain negative
generators), so the sum leaves the truncation window after finitely many
steps.  Corrections at filtration level 0 are tolerated when they are odd and
hence nilpotent; anything else, and negative powers of a non-monomial beta,
have no terminating expansion and raise :class:`NonFormalSubstitution`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .coefficients import Coefficient, binomial
from .errors import (
    NonComposableDomains,
    NonFormalSubstitution,
    TableMismatch,
    TruncationMismatch,
)
from .grading import VariableTable
from .series import (
    GradedSeries,
    filtration_level,
    monomial_degree,
    negative_weight,
    truncate,
)


class GradedMorphism:
    """Images for every target symbol, as series over the source table."""

    __slots__ = ("source", "target", "order", "images")

    def __init__(
        self,
        source: VariableTable,
        target: VariableTable,
        order: int,
        images: dict[str, GradedSeries],
    ):
        self.source = source
        self.target = target
        self.order = order
        checked: dict[str, GradedSeries] = {}
        for name in list(target.base) + list(target.graded_names):
            if name not in images:
                raise ValueError(f"no image for target symbol {name!r}")
            img = images[name]
            if img.table != source:
                raise TableMismatch(
                    f"image of {name!r} lives over the wrong table"
                )
            if img.order != order:
                raise TruncationMismatch(
                    f"image of {name!r} has order {img.order}, morphism {order}"
                )
            checked[name] = img
        self.images = checked

    @classmethod
    def identity(cls, table: VariableTable, order: int) -> "GradedMorphism":
        return cls(
            table,
            table,
            order,
            {
                name: GradedSeries.generator(table, name, order)
                for name in list(table.base) + list(table.graded_names)
            },
        )

    @classmethod
    def from_partial(
        cls,
        source: VariableTable,
        target: VariableTable,
        order: int,
        images: dict[str, GradedSeries],
    ) -> "GradedMorphism":
        """Fill unmentioned target symbols with the same-named source generator."""
        full = dict(images)
        for name in list(target.base) + list(target.graded_names):
            if name not in full:
                if not source.has_symbol(name):
                    raise ValueError(
                        f"no image for {name!r} and the source has no such symbol"
                    )
                full[name] = GradedSeries.generator(source, name, order)
        return cls(source, target, order, full)

    def __eq__(self, other):
        if not isinstance(other, GradedMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.order == other.order
            and self.images == other.images
        )

    def __repr__(self):
        from .render import format_morphism

        return f"GradedMorphism{format_morphism(self)}"


class _Substitution:
    """Caching worker for one pullback run."""

    def __init__(self, morphism: GradedMorphism):
        self.m = morphism
        self.order = morphism.order
        self.source = morphism.source
        self._graded_powers: dict[tuple[str, int], GradedSeries] = {}
        self._base_powers: dict[tuple[int, int], GradedSeries] = {}
        self._splits: list[tuple[Coefficient, GradedSeries] | None] = [
            None
        ] * len(morphism.target.base)

    def _split_base(self, j: int):
        cached = self._splits[j]
        if cached is not None:
            return cached
        name = self.m.target.base[j]
        img = self.m.images[name]
        beta = img.coefficient_part()
        delta = img - GradedSeries.from_coefficient(beta, self.order)
        for expo in delta.terms:
            if negative_weight(self.source, expo) == 0 and not any(
                expo[i] for i in self.source.odd_indices
            ):
                raise NonFormalSubstitution(
                    f"correction of base symbol {name!r} is neither "
                    "filtered nor nilpotent"
                )
        self._splits[j] = (beta, delta)
        return beta, delta

    def base_power(self, j: int, n: int) -> GradedSeries:
        key = (j, n)
        hit = self._base_powers.get(key)
        if hit is not None:
            return hit
        name = self.m.target.base[j]
        img = self.m.images[name]
        if n >= 0:
            result = img ** n
        else:
            beta, delta = self._split_base(j)
            if beta.as_unit() is None:
                raise NonFormalSubstitution(
                    f"negative power of base symbol {name!r} whose image "
                    "has non-monomial base part"
                )
            result = GradedSeries.zero(self.source, self.order)
            dpow = GradedSeries.one(self.source, self.order)
            # delta^k eventually dies: each surviving term of the k-th power
            # needs at least k - #odd filtered factors
            limit = self.order + len(self.source.odd_indices) + 1
            for k in range(limit):
                if k > 0:
                    dpow = dpow * delta
                    if dpow.is_zero():
                        break
                result = result + (dpow * (beta ** (n - k))) * binomial(n, k)
        self._base_powers[key] = result
        return result

    def graded_power(self, name: str, e: int) -> GradedSeries:
        key = (name, e)
        hit = self._graded_powers.get(key)
        if hit is None:
            hit = self.m.images[name] ** e
            self._graded_powers[key] = hit
        return hit

    def coefficient_image(self, coef: Coefficient) -> GradedSeries:
        total = GradedSeries.zero(self.source, self.order)
        for bexpo, scalar in coef.terms.items():
            part = GradedSeries.one(self.source, self.order)
            for j, n in enumerate(bexpo):
                if n:
                    part = part * self.base_power(j, n)
            total = total + part * scalar
        return total

    def series_image(self, f: GradedSeries) -> GradedSeries:
        target = self.m.target
        total = GradedSeries.zero(self.source, self.order)
        for expo, coef in f.terms.items():
            part = self.coefficient_image(coef)
            for i, e in enumerate(expo):
                if e:
                    part = part * self.graded_power(target.graded_names[i], e)
            total = total + part
        return total


def pullback(morphism: GradedMorphism, f: GradedSeries) -> GradedSeries:
    """Substitute the generator images of ``morphism`` into f.

    f must live over the morphism's target table at the same order; the
    result lives over the source table.
    """
    if f.table != morphism.target:
        raise TableMismatch("series does not live over the morphism target")
    if f.order != morphism.order:
        raise TruncationMismatch(
            f"series order {f.order} differs from morphism order {morphism.order}"
        )
    return _Substitution(morphism).series_image(f)


def compose(
    phi: GradedMorphism, chi: GradedMorphism
) -> GradedMorphism:
    """The morphism pulling back through chi, then through phi.

    Tables must chain as phi: A -> B, chi: B -> C; the composite maps A -> C
    and satisfies pullback(compose(phi, chi), f) = pullback(phi,
    pullback(chi, f)).
    """
    if phi.target != chi.source:
        raise NonComposableDomains(
            "phi's target table is not chi's source table"
        )
    if phi.order != chi.order:
        raise TruncationMismatch(
            f"morphism orders differ: {phi.order} vs {chi.order}"
        )
    worker = _Substitution(phi)
    return GradedMorphism(
        phi.source,
        chi.target,
        phi.order,
        {name: worker.series_image(img) for name, img in chi.images.items()},
    )


def truncate_morphism(m: GradedMorphism, p: int) -> GradedMorphism:
    """Re-truncate every image to order p <= m.order."""
    return GradedMorphism(
        m.source,
        m.target,
        p,
        {name: truncate(img, p) for name, img in m.images.items()},
    )


@dataclass
class DegreeReport:
    """Outcome of the degree-preservation check."""

    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_degree_preserving(m: GradedMorphism) -> DegreeReport:
    """Report every target symbol whose image is not homogeneous of its degree.

    Never raises; a zero image preserves any degree vacuously.
    """
    report = DegreeReport()
    for name, img in m.images.items():
        expected = m.target.degree_of(name)
        found = sorted(
            {monomial_degree(m.source, e) for e in img.terms}
        )
        if found and found != [expected]:
            report.violations.append((name, expected, found))
    return report


@dataclass
class FiltrationReport:
    """Outcome of the filtration-compatibility check."""

    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _negative_test_monomials(table: VariableTable, order: int):
    """Monomials in the negative generators with weight 1 .. order-1."""
    neg = [i for i in range(len(table.graded)) if table.graded[i][1] < 0]
    caps = []
    for i in neg:
        d = -table.graded[i][1]
        caps.append(1 if table.is_odd(i) else (order - 1) // d)
    for combo in product(*(range(c + 1) for c in caps)):
        expo = [0] * len(table.graded)
        for i, e in zip(neg, combo):
            expo[i] = e
        expo = tuple(expo)
        w = negative_weight(table, expo)
        if 1 <= w < order:
            yield expo


def filtration_compatibility(m: GradedMorphism) -> FiltrationReport:
    """Check that pullback cannot climb out of the filtration.

    Runs over a generating family: every monomial in the negative target
    generators visible below the truncation order.  An image that vanishes
    outright sits arbitrarily deep and passes.
    """
    report = FiltrationReport()
    worker = _Substitution(m)
    for expo in _negative_test_monomials(m.target, m.order):
        level = negative_weight(m.target, expo)
        image = worker.series_image(
            GradedSeries.monomial(m.target, expo, m.order)
        )
        got = m.order if image.is_zero() else filtration_level(image)
        report.checked += 1
        if got < level:
            report.failures.append((expo, level, got))
    return report

"""Charts, transition morphisms, and overlap checks.

An atlas is a family of charts sharing one graded profile, with transition
morphisms between overlap localizations.  Overlaps are handled algebraically:
a chart marks which base symbols may be inverted, and transitions are checked
to use negative powers only on those.  Verification is always relative to the
truncation order; two-sided invertibility and the triple-overlap coherence of
transitions are checked, never assumed.

The second half builds the standard two-chart examples over the projective
line: a twisted bundle with two even generators (degrees 2 and 4) carrying a
quadratic correction, and a variant with two odd generators (degrees 1 and
-1) correcting the base coordinate itself.  For these the failure of a
correction to be a coboundary is decided exactly by an exponent-window
search, and the count of unremovable directions is enumerated directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .coefficients import Coefficient
from .errors import (
    DimensionMismatch,
    MissingTransition,
    TableMismatch,
    TruncationMismatch,
)
from .grading import VariableTable
from .morphisms import GradedMorphism, compose, truncate_morphism
from .series import GradedSeries


@dataclass(frozen=True)
class Chart:
    """A named variable table plus the base symbols invertible on overlaps."""

    name: str
    table: VariableTable
    laurent: frozenset = frozenset()

    def __post_init__(self):
        for name in self.laurent:
            if name not in self.table.base:
                raise ValueError(
                    f"laurent flag on unknown base symbol {name!r}"
                )


class Atlas:
    """Charts with transitions keyed by ordered chart-name pairs.

    The transition stored at (i, j) maps the j-chart symbols into series
    over the i-chart, so composing (i, j) with (j, k) travels i <- j <- k
    on functions.  Identity transitions (i, i) are filled in automatically.
    ``triples`` lists the (i, j, k) coherence checks this atlas owes.
    """

    __slots__ = ("charts", "transitions", "triples", "order")

    def __init__(self, charts, transitions, triples=(), order: int = 4):
        chart_map: dict[str, Chart] = {}
        for chart in charts:
            if chart.name in chart_map:
                raise ValueError(f"duplicate chart name {chart.name!r}")
            chart_map[chart.name] = chart
        profiles = {
            chart.table.graded_dimension() for chart in chart_map.values()
        }
        if len(profiles) > 1:
            raise ValueError("charts carry different graded profiles")
        self.charts = chart_map
        self.order = order
        checked: dict[tuple[str, str], GradedMorphism] = {}
        for (i, j), m in transitions.items():
            if i not in chart_map or j not in chart_map:
                raise ValueError(f"transition ({i!r}, {j!r}) names no chart")
            if m.source != chart_map[i].table:
                raise TableMismatch(
                    f"transition ({i!r}, {j!r}) has the wrong source table"
                )
            if m.target != chart_map[j].table:
                raise TableMismatch(
                    f"transition ({i!r}, {j!r}) has the wrong target table"
                )
            if m.order != order:
                raise TruncationMismatch(
                    f"transition ({i!r}, {j!r}) has order {m.order}, "
                    f"atlas {order}"
                )
            self._check_laurent(chart_map[i], (i, j), m)
            checked[(i, j)] = m
        for name, chart in chart_map.items():
            checked.setdefault(
                (name, name), GradedMorphism.identity(chart.table, order)
            )
        self.transitions = checked
        clean_triples = []
        for triple in triples:
            if len(triple) != 3 or any(n not in chart_map for n in triple):
                raise ValueError(f"bad triple {triple!r}")
            clean_triples.append(tuple(triple))
        self.triples = tuple(clean_triples)

    @staticmethod
    def _check_laurent(chart: Chart, key, m: GradedMorphism):
        for name, img in m.images.items():
            for coef in img.terms.values():
                for bexpo in coef.terms:
                    for idx, e in enumerate(bexpo):
                        base = chart.table.base[idx]
                        if e < 0 and base not in chart.laurent:
                            raise ValueError(
                                f"transition {key} image of {name!r} inverts "
                                f"base symbol {base!r}, not localized in "
                                f"chart {chart.name!r}"
                            )

    def transition(self, i: str, j: str) -> GradedMorphism:
        try:
            return self.transitions[(i, j)]
        except KeyError:
            raise MissingTransition(f"no transition ({i!r}, {j!r})") from None


def _at_order(m: GradedMorphism, p: int) -> GradedMorphism:
    return m if p == m.order else truncate_morphism(m, p)


def _image_mismatches(m1: GradedMorphism, m2: GradedMorphism, p: int):
    m1, m2 = _at_order(m1, p), _at_order(m2, p)
    return [
        name for name in m1.images if m1.images[name] != m2.images[name]
    ]


@dataclass
class PairCheck:
    pair: tuple[str, str]
    failed_symbols: list

    @property
    def ok(self) -> bool:
        return not self.failed_symbols


@dataclass
class InvertibilityReport:
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)


def verify_transitions(atlas: Atlas, p: int | None = None) -> InvertibilityReport:
    """Check that every stored transition has its two-sided inverse.

    For each pair (i, j) with i != j the partner (j, i) must be present
    (else MissingTransition) and both composites must equal the identity at
    order p.
    """
    if p is None:
        p = atlas.order
    report = InvertibilityReport()
    for (i, j) in sorted(atlas.transitions):
        if i == j:
            continue
        forward = atlas.transitions[(i, j)]
        backward = atlas.transition(j, i)
        ident = GradedMorphism.identity(atlas.charts[i].table, atlas.order)
        bad = _image_mismatches(compose(forward, backward), ident, p)
        report.entries.append(PairCheck((i, j), bad))
    return report


@dataclass
class TripleCheck:
    triple: tuple[str, str, str]
    failed_symbols: list

    @property
    def ok(self) -> bool:
        return not self.failed_symbols


@dataclass
class CocycleReport:
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)


def check_cocycle(atlas: Atlas, p: int | None = None) -> CocycleReport:
    """Compare the composite over each listed triple with the direct leg.

    For a triple (i, j, k): composing the (i, j) and (j, k) transitions must
    reproduce the (i, k) transition at order p.  Failing generator images
    are listed per triple.
    """
    if p is None:
        p = atlas.order
    report = CocycleReport()
    for (i, j, k) in atlas.triples:
        left = compose(atlas.transition(i, j), atlas.transition(j, k))
        direct = atlas.transition(i, k)
        report.entries.append(
            TripleCheck((i, j, k), _image_mismatches(left, direct, p))
        )
    return report


@dataclass
class CoboundaryReport:
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)


def check_coboundary(
    atlas: Atlas,
    gauges: dict[str, GradedMorphism],
    reference: Atlas,
    p: int | None = None,
) -> CoboundaryReport:
    """Test whether per-chart gauges carry ``reference`` onto ``atlas``.

    Each gauge is a morphism of its own chart; a missing entry means the
    identity.  The condition, for every transition pair (i, j): composing
    the atlas transition with the gauge of chart j equals composing the
    gauge of chart i with the reference transition, at order p.  When all
    pairs pass, the two atlases differ by a coboundary and the twist
    splits.
    """
    if set(atlas.charts) != set(reference.charts):
        raise ValueError("atlases cover different chart sets")
    for name in atlas.charts:
        if atlas.charts[name].table != reference.charts[name].table:
            raise TableMismatch(f"chart {name!r} tables differ")
    if atlas.order != reference.order:
        raise TruncationMismatch("atlas orders differ")
    if p is None:
        p = atlas.order
    full_gauges = {}
    for name, chart in atlas.charts.items():
        g = gauges.get(name)
        if g is None:
            g = GradedMorphism.identity(chart.table, atlas.order)
        elif g.source != chart.table or g.target != chart.table:
            raise TableMismatch(f"gauge for chart {name!r} has wrong tables")
        elif g.order != atlas.order:
            raise TruncationMismatch(f"gauge for chart {name!r} has wrong order")
        full_gauges[name] = g
    report = CoboundaryReport()
    for (i, j) in sorted(atlas.transitions):
        if i == j:
            continue
        twisted = compose(atlas.transitions[(i, j)], full_gauges[j])
        split = compose(full_gauges[i], reference.transition(i, j))
        report.entries.append(
            PairCheck((i, j), _image_mismatches(twisted, split, p))
        )
    return report


# -- splitting the bundle into its positive and negative halves ------------


def positive_table(table: VariableTable) -> VariableTable:
    return VariableTable(
        table.base, tuple(g for g in table.graded if g[1] > 0)
    )


def negative_table(table: VariableTable) -> VariableTable:
    return VariableTable(
        table.base, tuple(g for g in table.graded if g[1] < 0)
    )


def product_table(
    positive: VariableTable, negative: VariableTable
) -> VariableTable:
    """Rejoin split halves over a shared base, positives first."""
    if positive.base != negative.base:
        raise TableMismatch("halves live over different bases")
    if any(d < 0 for _, d in positive.graded) or any(
        d > 0 for _, d in negative.graded
    ):
        raise ValueError("halves are not sign-pure")
    return VariableTable(positive.base, positive.graded + negative.graded)


def _kill_sign(table: VariableTable, order: int, keep_positive: bool):
    sub = positive_table(table) if keep_positive else negative_table(table)
    images = {}
    for name in table.base:
        images[name] = GradedSeries.generator(sub, name, order)
    for name, d in table.graded:
        if (d > 0) == keep_positive:
            images[name] = GradedSeries.generator(sub, name, order)
        else:
            images[name] = GradedSeries.zero(sub, order)
    return GradedMorphism(sub, table, order, images)


def restrict_to_positive(table: VariableTable, order: int) -> GradedMorphism:
    """The quotient onto the positive half: negative generators go to zero."""
    return _kill_sign(table, order, keep_positive=True)


def restrict_to_negative(table: VariableTable, order: int) -> GradedMorphism:
    """The quotient onto the negative half: positive generators go to zero."""
    return _kill_sign(table, order, keep_positive=False)


# -- the two-chart projective-line examples --------------------------------


@dataclass(frozen=True)
class LineBundleSpec:
    """Twist data for the two-chart examples: case "N" or "Z", winding k, l.

    The N case carries even generators of degrees 2 and 4 twisted by k and
    l; the Z case odd generators of degrees 1 and -1.
    """

    case: str
    k: int
    l: int

    def __post_init__(self):
        if self.case not in ("N", "Z"):
            raise ValueError(f"unknown case {self.case!r}")

    @property
    def degrees(self) -> tuple[int, int]:
        return (2, 4) if self.case == "N" else (1, -1)


_N_TABLES = {
    "0": VariableTable(("x",), (("xi", 2), ("psi", 4))),
    "1": VariableTable(("y",), (("xi", 2), ("psi", 4))),
}
_Z_TABLES = {
    "0": VariableTable(("x",), (("z", 1), ("w", -1))),
    "1": VariableTable(("y",), (("z", 1), ("w", -1))),
}

LaurentPoly = dict[int, Fraction]


def _laurent(table: VariableTable, poly: LaurentPoly) -> Coefficient:
    return Coefficient(
        table, {(j,): Fraction(c) for j, c in poly.items()}
    )


def transport_correction(spec: LineBundleSpec, poly: LaurentPoly) -> LaurentPoly:
    """Rewrite a chart-0 correction in the chart-1 coordinate.

    Substituting the inverted coordinate and absorbing the generator twists
    flips each exponent j and shifts it by the total winding; the N case
    also picks up a sign, which is exactly the antisymmetry of the
    correction under swapping the two charts.
    """
    k, l = spec.k, spec.l
    if spec.case == "N":
        return {-2 * k - l - j: -Fraction(c) for j, c in poly.items()}
    return {-k - l - 2 - j: Fraction(c) for j, c in poly.items()}


def _n_transition(spec, src, dst, poly, order):
    k, l = spec.k, spec.l
    images = {
        dst.base[0]: GradedSeries.from_coefficient(
            Coefficient.monomial(src, (-1,)), order
        ),
        "xi": GradedSeries.monomial(
            src, (1, 0), order, Coefficient.monomial(src, (-k,))
        ),
        "psi": GradedSeries(
            src,
            order,
            {
                (0, 1): Coefficient.monomial(src, (-l,)),
                (2, 0): _laurent(src, poly) / 2,
            },
        ),
    }
    return images


def _z_transition(spec, src, dst, poly, order):
    k, l = spec.k, spec.l
    images = {
        dst.base[0]: GradedSeries(
            src,
            order,
            {
                (0, 0): Coefficient.monomial(src, (-1,)),
                (1, 1): _laurent(src, poly),
            },
        ),
        "z": GradedSeries.monomial(
            src, (1, 0), order, Coefficient.monomial(src, (-k,))
        ),
        "w": GradedSeries.monomial(
            src, (0, 1), order, Coefficient.monomial(src, (-l,))
        ),
    }
    return images


def build_cp1_atlas(
    spec: LineBundleSpec, correction: LaurentPoly, order: int = 4
) -> Atlas:
    """The two-chart atlas twisted by an arbitrary Laurent correction.

    The forward transition carries the correction as given; the backward
    one carries its transport, which makes the pair exact two-sided
    inverses of each other.
    """
    tables = _N_TABLES if spec.case == "N" else _Z_TABLES
    t0, t1 = tables["0"], tables["1"]
    build = _n_transition if spec.case == "N" else _z_transition
    correction = {j: Fraction(c) for j, c in correction.items() if c}
    back = transport_correction(spec, correction)
    t01 = GradedMorphism(t0, t1, order, build(spec, t0, t1, correction, order))
    t10 = GradedMorphism(t1, t0, order, build(spec, t1, t0, back, order))
    charts = [
        Chart("0", t0, frozenset({"x"})),
        Chart("1", t1, frozenset({"y"})),
    ]
    return Atlas(
        charts,
        {("0", "1"): t01, ("1", "0"): t10},
        triples=(("0", "1", "0"), ("1", "0", "1")),
        order=order,
    )


def split_model(spec: LineBundleSpec, order: int = 4) -> Atlas:
    """The untwisted reference: plain winding, no correction."""
    return build_cp1_atlas(spec, {}, order)


def obstruction_dimension(spec: LineBundleSpec) -> int:
    """Count the correction directions no gauge can remove.

    Enumerates Laurent exponents j over a window and keeps those regular in
    both charts after the twist: j >= 0 on one side, m - j >= 0 on the
    other, where m is 2k-l-2 in the N case and k+l-4 in the Z case.
    """
    k, l = spec.k, spec.l
    m = 2 * k - l - 2 if spec.case == "N" else k + l - 4
    window = abs(m) + 2
    count = 0
    for j in range(-window, window + 1):
        if j >= 0 and m - j >= 0:
            count += 1
    return count


def obstruction_condition(spec: LineBundleSpec) -> tuple[str, int, int]:
    """The printable nontriviality test: (label, value, threshold)."""
    if spec.case == "N":
        return "2k-l", 2 * spec.k - spec.l, 2
    return "k+l", spec.k + spec.l, 4


def section_to_correction(spec: LineBundleSpec, sections) -> LaurentPoly:
    """Place section coefficients into the unremovable exponent slots.

    Slot s of the N case sits at exponent -l-1-s, of the Z case at -3-s;
    these are exactly the exponents reachable from neither chart's
    polynomial gauges.
    """
    if spec.case == "N":
        return {-spec.l - 1 - s: Fraction(c) for s, c in enumerate(sections)}
    return {-3 - s: Fraction(c) for s, c in enumerate(sections)}


def build_cp1_example(
    spec: LineBundleSpec, sections, order: int = 4
) -> Atlas:
    """The twisted atlas for a choice of unremovable section coefficients.

    The section list length must equal the obstruction dimension; any
    nonzero entry then yields a twist no gauge splits.
    """
    expected = obstruction_dimension(spec)
    if len(sections) != expected:
        raise DimensionMismatch(
            f"expected {expected} section coefficients, got {len(sections)}"
        )
    return build_cp1_atlas(spec, section_to_correction(spec, sections), order)


def gauge_from_section(
    spec: LineBundleSpec, chart: Chart, section: LaurentPoly, order: int = 4
) -> GradedMorphism:
    """The chart automorphism a polynomial section generates.

    In the N case it shifts the degree-4 generator by half the section
    times the square of the degree-2 one; in the Z case it shifts the base
    coordinate by the section times the product of the odd pair.
    """
    table = chart.table
    coef = _laurent(table, section)
    if spec.case == "N":
        image = GradedSeries.monomial(table, (0, 1), order) + (
            GradedSeries.monomial(table, (2, 0), order, coef) / 2
        )
        return GradedMorphism.from_partial(
            table, table, order, {"psi": image}
        )
    image = GradedSeries.generator(table, table.base[0], order) + (
        GradedSeries.monomial(table, (1, 1), order, coef)
    )
    return GradedMorphism.from_partial(
        table, table, order, {table.base[0]: image}
    )


def search_splitting(
    spec: LineBundleSpec,
    delta: LaurentPoly,
    window: int | None = None,
):
    """Solve for polynomial gauge sections absorbing the correction delta.

    The gauge equation is diagonal in the Laurent exponent, so each
    exponent of delta either maps into one chart's polynomial range or is
    genuinely stuck; a stuck exponent, or one outside the window, means no
    splitting exists within the ansatz.  Returns the pair of chart
    sections, or None.
    """
    k, l = spec.k, spec.l
    if window is None:
        window = 2 * (abs(k) + abs(l) + 2)
    g0: LaurentPoly = {}
    g1: LaurentPoly = {}
    for j, c in delta.items():
        c = Fraction(c)
        if not c:
            continue
        if abs(j) > window:
            return None
        if spec.case == "N":
            if j >= -l:
                g0[j + l] = c
            elif j <= -2 * k:
                g1[-j - 2 * k] = -c
            else:
                return None
        else:
            if j >= -2:
                g0[j + 2] = -c
            elif j <= -k - l:
                g1[-j - k - l] = -c
            else:
                return None
    if any(e > window for e in list(g0) + list(g1)):
        return None
    return g0, g1


@dataclass
class SplittingResult:
    found: bool
    gauges: dict | None
    report: CoboundaryReport | None
    message: str


def cp1_splitting_report(
    spec: LineBundleSpec,
    sections,
    order: int = 4,
    window: int | None = None,
) -> SplittingResult:
    """Search for gauges splitting the sectioned twist, then verify them.

    A successful search is confirmed against the reference atlas through
    :func:`check_coboundary` before being reported; a failed search only
    certifies absence within the exponent window, which for these two-chart
    builds is backed by the direct obstruction count.
    """
    twisted = build_cp1_example(spec, sections, order)
    reference = split_model(spec, order)
    found = search_splitting(
        spec, section_to_correction(spec, sections), window
    )
    if found is None:
        return SplittingResult(
            False, None, None, "no splitting within window"
        )
    g0, g1 = found
    gauges = {
        "0": gauge_from_section(spec, twisted.charts["0"], g0, order),
        "1": gauge_from_section(spec, twisted.charts["1"], g1, order),
    }
    report = check_coboundary(twisted, gauges, reference)
    if report.passed:
        return SplittingResult(True, gauges, report, "splitting found")
    return SplittingResult(
        False, gauges, report, "candidate gauges failed verification"
    )

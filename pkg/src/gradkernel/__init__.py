"""Exact arithmetic for Z-graded commutative algebras.

Truncated formal series with Koszul signs, graded algebra morphisms and
their pullbacks, normal forms along minimal solutions of the degree
equation, weight bigrading, and chart-by-chart consistency checks for
families of transition morphisms.  Everything is exact: coefficients are
rationals, never floats.
"""

from .bigrading import (
    BigradedElement,
    associated_graded,
    check_gr_idempotence,
    euler,
    regrade,
)
from .coefficients import Coefficient
from .diophantine import (
    DegreeEquation,
    Solution,
    decompose_solution,
    hilbert_basis,
    hilbert_data,
    minimal_inhomogeneous,
    recompose,
)
from .errors import (
    BoundTooLarge,
    CapTooSmall,
    DimensionMismatch,
    GradedAlgebraError,
    MissingTransition,
    NonComposableDomains,
    NonFormalSubstitution,
    NotASolution,
    OddExponent,
    OrderTooLarge,
    ScriptError,
    ShiftCreatesDegreeZero,
    TableMismatch,
    TruncationMismatch,
    ZeroInput,
)
from .grading import (
    GradedDimension,
    VariableTable,
    commutation_sign,
    dual,
    hom_dimension,
    shift,
)
from .morphisms import (
    GradedMorphism,
    check_degree_preserving,
    compose,
    filtration_compatibility,
    pullback,
    truncate_morphism,
)
from .normalform import (
    NormalForm,
    degree_zero_monomial_basis,
    from_normal_form,
    to_normal_form,
)
from .series import (
    GradedSeries,
    HomogeneousComponent,
    filtration_level,
    monomial_degree,
    negative_weight,
    positive_weight,
    quotient_graded_dimension,
    slice_by_negative_weight,
    truncate,
)
from .atlas import (
    Atlas,
    Chart,
    LineBundleSpec,
    SplittingResult,
    build_cp1_atlas,
    build_cp1_example,
    check_cocycle,
    check_coboundary,
    cp1_splitting_report,
    gauge_from_section,
    obstruction_condition,
    obstruction_dimension,
    product_table,
    restrict_to_negative,
    restrict_to_positive,
    search_splitting,
    section_to_correction,
    split_model,
    transport_correction,
    verify_transitions,
)
from .script import CommandOutput, RunResult, parse, print_script, run

__version__ = "0.1.0"

__all__ = [
    "Atlas",
    "BigradedElement",
    "BoundTooLarge",
    "CapTooSmall",
    "Chart",
    "Coefficient",
    "CommandOutput",
    "DegreeEquation",
    "DimensionMismatch",
    "GradedAlgebraError",
    "GradedDimension",
    "GradedMorphism",
    "GradedSeries",
    "HomogeneousComponent",
    "LineBundleSpec",
    "MissingTransition",
    "NonComposableDomains",
    "NonFormalSubstitution",
    "NormalForm",
    "NotASolution",
    "OddExponent",
    "OrderTooLarge",
    "RunResult",
    "ScriptError",
    "ShiftCreatesDegreeZero",
    "Solution",
    "SplittingResult",
    "TableMismatch",
    "TruncationMismatch",
    "VariableTable",
    "ZeroInput",
    "associated_graded",
    "build_cp1_atlas",
    "build_cp1_example",
    "check_cocycle",
    "check_coboundary",
    "check_degree_preserving",
    "check_gr_idempotence",
    "commutation_sign",
    "compose",
    "cp1_splitting_report",
    "decompose_solution",
    "degree_zero_monomial_basis",
    "dual",
    "euler",
    "filtration_compatibility",
    "filtration_level",
    "from_normal_form",
    "gauge_from_section",
    "hilbert_basis",
    "hilbert_data",
    "hom_dimension",
    "minimal_inhomogeneous",
    "monomial_degree",
    "negative_weight",
    "obstruction_condition",
    "obstruction_dimension",
    "parse",
    "positive_weight",
    "print_script",
    "product_table",
    "pullback",
    "quotient_graded_dimension",
    "recompose",
    "regrade",
    "restrict_to_negative",
    "restrict_to_positive",
    "run",
    "search_splitting",
    "section_to_correction",
    "shift",
    "slice_by_negative_weight",
    "split_model",
    "to_normal_form",
    "transport_correction",
    "truncate",
    "truncate_morphism",
    "verify_transitions",
]

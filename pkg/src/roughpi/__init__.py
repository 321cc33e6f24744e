"""Exact and high-precision verification of pi formulas over rough numbers."""

from .rough import (
    OEIS_IDS,
    Mmg,
    RoughSet,
    is_rough,
    mmg,
    primorial,
    rough_prefix,
    rough_set,
    totient,
)
from .poly import (
    InexactDivision,
    IntPolynomial,
    Integrand,
    NotRoughSupported,
    SeriesPrefix,
    SignPattern,
    expand_series,
    poly_exact_div,
    poly_pairs,
    sign_pattern,
)
from .family import (
    AmbiguousSign,
    FamilyBreak,
    FamilyStep,
    IdentityCheck,
    NumeratorStats,
    child_numerator_stats,
    derive_child,
    excision_check,
    step_to_json,
    verify_identity,
)
from .evaluator import (
    EvalReport,
    NotResidueEligible,
    PoleOnPath,
    PoleSet,
    SymmetryError,
    ToleranceError,
    evaluate_all,
    quadrature,
    reduce_for_quadrature,
    residue_eval,
    series_sum,
)
from .recognize import (
    AmbiguousMatch,
    ClosedForm,
    Radical,
    log_form,
    pi_sqrt,
    pi_trig,
    recognize,
)
from .catalog import (
    Catalog,
    Formula,
    ScanReport,
    builtin_catalog,
    scan_s7_patterns,
)
from .cli import cli_main

__version__ = "0.1.0"

__all__ = [
    "OEIS_IDS",
    "Mmg",
    "RoughSet",
    "is_rough",
    "mmg",
    "primorial",
    "rough_prefix",
    "rough_set",
    "totient",
    "InexactDivision",
    "IntPolynomial",
    "Integrand",
    "NotRoughSupported",
    "SeriesPrefix",
    "SignPattern",
    "expand_series",
    "poly_exact_div",
    "poly_pairs",
    "sign_pattern",
    "AmbiguousSign",
    "FamilyBreak",
    "FamilyStep",
    "IdentityCheck",
    "NumeratorStats",
    "child_numerator_stats",
    "derive_child",
    "excision_check",
    "step_to_json",
    "verify_identity",
    "EvalReport",
    "NotResidueEligible",
    "PoleOnPath",
    "PoleSet",
    "SymmetryError",
    "ToleranceError",
    "evaluate_all",
    "quadrature",
    "reduce_for_quadrature",
    "residue_eval",
    "series_sum",
    "AmbiguousMatch",
    "ClosedForm",
    "Radical",
    "log_form",
    "pi_sqrt",
    "pi_trig",
    "recognize",
    "Catalog",
    "Formula",
    "ScanReport",
    "builtin_catalog",
    "scan_s7_patterns",
    "cli_main",
    "__version__",
]

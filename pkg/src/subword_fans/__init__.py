"""Exact-arithmetic fans for spherical subword complexes.

Counting matrices and their Gale duals realize spherical subword complexes
of small rank as complete simplicial fans; completeness and polytopality
(regularity) verdicts are decided in exact rational arithmetic with
machine-checkable certificates.
"""

from .complexes import SubwordComplex, multiassoc, multiassoc_word, obs_a3
from .counting import (
    ParamSet,
    SignatureReport,
    a4_builtin_matrices,
    closed_form_counting,
    counting_matrix,
    counting_matrix_for_word,
    param_counting,
    restricted_matrix,
    signature_report,
)
from .fan import (
    Fan,
    FanCheckReport,
    build_fan,
    builtin_fan,
    builtin_rays,
    check_complete,
    covering_number,
    fold_to_b2,
    wall_relations,
)
from .linalg import LinearProgram, LPOutcome, QMatrix, lp_solve, strict_feasibility
from .regularity import RegularityResult, check_regular, survey, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "SubwordComplex", "multiassoc", "multiassoc_word", "obs_a3",
    "ParamSet", "SignatureReport", "a4_builtin_matrices",
    "closed_form_counting", "counting_matrix", "counting_matrix_for_word",
    "param_counting", "restricted_matrix", "signature_report",
    "Fan", "FanCheckReport", "build_fan", "builtin_fan", "builtin_rays",
    "check_complete", "covering_number", "fold_to_b2", "wall_relations",
    "LinearProgram", "LPOutcome", "QMatrix", "lp_solve", "strict_feasibility",
    "RegularityResult", "check_regular", "survey", "verify_certificate",
    "__version__",
]

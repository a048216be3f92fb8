"""Exact piecewise-linear homeomorphisms of the line with bounded slopes,
their quasi-isometry classes, and checkable certificates that a nontrivial
class is not central."""

from .certificate import (
    KernelReport,
    NonCentralityCertificate,
    Verdict,
    Witness,
    certify_noncentral,
    verify_certificate,
)
from .pl_core import (
    IDENTITY,
    REFLECTION,
    FinitePLMap,
    SlopeSummary,
    canonicalize,
    compose,
    evaluate,
    invert,
    make_affine,
    make_identity,
    make_reflection,
    make_translation,
    slope_summary,
)
from .qi import (
    DifferenceVerdict,
    QIParameters,
    end_action,
    in_kernel,
    normalize_at_zero,
    qi_equivalent,
    qi_parameters,
    sup_difference,
)
from .structure import (
    MembershipFlags,
    PlusMinusSplit,
    classify_membership,
    plus_minus_split,
    rho_conjugate,
    split_orientation,
)
from .witness import (
    DivergentSequence,
    LazyPLMap,
    build_witness_g,
    build_witness_h,
    displacement_series,
    extract_divergent_sequence,
    lazy_evaluate,
)

__version__ = "0.1.0"

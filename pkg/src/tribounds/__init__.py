"""Exact eigenvalue intervals of symmetric tridiagonal interval matrices."""

from .bounds import (
    Decision,
    EigBoundsReport,
    ExtremalBounds,
    PropertyReport,
    Status,
    cardinality_of_upper_selection,
    denormalize_bounds,
    extremal_bounds,
    lower_bounds_sign_invariant,
    property_checks,
    upper_bounds_sign_invariant,
)
from .interval_core import Interval, NormalizationRecord, SymTri, SymTriInterval, normalize, split_blocks
from .invariance import (
    IndexSet,
    InvarianceStatus,
    InvarianceVerdict,
    Membership,
    OuterEstimate,
    admissible_index_sets,
    check_sign_invariance,
    disjoint_refinement,
    membership_test,
    outer_estimate,
)
from .pipeline import eigenvalue_bounds
from .sturm import (
    SignPattern,
    SturmEvaluation,
    all_eigenvalues,
    eigenvector,
    eigenvector_signs,
    kth_eigenvalue,
    sturm_count,
)

__version__ = "0.1.0"

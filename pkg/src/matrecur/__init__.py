"""Convergence and divergence of matrix recurrences built from products and Kronecker products."""

from .errors import RecurrenceError
from .matrix import NormKind, kron, matmul, norm
from .multiplicity import (
    MultiplicityProfile,
    Word,
    b_multiplicity,
    b_multiplicity_leading,
    expand_word,
    multiplicity,
    multiplicity_profile,
)
from .simulate import Trajectory, iterate, surrogate, verify
from .snacci import (
    IndexSet,
    SNacciProfile,
    asymptotic_estimate,
    companion_matrix,
    companion_power_entry,
    make_index_set,
    reduce_set,
    snacci_coefficient,
    snacci_constant,
    snacci_profile,
    snacci_terms,
)
from .stability import (
    Kind,
    RecurrenceSpec,
    ScalarVerdict,
    StabilityReport,
    Verdict,
    analyze,
    classify_scalar,
    kron_divergence_ratio,
    overall_verdict,
    stability_margin,
)

__version__ = "0.1.0"

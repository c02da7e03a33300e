"""Summing constants, inclusion certification and domination measures on
finite instances.

The package computes best abstract summing constants exactly (linear
programming in the scale-invariant case, budgeted family enumeration
otherwise), certifies inclusion transforms between exponent regimes, and
synthesizes probability measures witnessing pointwise domination bounds via
convex feasibility over products of simplices, with matching family-based
lower bounds.
"""

from .core import (
    AlphaParams,
    Exponents,
    HarmonicExponents,
    check_admissible,
    compute_alpha,
    conjugate_exponent,
    harmonic_combine,
    lemma_yy_gap,
)
from .inclusion import (
    InclusionReport,
    MultiplicativeInstance,
    predict_inclusion,
    verify_inclusion,
    verify_multilinear_inclusion,
)
from .instance import (
    SummingInstance,
    WeightVector,
    clear_denominators,
    enumerate_families,
    family_ratio,
    lhs_value,
    rhs_value,
)
from .pdt import (
    InfeasibilityWitness,
    MeasureVector,
    PdtInstance,
    ScaledFamily,
    SlackReport,
    am_to_product_check,
    best_constant_duality,
    duality_gap,
    roundtrip_check,
    saturated_family_lb,
    summing_lb_pdt,
    synthesize_measures,
    verify_domination,
)
from .solver import (
    LpProblem,
    MinimaxProblem,
    bisect,
    mwu_minimax,
    solve_lp,
    zero_sum_value_lp,
)
from .summing import Certificate, summing_constant_bruteforce, summing_constant_exact

__version__ = "0.1.0"

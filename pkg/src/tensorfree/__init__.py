"""Exact-arithmetic workbench for star-freeness in finite tensor products
of noncommutative probability spaces.

The package computes joint moments of free families over Q(i), tests
bounded star-freeness, checks the two tensor freeness conditions and
the dominating-factor searches built on them, runs the matching
group-level procedures for presented groups, and verifies the
polynomial identities behind the equality-case arguments.
"""

from .counterexample import (
    BiasedPowerReport,
    FilterCounts,
    PowerScanLine,
    analyze_biased_power,
    biased_power_scenario,
    filter_counts,
    minimal_block_pairs,
    scan_alternating_powers,
    singleton_capacity,
)
from .errors import (
    DepthLimitError,
    DimensionLimitError,
    EnumerationLimitError,
    FactorNotEvaluable,
    FactorNotFreeError,
    FaithfulnessWarning,
    InsufficientMomentDataError,
    LimitError,
    NotDirectlyEvaluable,
    PreconditionError,
    ScenarioError,
    TensorFreeError,
)
from .freeness import (
    FreeFamilySpec,
    Verdict,
    alternating_power_words,
    centered_product_value,
    free_mixed_moment,
    mixed_moment_by_cumulants,
    test_freeness,
    test_freeness_haar_powers,
)
from .groups import (
    CommutatorWitnessReport,
    FreeProductPresentation,
    GroupDominatingReport,
    GroupElement,
    GroupFreenessVerdict,
    GroupPresentation,
    KernelReport,
    commutator_witness,
    element_order,
    group_dominating_report,
    is_free_collection,
    kernel_elements,
    parse_group_word,
    projection_kernel_trivial,
)
from .identities import (
    IDENTITY_CHECKS,
    interpolated_product_conclusions,
    interpolated_product_identity,
    or_product_equality_conclusions,
    or_product_inequality,
    product_sum_equality_conclusions,
    product_sum_inequality,
    shifted_product_identity,
)
from .ncpartitions import (
    MomentSequence,
    NCPartition,
    catalan,
    cumulant_from_moments,
    enumerate_nc,
    exponent_singleton_partitions,
    iter_pure_parity_blocks,
    moment_from_cumulants,
    odd_singleton_partitions,
    pure_parity_partitions,
)
from .scalars import ExactComplex, ONE, ZERO, as_scalar
from .scenario import (
    GroupCollection,
    ScenarioFile,
    canonical_trace_view,
    load_scenario,
    save_scenario,
    scenario_dumps,
    scenario_from_json,
    scenario_to_json,
)
from .spaces import (
    AxiomReport,
    GroupAlgebraModel,
    MomentFunctional,
    SpectralModel,
    TableFunctional,
    check_axioms,
    is_deterministic,
    variance,
)
from .starwords import Letter, StarWord, parse_word, power_word_to_star_word
from .tensor import (
    TensorScenario,
    factor_moment,
    factor_word,
    joint_oracle,
    normalized_scenario,
    tensor_moment,
)
from .tfc import (
    DominatingSearch,
    NecessaryConditionsReport,
    TfcReport,
    TfcViolation,
    check_necessary_conditions,
    check_tfc,
    factor_freeness_verdict,
    find_dominating,
)

__version__ = "0.1.0"

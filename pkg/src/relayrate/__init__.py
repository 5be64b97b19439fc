"""Entropic analysis of discrete multi-terminal sources.

Computes subset entropies and I-measure atoms, the data-exchange rate region
and its closed-form candidate point, the balanced-source and P* membership
tests, bounds on the optimal source-channel rate over a finite-field
multiway relay channel, and the optimal centralised storage rate.
"""

__version__ = "0.1.0"

from .imeasure import (
    AtomTable,
    BalanceReport,
    atom_table,
    balanced_check,
    composition_check,
    conditional_multi_info,
    gap,
    lemma5_check,
    lemma6_check,
    multi_info,
)
from .lp import LinearProgram, LPSolution, Status, enumerate_vertices, solve
from .region import (
    RegionConstraints,
    contains,
    in_pstar,
    minimize_sum,
    minimize_weighted_max,
    r_dagger,
    r_star,
    region_constraints,
)
from .relay import (
    ChannelSpec,
    KappaResult,
    capacity_region_contains,
    capacity_terms,
    common_message_threshold,
    kappa_bounds,
    psi,
    upsilon,
)
from .source import (
    ComponentSource,
    EntropyProfile,
    ProfileSource,
    SourceModel,
    TabularPMF,
    TabularSource,
    conditional_entropy,
    entropy,
    gen_component,
    gen_sensor,
    h_vector,
    profile_validate,
    validate_tabular,
)
from .storage import StorageReport, optimal_storage_rate, storage_closed_form

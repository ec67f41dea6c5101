"""Spectral and combinatorial invariants of directed multigraphs.

The package computes, for finite directed multigraphs and a few parametrized
infinite families: exact fixed-target path counts and their rational
generating functions, critical inverse temperatures, equilibrium-state
classification data (type I partition values, type III_lambda data at
criticality, harmonic vectors, ground-state fingerprints), cover-tree growth
rates, and reconstruction from source-resolved count tables.
"""

__version__ = "0.1.0"

from .compare import (
    Fingerprint,
    MatchResult,
    SpectralData,
    bratteli_levels,
    fingerprint,
    isomorphic,
    match_vertices,
    reconstruct,
    spectral_data,
)
from .covertree import CoverLevels, PruneComparison, cover_levels, periodic_tree_levels, prune_and_compare
from .errors import (
    AtCriticalityError,
    ConvergenceError,
    GraphParseError,
    KmsGraphError,
    NearTieError,
    NearTieWarning,
    PathLimitError,
    SpectralDataError,
    UnknownVertexError,
)
from .families import (
    AffineRule,
    FamilySpec,
    LadderValue,
    SkipHarmonic,
    StaircaseSummability,
    WildFamily,
    ladder_partition,
    ladder_truncation,
    ladder_truncation_check,
    skip_harmonic,
    skip_truncation,
    staircase_bruteforce_identity,
    staircase_summability,
    staircase_truncation,
    truncate,
    wild_graph,
)
from .graph import (
    DirectedMultigraph,
    PathCountTable,
    enumerate_paths,
    graph_from_json,
    graph_to_json,
    hereditary_closure,
    parse_graph,
    path_counts,
    reaches,
    restrict,
)
from .kms import (
    GroundState,
    HarmonicVector,
    KmsClassification,
    TypeIIIState,
    beta_regular_vertices,
    classify_kms,
    cylinder_mass_estimate,
    ground_states,
    harmonic_vector_for_component,
    minimal_components,
    negative_beta_summable_vertices,
)
from .series import (
    RationalFunction,
    SeriesValue,
    closed_forms,
    generating_function,
    partition_closed_form,
    partition_value,
    uniform_sup,
)
from .spectral import (
    ComponentData,
    CriticalTemperature,
    SccReport,
    critical_temperature,
    graph_log_radius,
    period,
    scc_decomposition,
    spectral_radius,
    vertex_betas,
)

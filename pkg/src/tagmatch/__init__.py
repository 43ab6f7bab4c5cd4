"""Bitstring tags, distance metrics, and the analyses built on them."""

from .bitstring import (
    RngStream,
    Tag,
    derive_seed,
    derive_stream,
    flip_bit,
    mutate_per_bit,
    new_random_tag,
    pack_tag,
    tag_from_hex,
    tag_to_hex,
)
from .engine import MatchEngine, RawMatchEngine, build_engine
from .evolve import (
    EvolutionConfig,
    Genome,
    GraphStructure,
    SweepResult,
    TargetGraph,
    Trajectory,
    evaluate_fitness,
    evolve,
    generate_target_graph,
    load_graph,
    mutation_rate_sweep,
    run_evolutions,
    save_graph,
)
from .geometry import GeometrySample, sample_detour, sample_dissimilarity, sample_similarity
from .metrics import METRIC_NAMES, MetricKind, raw_distance
from .normalizer import (
    NormalizationTable,
    TableFormatError,
    UnsupportedVersionError,
    build_table,
    load_table,
    normalize,
    normalize_batch,
    save_table,
)
from .sampling import SamplingBudgetError
from .stats import Summary, bootstrap_ci, ks_uniform_statistic, summarize
from .variation import (
    Regime,
    StartMode,
    StepSample,
    WalkTrace,
    mutational_walk,
    run_walk_ensemble,
    sample_single_step,
)

__version__ = "0.1.0"

__all__ = [
    "METRIC_NAMES",
    "EvolutionConfig",
    "Genome",
    "GeometrySample",
    "GraphStructure",
    "MatchEngine",
    "MetricKind",
    "NormalizationTable",
    "RawMatchEngine",
    "Regime",
    "RngStream",
    "SamplingBudgetError",
    "StartMode",
    "StepSample",
    "Summary",
    "SweepResult",
    "Tag",
    "TableFormatError",
    "TargetGraph",
    "Trajectory",
    "UnsupportedVersionError",
    "WalkTrace",
    "bootstrap_ci",
    "build_engine",
    "build_table",
    "derive_seed",
    "derive_stream",
    "evaluate_fitness",
    "evolve",
    "flip_bit",
    "generate_target_graph",
    "ks_uniform_statistic",
    "load_graph",
    "load_table",
    "mutate_per_bit",
    "mutational_walk",
    "mutation_rate_sweep",
    "new_random_tag",
    "normalize",
    "normalize_batch",
    "pack_tag",
    "raw_distance",
    "run_evolutions",
    "run_walk_ensemble",
    "sample_detour",
    "sample_dissimilarity",
    "sample_similarity",
    "sample_single_step",
    "save_graph",
    "save_table",
    "summarize",
    "tag_from_hex",
    "tag_to_hex",
]

"""Safe (maxmin) strategies for two-player competitive diffusion on trees."""

from .css import (
    BranchClass,
    BranchInfo,
    CentroidReplyReport,
    CSSError,
    CSSResult,
    UsedBranch,
    analyze_branches,
    branch_criterion,
    branch_probabilities,
    check_iteration_bounds,
    css_run,
    verify_centroid_reply,
)
from .diffusion import (
    Color,
    Coloring,
    GameMatrix,
    MixedStrategy,
    format_fraction,
    gain,
    gain_column,
    gain_row,
    game_matrix,
    guaranteed_gain,
    maximal_gain,
    pure_gain,
    reply_gains,
    simulate_diffusion,
    start_gains,
    strategy_from_pairs,
    strategy_to_pairs,
)
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    Histogram,
    TrialFailure,
    TrialRecord,
    parse_config_file,
    random_tree,
    run_experiment,
    sample_centroidal,
    trial_seed,
    upper_bound,
    write_histogram_csv,
    write_records_csv,
)
from .families import (
    CompleteTreeSpec,
    SpiderSpec,
    build_complete_tree,
    build_spider,
    complete_tree_opposing_strategy,
    complete_tree_safe_strategy,
    complete_tree_value,
    spider_body_reply_gain,
    spider_optimal_depth,
    spider_safe_strategy,
)
from .solver import (
    SolverError,
    ZeroSumSolution,
    solve_column_restricted,
    solve_matrix_game,
    solve_value,
    verify_solution,
)
from .tree import (
    Branch,
    CentroidInfo,
    Tree,
    TreeFormatError,
    WeightTable,
    branches_at,
    centroid,
    distances_from,
    parse_tree,
    weight_table,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "BranchClass",
    "BranchInfo",
    "CentroidInfo",
    "CentroidReplyReport",
    "Color",
    "Coloring",
    "CompleteTreeSpec",
    "CSSError",
    "CSSResult",
    "ExperimentConfig",
    "ExperimentResult",
    "GameMatrix",
    "Histogram",
    "MixedStrategy",
    "SolverError",
    "SpiderSpec",
    "TreeFormatError",
    "Tree",
    "TrialFailure",
    "TrialRecord",
    "UsedBranch",
    "WeightTable",
    "ZeroSumSolution",
    "analyze_branches",
    "branch_criterion",
    "branch_probabilities",
    "branches_at",
    "build_complete_tree",
    "build_spider",
    "centroid",
    "check_iteration_bounds",
    "complete_tree_opposing_strategy",
    "complete_tree_safe_strategy",
    "complete_tree_value",
    "css_run",
    "distances_from",
    "format_fraction",
    "gain",
    "gain_column",
    "gain_row",
    "game_matrix",
    "guaranteed_gain",
    "maximal_gain",
    "parse_config_file",
    "parse_tree",
    "pure_gain",
    "random_tree",
    "reply_gains",
    "run_experiment",
    "sample_centroidal",
    "simulate_diffusion",
    "solve_column_restricted",
    "solve_matrix_game",
    "solve_value",
    "spider_body_reply_gain",
    "spider_optimal_depth",
    "spider_safe_strategy",
    "start_gains",
    "strategy_from_pairs",
    "strategy_to_pairs",
    "trial_seed",
    "upper_bound",
    "verify_centroid_reply",
    "verify_solution",
    "weight_table",
    "write_histogram_csv",
    "write_records_csv",
]

"""Monte-Carlo experiment harness: configs, runners, aggregation, emission."""

from .config import (
    SCHEMA_VERSION,
    ExperimentConfig,
    alphabet_from_config,
    config_hash,
    default_config,
    load_config,
)
from .results import SolverMetrics, SweepResult, SweepRow, TrialRecord, emit_results
from .runners import (
    run_complexity_table,
    run_convergence,
    run_csi_error,
    run_experiment,
    run_oracle_gap,
    run_sweep,
)

"""
Monte Carlo harness.

`simulate` runs a sweep and returns it with its CSV rows, the way the
other phases hand back a result object from one call.
"""

from .schemes import DEFAULT_SCHEMES, SCHEMES, Scheme, parse_scheme, parse_schemes
from .sweep import (
    DEFAULT_MASTER_SEED,
    DEFAULT_SIDE_LENGTHS,
    DESK_N_TRIALS,
    FULL_N_TRIALS,
    SchemeSummary,
    SimConfig,
    SweepResult,
    TrialRecord,
    run_sweep,
    run_trial,
    trial_seed,
    trial_topology,
)
from .report import CSV_COLUMNS, TRIAL_COLUMNS, summarize, trial_rows, write_csv


def simulate(cfg: SimConfig, keep_trials: bool = False) -> tuple[SweepResult, list[dict]]:
    """Adapter: run the sweep and flatten it to CSV rows."""
    result = run_sweep(cfg, keep_trials)
    return result, summarize(result)

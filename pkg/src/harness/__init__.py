"""
Experiment harness: configuration loading, sweep execution, result files and CLI
"""

from .config_loader import build_config, load_config
from .results_io import (
    CSV_COLUMNS,
    append_partial,
    emit_csv,
    kernel_surface_command,
    parse_csv,
    write_manifest,
)
from .experiment_runner import (
    PointTask,
    calibrate_discard_for,
    evaluate_point,
    peak_summary,
    plan_points,
    reach_at_snr,
    run_experiment,
    zeta_gain,
)

__all__ = [
    "build_config",
    "load_config",
    "CSV_COLUMNS",
    "append_partial",
    "emit_csv",
    "kernel_surface_command",
    "parse_csv",
    "write_manifest",
    "PointTask",
    "calibrate_discard_for",
    "evaluate_point",
    "peak_summary",
    "plan_points",
    "reach_at_snr",
    "run_experiment",
    "zeta_gain",
]

"""
Command-line interface

Verbs:
    run <config>                 run a sweep and write CSV + manifest
    kernels                      export kernel surfaces as CSV
    calibrate-discard <config>   calibrate the window discard of a scheme

Exit codes: 0 success, 2 configuration error, 1 any other failure.
"""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from config.logging_config import setup_logging
from config.settings import get_settings

from ..models.equalizer_models import Scheme
from ..models.experiment_models import SweepAxis
from ..models.kernel_models import FrequencyGrid, KernelMode, KernelParams
from ..models.link import FiberSpan
from ..utils.figures import kernel_surface_figure, sweep_figure, write_figure
from ..utils.validators import ConfigurationError, require_positive
from .config_loader import load_config
from .experiment_runner import calibrate_discard_for, peak_summary, run_experiment
from .results_io import kernel_surface_command

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vao-workbench",
        description="Volterra-assisted OPC simulation and DSP workbench",
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument("--log-level", default=None, help="Override VAO_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run an experiment sweep")
    run.add_argument("config", type=Path, help="Experiment file (.toml or .json)")
    run.add_argument("--output", type=Path, default=None, help="Result CSV (default: <results_dir>/<name>.csv)")
    run.add_argument("--workers", type=int, default=None, help="Worker processes")
    run.add_argument("--seed", type=int, default=None, help="Single master seed replacing the configured list")
    ase = run.add_mutually_exclusive_group()
    ase.add_argument("--ase", dest="ase", action="store_true", default=None, help="Force ASE on")
    ase.add_argument("--no-ase", dest="ase", action="store_false", help="Force ASE off")
    run.add_argument("--resume", action="store_true", help="Skip points in the partial results file")
    run.add_argument("--plot", action="store_true", help="Write HTML figures next to the CSV")

    kernels = sub.add_parser("kernels", help="Export kernel surfaces")
    kernels.add_argument("--mode", action="append", choices=[m.value for m in KernelMode], default=None)
    kernels.add_argument("--spans", type=int, default=10)
    kernels.add_argument("--span-length-km", type=float, default=100.0)
    kernels.add_argument("--alpha-db-km", type=float, default=0.2)
    kernels.add_argument("--dispersion", type=float, default=17.0, help="ps/(nm·km)")
    kernels.add_argument("--points", type=int, default=512, help="Grid bins per axis")
    kernels.add_argument("--spacing-ghz", type=float, default=0.5, help="Grid bin spacing")
    kernels.add_argument("--output-dir", type=Path, default=None)
    kernels.add_argument("--plot", action="store_true")

    calibrate = sub.add_parser("calibrate-discard", help="Calibrate the discard of a windowed scheme")
    calibrate.add_argument("config", type=Path)
    calibrate.add_argument("--scheme", choices=[s.value for s in Scheme], default=Scheme.VSFE_SINGLE.value)
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    if args.workers is not None:
        require_positive(workers=args.workers)
    overrides = {}
    if args.seed is not None:
        overrides["seeds"] = [args.seed]
    if args.ase is not None:
        overrides["link.ase_enabled"] = args.ase
    config = load_config(args.config, overrides)

    output = args.output or Path(get_settings().results_dir) / f"{config.name}.csv"
    result = run_experiment(config, output=output, max_workers=args.workers, resume=args.resume)

    failed = [row for row in result.rows if row.error_message]
    print(f"{len(result.rows)} points written to {output} ({len(failed)} failed)")
    if config.sweep.axis == SweepAxis.POWER and result.rows:
        print(peak_summary(result).to_string(index=False))

    if args.plot or get_settings().write_figures:
        axis = "distance_km" if config.sweep.axis == SweepAxis.DISTANCE else "power_dbm"
        write_figure(sweep_figure(result, "snr_db", axis), output.with_name(f"{output.stem}_snr.html"))
        if config.needs_zeta:
            write_figure(sweep_figure(result, "zeta_db", axis), output.with_name(f"{output.stem}_zeta.html"))
    return EXIT_OK


def _cmd_kernels(args: argparse.Namespace) -> int:
    require_positive(
        spans=args.spans,
        span_length_km=args.span_length_km,
        points=args.points,
        spacing_ghz=args.spacing_ghz,
    )
    span = FiberSpan.from_datasheet_units(
        length_km=args.span_length_km,
        alpha_db_per_km=args.alpha_db_km,
        dispersion_ps_nm_km=args.dispersion,
    )
    params = KernelParams.from_span(span, args.spans)
    grid = FrequencyGrid(n_points=args.points, delta_omega=2.0 * math.pi * args.spacing_ghz * 1e9)
    modes = [KernelMode(m) for m in (args.mode or [KernelMode.VSFE_FORWARD.value, KernelMode.VAO_FORWARD.value])]
    out_dir = args.output_dir or Path(get_settings().results_dir)

    for mode in modes:
        path = out_dir / f"kernel_{mode.value}.csv"
        surface = kernel_surface_command(params, grid, mode, path)
        print(f"{mode.value}: peak {surface.peak:.4f} -> {path}")
        if args.plot:
            write_figure(kernel_surface_figure(surface), path.with_suffix(".html"))
    return EXIT_OK


def _cmd_calibrate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    discard, history = calibrate_discard_for(config, Scheme(args.scheme))
    for value, metric in sorted(history.items()):
        print(f"discard {value:5d}: {metric:.4f} dB")
    print(f"calibrated discard: {discard} symbols per side")
    return EXIT_OK


COMMANDS = {
    "run": _cmd_run,
    "kernels": _cmd_kernels,
    "calibrate-discard": _cmd_calibrate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and dispatch a verb

    Args:
        argv: Arguments without the program name (defaults to sys.argv)

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    settings = get_settings()
    setup_logging(args.log_level or settings.log_level, settings.log_file, settings.enable_colors)

    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, ValidationError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except Exception as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

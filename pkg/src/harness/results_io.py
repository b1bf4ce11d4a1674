"""
Results I/O Module

CSV persistence of sweep results, the run manifest and the kernel-surface
export. Files are written with pandas so row order and number formatting
are reproducible byte for byte.
"""

import hashlib
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from config.settings import get_settings

from .. import __version__
from ..kernels.kernel_tensor import KernelSurface, render_kernel_surface
from ..models.experiment_models import ExperimentConfig, PointStatus, SweepResult, SweepRow
from ..models.kernel_models import FrequencyGrid, KernelMode, KernelParams
from ..utils.validators import ResultsIOError

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "scheme",
    "power_dbm",
    "distance_km",
    "window_symbols",
    "discard",
    "snr_db",
    "zeta_db",
    "num_symbols",
    "wall_time_s",
    "seeds",
]
# Sidecar-only columns: the partial file must restore rows exactly on resume
SIDECAR_COLUMNS = CSV_COLUMNS + ["status", "error_message", "confidence_halfwidth"]
FLOAT_FORMAT = "%.4f"
SEED_SEPARATOR = ";"

PathLike = Union[str, Path]


def partial_path(path: PathLike) -> Path:
    """Sidecar file collecting completed rows of an unfinished sweep."""
    path = Path(path)
    return path.with_name(f"{path.stem}.partial{path.suffix or '.csv'}")


def manifest_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.manifest.json")


def _rows_frame(rows: List[SweepRow], deterministic: bool, sidecar: bool = False) -> pd.DataFrame:
    records = [
        {
            "scheme": row.scheme.value,
            "power_dbm": row.power_dbm,
            "distance_km": row.distance_km,
            "window_symbols": row.window_symbols,
            "discard": row.discard,
            "snr_db": row.snr_db,
            "zeta_db": row.zeta_db,
            "num_symbols": row.num_symbols,
            "wall_time_s": 0.0 if deterministic else row.wall_time_s,
            "seeds": SEED_SEPARATOR.join(str(seed) for seed in row.seeds),
        }
        for row in rows
    ]
    if sidecar:
        for record, row in zip(records, rows):
            record["status"] = row.status.value
            record["error_message"] = row.error_message
            record["confidence_halfwidth"] = row.confidence_halfwidth
    return pd.DataFrame.from_records(records, columns=SIDECAR_COLUMNS if sidecar else CSV_COLUMNS)


def emit_csv(
    result: SweepResult,
    path: PathLike,
    deterministic: Optional[bool] = None
) -> Path:
    """
    Write a sweep result as CSV in canonical row order

    Args:
        result: Sweep result
        path: Output file
        deterministic: Zero the wall-time column (defaults to settings)

    Returns:
        Path written

    Raises:
        ResultsIOError: if the file cannot be written
    """
    deterministic = get_settings().deterministic_output if deterministic is None else deterministic
    path = Path(path)
    frame = _rows_frame(result.sorted().rows, deterministic)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8", lineterminator="\n")
    except OSError as e:
        raise ResultsIOError(f"Could not write results ({e})", path) from e
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def append_partial(row: SweepRow, path: PathLike, deterministic: Optional[bool] = None) -> None:
    """
    Append one completed row to the partial-results sidecar

    Args:
        row: Completed sweep row
        path: Final CSV path; the sidecar sits next to it
        deterministic: Zero the wall-time column (defaults to settings)
    """
    deterministic = get_settings().deterministic_output if deterministic is None else deterministic
    target = partial_path(path)
    frame = _rows_frame([row], deterministic, sidecar=True)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(
            target,
            mode="a",
            header=not target.exists(),
            index=False,
            float_format=FLOAT_FORMAT,
            encoding="utf-8",
            lineterminator="\n",
        )
    except OSError as e:
        raise ResultsIOError(f"Could not append partial result ({e})", target) from e


def _optional(value: Any, cast):
    return None if pd.isna(value) else cast(value)


def parse_csv(path: PathLike, name: str = "experiment") -> SweepResult:
    """
    Read a CSV written by emit_csv or append_partial

    Sidecar columns (status, error message, half-width) are restored when
    present; otherwise rows without an SNR are marked as failed points.

    Args:
        path: CSV file
        name: Experiment name for the result

    Returns:
        SweepResult

    Raises:
        ResultsIOError: if the file is missing or malformed
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype={"seeds": str}, keep_default_na=True)
    except (OSError, pd.errors.ParserError) as e:
        raise ResultsIOError(f"Could not read results ({e})", path) from e
    missing = [column for column in CSV_COLUMNS if column not in frame.columns]
    if missing:
        raise ResultsIOError(f"Missing columns {missing}", path)

    rows = []
    for record in frame.to_dict(orient="records"):
        seeds = record["seeds"]
        snr = _optional(record["snr_db"], float)
        status = _optional(record.get("status"), PointStatus)
        if status is None:
            status = PointStatus.SUCCESS if snr is not None else PointStatus.ERROR
        rows.append(SweepRow(
            scheme=record["scheme"],
            power_dbm=float(record["power_dbm"]),
            distance_km=float(record["distance_km"]),
            window_symbols=int(record["window_symbols"]),
            discard=int(record["discard"]),
            snr_db=snr,
            zeta_db=_optional(record["zeta_db"], float),
            num_symbols=int(record["num_symbols"]),
            wall_time_s=float(record["wall_time_s"]),
            seeds=[] if pd.isna(seeds) else [int(s) for s in str(seeds).split(SEED_SEPARATOR)],
            status=status,
            error_message=_optional(record.get("error_message"), str),
            confidence_halfwidth=_optional(record.get("confidence_halfwidth"), float),
        ))
    return SweepResult(name=name, rows=rows)


def config_digest(config: ExperimentConfig) -> str:
    """sha256 of the canonical JSON form of a configuration."""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_manifest(
    config: ExperimentConfig,
    result: SweepResult,
    path: PathLike,
    timings: Optional[Dict[str, float]] = None
) -> Path:
    """
    Write the sidecar run manifest for a result CSV

    Args:
        config: Experiment configuration
        result: Sweep result (point statuses and timings are recorded)
        path: Result CSV path; the manifest sits next to it
        timings: Extra named durations in seconds

    Returns:
        Manifest path
    """
    target = manifest_path(path)
    manifest = {
        "experiment": config.name,
        "config_sha256": config_digest(config),
        "seeds": list(config.seeds),
        "code_version": __version__,
        "created": datetime.now().isoformat(timespec="seconds"),
        "timings": dict(timings or {}),
        "points": [
            {
                "scheme": row.scheme.value,
                "power_dbm": row.power_dbm,
                "distance_km": row.distance_km,
                "window_symbols": row.window_symbols,
                "status": row.status.value,
                "error_message": row.error_message,
                "confidence_halfwidth_db": row.confidence_halfwidth,
                "wall_time_s": row.wall_time_s,
            }
            for row in result.sorted().rows
        ],
    }
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    except OSError as e:
        raise ResultsIOError(f"Could not write manifest ({e})", target) from e
    logger.info(f"Wrote manifest {target}")
    return target


def kernel_surface_command(
    params: KernelParams,
    grid: FrequencyGrid,
    mode: KernelMode,
    path: PathLike
) -> KernelSurface:
    """
    Render a kernel surface and store it as CSV

    Args:
        params: Link parameters (num_spans ≥ 1)
        grid: Grid whose bins give both frequency axes
        mode: Kernel mode
        path: Output CSV

    Returns:
        The rendered KernelSurface
    """
    surface = render_kernel_surface(params, grid, mode)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        surface.to_frame().to_csv(path, float_format="%.6e", encoding="utf-8", lineterminator="\n")
    except OSError as e:
        raise ResultsIOError(f"Could not write kernel surface ({e})", path) from e
    logger.info(f"Wrote {mode.value} surface (peak {surface.peak:.3f}) to {path}")
    return surface

"""
Plotly renderings of kernel surfaces and sweep results
"""

import logging
import math
from pathlib import Path
from typing import Union

import plotly.graph_objects as go

from ..kernels.kernel_tensor import KernelSurface
from ..models.experiment_models import SweepResult
from .validators import ResultsIOError

logger = logging.getLogger(__name__)

GHZ_PER_RAD = 1.0 / (2.0 * math.pi * 1e9)


def kernel_surface_figure(surface: KernelSurface) -> go.Figure:
    """Normalized kernel magnitude over (f₁, f₂) in GHz."""
    fig = go.Figure(go.Surface(
        x=surface.omega_2 * GHZ_PER_RAD,
        y=surface.omega_1 * GHZ_PER_RAD,
        z=surface.magnitude,
        colorscale="Viridis",
    ))
    fig.update_layout(
        title=f"|K| ({surface.mode.value}), peak {surface.peak:.3f}",
        scene=dict(xaxis_title="f2 (GHz)", yaxis_title="f1 (GHz)", zaxis_title="normalized |K|"),
    )
    return fig


def sweep_figure(result: SweepResult, metric: str = "snr_db", axis: str = "power_dbm") -> go.Figure:
    """
    One line per scheme of a sweep metric

    Args:
        result: Sweep result
        metric: "snr_db" or "zeta_db"
        axis: "power_dbm" or "distance_km"

    Returns:
        Plotly figure
    """
    fig = go.Figure()
    for scheme in sorted({row.scheme for row in result.rows}, key=lambda s: s.value):
        rows = sorted(
            (row for row in result.for_scheme(scheme) if getattr(row, metric) is not None),
            key=lambda row: getattr(row, axis),
        )
        fig.add_trace(go.Scatter(
            x=[getattr(row, axis) for row in rows],
            y=[getattr(row, metric) for row in rows],
            mode="lines+markers",
            name=scheme.value,
        ))
    labels = {
        "power_dbm": "Launch power per channel (dBm)",
        "distance_km": "Distance (km)",
        "snr_db": "SNR (dB)",
        "zeta_db": "ζ (dB)",
    }
    fig.update_layout(xaxis_title=labels.get(axis, axis), yaxis_title=labels.get(metric, metric))
    return fig


def write_figure(fig: go.Figure, path: Union[str, Path]) -> Path:
    """
    Save a figure as standalone HTML

    Raises:
        ResultsIOError: if the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.write_html(str(path), include_plotlyjs="cdn")
    except OSError as e:
        raise ResultsIOError(f"Could not write figure ({e})", path) from e
    logger.info(f"Wrote figure {path}")
    return path

"""
Power Profile Module

Half-link kernel sums Λ and Ψ over piecewise-exponential power profiles,
one-sided profile evaluation and the OPC-cancellation symmetry predicates.
"""

import logging
from pathlib import Path
from typing import Dict, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..models.kernel_models import PowerProfile
from ..utils.helpers import ArrayOrFloat
from ..utils.validators import ConfigurationError, ResultsIOError

logger = logging.getLogger(__name__)

# relative tolerance for the mirror conditions
SYMMETRY_RTOL = 1e-9
# |rate·length| below which the exponential integral switches to its series
SERIES_THRESHOLD = 1e-8
ASYMMETRY_SAMPLES_PER_SPAN = 256


def exponential_integral(rate: ArrayOrFloat, length: float) -> np.ndarray:
    """
    ∫₀^length e^{rate·z} dz for complex rates, stable at rate → 0

    Args:
        rate: Complex exponent per metre
        length: Integration length

    Returns:
        Complex array (0-d for scalar input)
    """
    x = np.asarray(rate, dtype=np.complex128) * length
    small = np.abs(x) < SERIES_THRESHOLD
    safe = np.where(small, 1.0, x)
    ratio = np.where(small, 1.0 + x / 2.0 + x * x / 6.0, np.expm1(safe) / safe)
    return length * ratio


def segment_entry_powers(profile: PowerProfile) -> np.ndarray:
    """Power at the start of each segment, after its entry gain."""
    powers = np.empty(len(profile.segments))
    level = 1.0
    for index, segment in enumerate(profile.segments):
        level *= segment.entry_gain
        powers[index] = level
        level *= np.exp(-segment.alpha * segment.length)
    return powers


def power_at(profile: PowerProfile, z: float, side: str = "left") -> float:
    """
    One-sided value P(z⁻) or P(z⁺) of the profile

    Args:
        profile: Power profile
        z: Position in m, 0 ≤ z ≤ total length
        side: ``"left"`` for P(z⁻), ``"right"`` for P(z⁺)

    Returns:
        Normalized power
    """
    index, offset = _locate(profile, z, side)
    segment = profile.segments[index]
    return float(segment_entry_powers(profile)[index] * np.exp(-segment.alpha * offset))


def alpha_at(profile: PowerProfile, z: float, side: str = "left") -> float:
    """One-sided local attenuation α(z⁻) or α(z⁺)."""
    index, _ = _locate(profile, z, side)
    return profile.segments[index].alpha


def _locate(profile: PowerProfile, z: float, side: str):
    starts = profile.segment_starts()
    ends = starts + np.array([segment.length for segment in profile.segments])
    tol = 1e-9 * profile.total_length
    if z < -tol or z > profile.total_length + tol:
        raise ConfigurationError(f"z={z} m lies outside the {profile.total_length} m profile")
    if side == "left":
        index = int(np.searchsorted(ends, z - tol, side="left"))
        index = min(index, len(starts) - 1)
        if z <= tol:
            index = 0
    elif side == "right":
        index = int(np.searchsorted(starts, z + tol, side="right")) - 1
        index = max(index, 0)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return index, min(max(z - starts[index], 0.0), profile.segments[index].length)


def phase_integral(
    profile: PowerProfile,
    d_omega: ArrayOrFloat,
    beta2: float,
    z_start: float,
    z_end: float
) -> np.ndarray:
    """
    ∫_{z_start}^{z_end} P(z) e^{jβ₂ΔΩz} dz, exact per exponential segment

    Args:
        profile: Power profile
        d_omega: ΔΩ in rad²/s²
        beta2: GVD, s²/m
        z_start: Lower limit, m
        z_end: Upper limit, m

    Returns:
        Complex array shaped like d_omega
    """
    b = beta2 * np.asarray(d_omega, dtype=np.float64)
    total = np.zeros(np.shape(b), dtype=np.complex128)
    entry = segment_entry_powers(profile)
    for start, level, segment in zip(profile.segment_starts(), entry, profile.segments):
        lo = max(start, z_start)
        hi = min(start + segment.length, z_end)
        if hi <= lo:
            continue
        p_lo = level * np.exp(-segment.alpha * (lo - start))
        total += p_lo * np.exp(1j * b * lo) * exponential_integral(1j * b - segment.alpha, hi - lo)
    return total


def _check_half(profile: PowerProfile, half_spans: int) -> None:
    if half_spans < 1 or 2 * half_spans > profile.num_spans:
        raise ConfigurationError(
            f"half_spans={half_spans} does not fit a {profile.num_spans}-span profile"
        )


def lambda_sum(
    profile: PowerProfile,
    half_spans: int,
    d_omega: ArrayOrFloat,
    beta2: float
) -> np.ndarray:
    """
    Λ: kernel accumulated over the first half_spans spans

    Returns:
        ∫₀^{z_m} P(z) e^{jβ₂ΔΩz} dz with z_m = half_spans·L
    """
    _check_half(profile, half_spans)
    z_mid = half_spans * profile.span_length
    return phase_integral(profile, d_omega, beta2, 0.0, z_mid)


def psi_sum(
    profile: PowerProfile,
    half_spans: int,
    d_omega: ArrayOrFloat,
    beta2: float
) -> np.ndarray:
    """
    Ψ: kernel accumulated after the conjugation point

    Returns:
        e^{−jβ₂ΔΩz_e} ∫_{z_m}^{z_e} P(z) e^{jβ₂ΔΩz} dz with z_e = 2·z_m
    """
    _check_half(profile, half_spans)
    z_mid = half_spans * profile.span_length
    z_end = 2 * z_mid
    b = beta2 * np.asarray(d_omega, dtype=np.float64)
    return np.exp(-1j * b * z_end) * phase_integral(profile, d_omega, beta2, z_mid, z_end)


class SymmetryReport(BaseModel):
    """Outcome of the OPC-cancellation mirror conditions"""
    conditions: Dict[str, bool]
    deviations: Dict[str, float] = Field(default_factory=dict)
    asymmetry_norm: float = Field(ge=0.0)

    @property
    def all_pass(self) -> bool:
        return all(self.conditions.values())

    def to_frame(self) -> pd.DataFrame:
        """One row per condition plus the asymmetry norm."""
        rows = [
            {"condition": name, "passed": passed, "max_deviation": self.deviations.get(name, 0.0)}
            for name, passed in self.conditions.items()
        ]
        rows.append({
            "condition": "asymmetry_norm",
            "passed": self.asymmetry_norm <= SYMMETRY_RTOL,
            "max_deviation": self.asymmetry_norm,
        })
        return pd.DataFrame(rows, columns=["condition", "passed", "max_deviation"])

    def write(self, path: Union[str, Path]) -> Path:
        """
        Write the report as CSV

        Raises:
            ResultsIOError: if the file cannot be written
        """
        path = Path(path)
        try:
            self.to_frame().to_csv(path, index=False, float_format="%.6e")
        except OSError as e:
            raise ResultsIOError(f"cannot write symmetry report ({e})", path) from e
        logger.info(f"Symmetry report written to {path}")
        return path


def symmetry_predicates(profile: PowerProfile) -> SymmetryReport:
    """
    Evaluate the four mirror conditions for n = 1 … N_s/2

        P((N_s−n)L⁻)   = P((n−1)L⁺)
        P((N_s−n−1)L⁺) = P(nL⁻)
        α((N_s−n)L⁻)   = −α((n−1)L⁺)
        α((N_s−n−1)L⁺) = −α(nL⁻)

    plus the scalar norm max_z |P(z) − P(z_e − z)|.

    Args:
        profile: Power profile of a link with an even span count

    Returns:
        SymmetryReport

    Raises:
        ConfigurationError: for an odd span count
    """
    n_spans = profile.num_spans
    if n_spans % 2 != 0:
        raise ConfigurationError(f"symmetry conditions need an even span count, got {n_spans}")
    span = profile.span_length

    names = ("power_mirror_end", "power_mirror_start", "loss_mirror_end", "loss_mirror_start")
    deviations = dict.fromkeys(names, 0.0)
    for n in range(1, n_spans // 2 + 1):
        pairs = {
            "power_mirror_end": (
                power_at(profile, (n_spans - n) * span, "left"),
                power_at(profile, (n - 1) * span, "right"),
            ),
            "power_mirror_start": (
                power_at(profile, (n_spans - n - 1) * span, "right"),
                power_at(profile, n * span, "left"),
            ),
            "loss_mirror_end": (
                alpha_at(profile, (n_spans - n) * span, "left"),
                -alpha_at(profile, (n - 1) * span, "right"),
            ),
            "loss_mirror_start": (
                alpha_at(profile, (n_spans - n - 1) * span, "right"),
                -alpha_at(profile, n * span, "left"),
            ),
        }
        for name, (lhs, rhs) in pairs.items():
            scale = max(abs(lhs), abs(rhs), 1e-300)
            deviations[name] = max(deviations[name], abs(lhs - rhs) / scale if lhs != rhs else 0.0)

    conditions = {name: deviations[name] <= SYMMETRY_RTOL for name in names}

    total = profile.total_length
    count = ASYMMETRY_SAMPLES_PER_SPAN * n_spans
    z = (np.arange(count) + 0.5) * total / count
    forward = np.array([power_at(profile, value) for value in z])
    asymmetry = float(np.max(np.abs(forward - forward[::-1])))

    logger.debug(f"Symmetry conditions {conditions}, asymmetry norm {asymmetry:.3e}")
    return SymmetryReport(conditions=conditions, deviations=deviations, asymmetry_norm=asymmetry)


def write_symmetry_report(profile: PowerProfile, path: Union[str, Path]) -> Path:
    """Evaluate the symmetry predicates of a profile and write them as CSV."""
    return symmetry_predicates(profile).write(path)

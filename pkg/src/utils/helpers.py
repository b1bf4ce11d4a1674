"""
General utility functions: unit conversions and grid helpers
"""

import math
from typing import Union

import numpy as np
from scipy import constants

ArrayOrFloat = Union[float, np.ndarray]

REFERENCE_WAVELENGTH_M = 1550e-9


def dbm_to_watt(power_dbm: ArrayOrFloat) -> ArrayOrFloat:
    """
    Convert power from dBm to watts

    Args:
        power_dbm: Power in dBm

    Returns:
        Power in W
    """
    return 10.0 ** ((power_dbm - 30.0) / 10.0)


def watt_to_dbm(power_w: float) -> float:
    """
    Convert power from watts to dBm

    Args:
        power_w: Power in W (must be > 0)

    Returns:
        Power in dBm
    """
    return 10.0 * math.log10(power_w) + 30.0


def db_to_linear(value_db: ArrayOrFloat) -> ArrayOrFloat:
    """Power ratio in dB to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Linear power ratio to dB."""
    return 10.0 * math.log10(value)


def attenuation_db_to_neper(alpha_db_per_km: float) -> float:
    """
    Convert a fiber attenuation coefficient to power attenuation in Np/m

    Args:
        alpha_db_per_km: Attenuation in dB/km

    Returns:
        Power attenuation coefficient in Np/m (P(z) = P0·exp(-alpha·z))
    """
    return alpha_db_per_km * math.log(10.0) / 10.0 / 1e3


def dispersion_to_beta2(
    dispersion_ps_nm_km: float,
    wavelength_m: float = REFERENCE_WAVELENGTH_M
) -> float:
    """
    Convert a dispersion parameter D into group-velocity dispersion beta2

    Args:
        dispersion_ps_nm_km: Dispersion parameter D in ps/(nm·km)
        wavelength_m: Reference wavelength in m

    Returns:
        beta2 in s²/m
    """
    d_si = dispersion_ps_nm_km * 1e-6  # ps/(nm·km) -> s/m²
    return -d_si * wavelength_m ** 2 / (2.0 * math.pi * constants.c)


def gamma_to_si(gamma_per_w_km: float) -> float:
    """Nonlinear coefficient from 1/(W·km) to 1/(W·m)."""
    return gamma_per_w_km / 1e3


def carrier_frequency(wavelength_m: float = REFERENCE_WAVELENGTH_M) -> float:
    """Optical carrier frequency in Hz for a vacuum wavelength."""
    return constants.c / wavelength_m


def centered_indices(n_points: int) -> np.ndarray:
    """
    Integer frequency indices in FFT order, centered on zero

    Args:
        n_points: Grid size

    Returns:
        Array whose entry j is the signed bin index of FFT output j
    """
    return np.fft.fftfreq(n_points, d=1.0 / n_points).astype(np.int64)


def angular_frequency_grid(n_points: int, sample_rate: float) -> np.ndarray:
    """Angular frequencies (rad/s) of the FFT bins, in FFT order."""
    return 2.0 * math.pi * np.fft.fftfreq(n_points, d=1.0 / sample_rate)


def format_duration(seconds: float) -> str:
    """
    Format a duration into a human-readable string

    Args:
        seconds: Duration in seconds

    Returns:
        Formatted string (e.g., "2m 05.3s")
    """
    if seconds < 60.0:
        return f"{seconds:.1f}s"
    minutes, rest = divmod(seconds, 60.0)
    if minutes < 60:
        return f"{int(minutes)}m {rest:04.1f}s"
    hours, minutes = divmod(minutes, 60)
    return f"{int(hours)}h {int(minutes):02d}m"

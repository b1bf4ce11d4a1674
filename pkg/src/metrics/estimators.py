"""
Performance Estimators Module

Data-aided SNR, the NLI suppression factor ζ and the channel-memory
estimate used to size equalizer windows.
"""

import logging
import math
from typing import Optional

import numpy as np

from config.settings import get_settings

from ..models.metrics_models import SnrEstimate, ZetaRecord
from ..utils.validators import InvalidInputError

logger = logging.getLogger(__name__)

Z_95 = 1.96
DB_PER_NEPER_POWER = 10.0 / math.log(10.0)


def _pooled(rx: np.ndarray, tx: np.ndarray):
    rx = np.asarray(rx, dtype=np.complex128).ravel()
    tx = np.asarray(tx, dtype=np.complex128).ravel()
    if rx.shape != tx.shape:
        raise InvalidInputError(f"rx and tx sizes differ ({rx.size} vs {tx.size})")
    if rx.size == 0:
        raise InvalidInputError("no symbols to estimate from")
    tx_energy = float(np.vdot(tx, tx).real)
    if tx_energy <= 0.0:
        raise InvalidInputError("transmitted symbols have zero energy")
    return rx, tx, tx_energy


def _half_width(sum_e2: float, sum_e4: float, count: int) -> float:
    """95 % half-width (dB) of the noise-power mean, delta method."""
    if count < 2 or sum_e2 <= 0.0:
        return 0.0
    mean = sum_e2 / count
    variance = max(sum_e4 / count - mean ** 2, 0.0)
    return Z_95 * DB_PER_NEPER_POWER * math.sqrt(variance) / (mean * math.sqrt(count))


def _to_db(signal_power: float, noise_power: float, cap_db: float):
    if noise_power <= 0.0:
        return cap_db, True
    snr_db = 10.0 * math.log10(signal_power / noise_power)
    if snr_db >= cap_db:
        return cap_db, True
    return snr_db, False


def snr_data_aided(
    rx_symbols: np.ndarray,
    tx_symbols: np.ndarray,
    cap_db: Optional[float] = None
) -> SnrEstimate:
    """
    SNR after fitting one complex scalar c minimizing Σ|rx − c·tx|²

    Both polarizations are pooled.

    Args:
        rx_symbols: Received symbols
        tx_symbols: Transmitted symbols of the same shape
        cap_db: Sentinel returned for a vanishing error (settings default 80 dB)

    Returns:
        SnrEstimate with a 95 % confidence half-width

    Raises:
        InvalidInputError: on size mismatch or zero-energy tx
    """
    cap_db = get_settings().snr_cap_db if cap_db is None else cap_db
    rx, tx, tx_energy = _pooled(rx_symbols, tx_symbols)
    scale = np.vdot(tx, rx) / tx_energy
    error_power = np.abs(rx - scale * tx) ** 2

    signal_power = abs(scale) ** 2 * tx_energy / tx.size
    snr_db, capped = _to_db(signal_power, float(np.mean(error_power)), cap_db)
    return SnrEstimate(
        snr_db=snr_db,
        num_symbols=tx.size,
        confidence_halfwidth=0.0 if capped else _half_width(
            float(np.sum(error_power)), float(np.sum(error_power ** 2)), tx.size
        ),
        capped=capped,
    )


class SnrAccumulator:
    """
    Running data-aided SNR over Monte-Carlo realizations.

    The pooled scalar fit uses the sums Σ|t|², Σt*r and Σ|r|², so the
    SNR is exactly that of snr_data_aided on all data. The confidence
    half-width uses each batch's own error moments. Accumulators merge
    associatively.
    """

    def __init__(self, cap_db: Optional[float] = None):
        self.cap_db = get_settings().snr_cap_db if cap_db is None else cap_db
        self.sum_tt = 0.0
        self.sum_tr = 0j
        self.sum_rr = 0.0
        self.sum_e2 = 0.0
        self.sum_e4 = 0.0
        self.count = 0

    def add(self, rx_symbols: np.ndarray, tx_symbols: np.ndarray) -> "SnrAccumulator":
        """Accumulate one batch of aligned symbols."""
        rx, tx, tx_energy = _pooled(rx_symbols, tx_symbols)
        cross = complex(np.vdot(tx, rx))
        error_power = np.abs(rx - cross / tx_energy * tx) ** 2

        self.sum_tt += tx_energy
        self.sum_tr += cross
        self.sum_rr += float(np.vdot(rx, rx).real)
        self.sum_e2 += float(np.sum(error_power))
        self.sum_e4 += float(np.sum(error_power ** 2))
        self.count += tx.size
        return self

    def merge(self, other: "SnrAccumulator") -> "SnrAccumulator":
        """New accumulator holding the data of both."""
        merged = SnrAccumulator(self.cap_db)
        for name in ("sum_tt", "sum_tr", "sum_rr", "sum_e2", "sum_e4", "count"):
            setattr(merged, name, getattr(self, name) + getattr(other, name))
        return merged

    @property
    def half_width(self) -> float:
        return _half_width(self.sum_e2, self.sum_e4, self.count)

    def estimate(self) -> SnrEstimate:
        """
        Current SNR estimate

        Raises:
            InvalidInputError: if nothing was accumulated
        """
        if self.count == 0:
            raise InvalidInputError("no symbols accumulated")
        signal_power = abs(self.sum_tr) ** 2 / self.sum_tt
        noise_power = max(self.sum_rr - signal_power, 0.0)
        snr_db, capped = _to_db(signal_power, noise_power, self.cap_db)
        return SnrEstimate(
            snr_db=snr_db,
            num_symbols=self.count,
            confidence_halfwidth=0.0 if capped else self.half_width,
            capped=capped,
        )


def zeta(snr_nlc: SnrEstimate, snr_edc: SnrEstimate) -> ZetaRecord:
    """
    NLI suppression factor ζ = SNR_NLC / SNR_EDC in dB

    Args:
        snr_nlc: Estimate with nonlinearity compensation (ASE off)
        snr_edc: Estimate with dispersion compensation only (ASE off)

    Returns:
        ZetaRecord
    """
    return ZetaRecord(
        snr_nlc_db=snr_nlc.snr_db,
        snr_edc_db=snr_edc.snr_db,
        zeta_db=snr_nlc.snr_db - snr_edc.snr_db,
    )


def channel_memory_estimate(
    beta2: float,
    symbol_rate: float,
    total_bandwidth: float,
    distance: float
) -> float:
    """
    Dispersive channel memory M = 2π·|β₂|·R_s·B·L in symbols

    Args:
        beta2: GVD, s²/m
        symbol_rate: Baud
        total_bandwidth: Occupied optical bandwidth, Hz
        distance: Link length, m

    Returns:
        Memory in symbol periods
    """
    if symbol_rate < 0 or total_bandwidth < 0 or distance < 0:
        raise InvalidInputError("channel memory inputs must be non-negative")
    return 2.0 * math.pi * abs(beta2) * symbol_rate * total_bandwidth * distance

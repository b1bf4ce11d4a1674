"""
Receiver Chain Module

Per-scheme DSP chains: channel selection, conjugation, matched filtering
and symbol-rate decimation around the compensation engines.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import fft as sp_fft

from ..equalizers.backpropagation import dbp_ideal
from ..equalizers.dispersion import edc, net_dispersion_length
from ..equalizers.volterra_equalizer import vao_equalize, vsfe_recursive, vsfe_single
from ..equalizers.windowing import kept_sample_range
from ..metrics.estimators import snr_data_aided
from ..models.equalizer_models import ChainStage, EqualizerConfig, EqualizerVariant, RxChain
from ..models.experiment_models import TxConfig
from ..models.link import Link
from ..models.signals import DualPolSignal
from ..simulation.channel import opc_conjugate
from ..simulation.waveform import frequency_shift, rrc_transfer_function
from ..utils.helpers import centered_indices
from ..utils.validators import AliasingError, ConfigurationError, InvalidInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainOutput:
    """
    Symbols recovered by a receiver chain.

    ``symbols`` has shape (2, n); ``first_symbol`` is the index of
    symbols[:, 0] in the transmitted frame.
    """
    symbols: np.ndarray
    first_symbol: int = 0

    @property
    def n_symbols(self) -> int:
        return self.symbols.shape[-1]

    def reference(self, tx_symbols: np.ndarray) -> np.ndarray:
        """Slice of the (2, N) transmitted symbols aligned with this output."""
        return tx_symbols[:, self.first_symbol:self.first_symbol + self.n_symbols]


def select_channel(
    signal: DualPolSignal,
    channel_index: int,
    target_sps: int,
    tx_config: TxConfig
) -> DualPolSignal:
    """
    Bring one channel to baseband, brick-wall filter it and resample

    Args:
        signal: Field carrying the multiplex
        channel_index: Channel to keep, 0 = lowest frequency
        target_sps: Samples per symbol of the output
        tx_config: Transmitter plan (rate, spacing, roll-off)

    Returns:
        Single-channel DualPolSignal at target_sps·symbol_rate

    Raises:
        ConfigurationError: for a channel outside the multiplex
        AliasingError: if target_sps cannot hold the channel band
    """
    if not 0 <= channel_index < tx_config.num_channels:
        raise ConfigurationError(
            f"channel {channel_index} outside a {tx_config.num_channels}-channel multiplex"
        )
    if target_sps < 2:
        raise AliasingError(f"target_sps must be at least 2, got {target_sps}")

    offset = tx_config.channel_offset(channel_index) - signal.center_offset
    baseband = frequency_shift(signal, -offset)

    n = baseband.n_samples
    in_sps = baseband.sample_rate / tx_config.symbol_rate
    n_symbols = int(round(n / in_sps))
    n_out = n_symbols * target_sps
    if n_out > n:
        raise AliasingError(f"cannot upsample {n} samples to {n_out}")

    freqs = sp_fft.fftfreq(n, d=1.0 / baseband.sample_rate)
    band = 0.5 * tx_config.symbol_rate * (1.0 + tx_config.rolloff)
    spectra = baseband.spectra() * (np.abs(freqs) <= band)

    # bins [-n_out/2, n_out/2) in FFT order; ifft amplitude needs the n_out/n factor
    keep = centered_indices(n_out) % n
    fields = sp_fft.ifft(spectra[:, keep] * (n_out / n), axis=-1)
    return DualPolSignal.from_fields(fields, tx_config.symbol_rate * target_sps)


def matched_filter_downsample(
    signal: DualPolSignal,
    rolloff: float,
    in_sps: int,
    timing_offset: int = 0
) -> np.ndarray:
    """
    RRC matched filter followed by decimation to one sample per symbol

    Args:
        signal: Single-channel field at in_sps
        rolloff: Roll-off of the transmit pulse
        in_sps: Samples per symbol of the input
        timing_offset: Sampling phase in samples, 0 ≤ offset < in_sps

    Returns:
        Complex array of shape (2, n_symbols)
    """
    if in_sps < 2:
        raise AliasingError(f"matched filtering needs at least 2 samples/symbol, got {in_sps}")
    if not 0 <= timing_offset < in_sps:
        raise ConfigurationError(f"timing_offset must lie in [0, {in_sps}), got {timing_offset}")
    transfer = rrc_transfer_function(signal.n_samples, in_sps, rolloff)
    filtered = sp_fft.ifft(signal.spectra() * transfer, axis=-1)
    return filtered[:, timing_offset::in_sps]


def calibrate_timing(
    signal: DualPolSignal,
    tx_symbols: np.ndarray,
    rolloff: float,
    in_sps: int
) -> int:
    """
    Data-aided choice of the sampling phase

    Args:
        signal: Single-channel field at in_sps
        tx_symbols: (2, n) transmitted symbols aligned with the signal
        rolloff: Roll-off of the transmit pulse
        in_sps: Samples per symbol

    Returns:
        Phase with the highest data-aided SNR
    """
    scores = []
    for phase in range(in_sps):
        rx = matched_filter_downsample(signal, rolloff, in_sps, phase)
        length = min(rx.shape[-1], tx_symbols.shape[-1])
        scores.append(snr_data_aided(rx[:, :length], tx_symbols[:, :length]).snr_db)
    best = int(np.argmax(scores))
    logger.debug(f"Timing phase {best} selected (SNR {scores[best]:.2f} dB)")
    return best


def conjugate_symbols(signal: DualPolSignal) -> DualPolSignal:
    """Samplewise complex conjugation of both polarizations."""
    return opc_conjugate(signal)


def _equalize(
    signal: DualPolSignal,
    link: Link,
    eq_config: EqualizerConfig
) -> DualPolSignal:
    variant = eq_config.variant
    if variant == EqualizerVariant.VSFE_SINGLE:
        return vsfe_single(signal, link, eq_config)
    if variant == EqualizerVariant.VSFE_RECURSIVE:
        return vsfe_recursive(signal, link, eq_config)
    if variant == EqualizerVariant.VAO:
        return vao_equalize(signal, link, eq_config)
    if variant == EqualizerVariant.DBP_IDEAL:
        return dbp_ideal(signal, link, eq_config.dbp_steps_per_span)
    return edc(signal, link.reference_span().beta2, net_dispersion_length(link))


def run_chain(
    received: DualPolSignal,
    chain: RxChain,
    link: Link,
    eq_config: EqualizerConfig,
    tx_config: TxConfig,
    timing_offset: int = 0
) -> ChainOutput:
    """
    Execute the stage sequence of a scheme on a received field

    Args:
        received: Field at the receiver, simulation rate
        chain: Scheme, channel and output oversampling
        link: Link the field crossed
        eq_config: Equalizer geometry and variant
        tx_config: Transmitter plan
        timing_offset: Sampling phase for the matched filter

    Returns:
        ChainOutput with symbols of the selected channel

    Raises:
        InvalidInputError: if the received field is not at the simulation rate
        ConfigurationError: if the stage sequence never reaches symbol rate
    """
    if not np.isclose(received.sample_rate, tx_config.sample_rate):
        raise InvalidInputError(
            f"received field at {received.sample_rate / 1e9:.2f} GSa/s, "
            f"expected {tx_config.sample_rate / 1e9:.2f}"
        )
    channel = tx_config.center_channel if chain.channel_index is None else chain.channel_index
    stages = chain.stages
    signal = received
    first_symbol = 0
    symbols: Optional[np.ndarray] = None

    for position, stage in enumerate(stages):
        if stage == ChainStage.EDC:
            signal = edc(signal, link.reference_span().beta2, net_dispersion_length(link))
        elif stage == ChainStage.EQUALIZE:
            signal = _equalize(signal, link, eq_config)
            if not eq_config.wrap_windows and eq_config.variant != EqualizerVariant.DBP_IDEAL:
                start, _ = kept_sample_range(received.n_samples, eq_config)
                first_symbol = start // tx_config.samples_per_symbol
        elif stage == ChainStage.DBP:
            signal = dbp_ideal(signal, link, eq_config.dbp_steps_per_span)
        elif stage == ChainStage.SELECT:
            # a later conjugation mirrors the spectrum, so pick the mirrored slot
            mirrored = ChainStage.CONJUGATE in stages[position:]
            index = tx_config.num_channels - 1 - channel if mirrored else channel
            signal = select_channel(signal, index, chain.target_sps, tx_config)
        elif stage == ChainStage.CONJUGATE:
            signal = conjugate_symbols(signal)
        elif stage == ChainStage.MATCHED_FILTER:
            symbols = matched_filter_downsample(signal, tx_config.rolloff, chain.target_sps, timing_offset)

    if symbols is None:
        raise ConfigurationError(f"{chain.scheme.value} chain has no matched-filter stage")
    logger.debug(f"{chain.scheme.value} chain produced {symbols.shape[-1]} symbols from {first_symbol}")
    return ChainOutput(symbols=symbols, first_symbol=first_symbol)

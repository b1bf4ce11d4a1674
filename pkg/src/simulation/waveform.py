"""
Waveform Module

Generates PM-16QAM WDM transmit signals: symbol draws, frequency-domain
root-raised-cosine shaping, multiplexing and launch-power setting.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy import fft as sp_fft

from ..models.experiment_models import TxConfig
from ..models.signals import DualPolSignal, SymbolFrame
from ..utils.helpers import dbm_to_watt
from ..utils.validators import AliasingError, ConfigurationError, InvalidInputError

logger = logging.getLogger(__name__)

# 2-bit Gray code -> amplitude level
_GRAY_LEVELS = np.array([-3.0, -1.0, 3.0, 1.0])


def gray_16qam_constellation() -> np.ndarray:
    """
    Gray-mapped 16-QAM points indexed by their 4-bit label, unit mean energy

    Returns:
        Complex array of 16 points; label bits b3b2 select I, b1b0 select Q
    """
    labels = np.arange(16)
    points = _GRAY_LEVELS[labels >> 2] + 1j * _GRAY_LEVELS[labels & 3]
    return points / math.sqrt(10.0)


GRAY_16QAM = gray_16qam_constellation()


def generate_symbols(
    n: int,
    num_channels: int,
    seed: int,
    symbol_rate: float = 32e9
) -> SymbolFrame:
    """
    Draw i.i.d. uniform 16-QAM symbols for every channel and polarization

    Args:
        n: Symbols per sequence
        num_channels: Number of WDM channels
        seed: Seed of the numpy Generator
        symbol_rate: Symbol rate in Baud

    Returns:
        SymbolFrame of shape (num_channels, 2, n)

    Raises:
        ConfigurationError: if n or num_channels is zero
    """
    if n <= 0 or num_channels <= 0:
        raise ConfigurationError(f"need n > 0 and num_channels > 0, got n={n}, channels={num_channels}")
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 16, size=(num_channels, 2, n))
    return SymbolFrame(symbols=GRAY_16QAM[labels], symbol_rate=symbol_rate)


def raised_cosine_spectrum(n_samples: int, sps: int, rolloff: float) -> np.ndarray:
    """
    Raised-cosine spectrum on the FFT grid, unit gain in the flat region

    Args:
        n_samples: Grid length
        sps: Samples per symbol
        rolloff: Roll-off factor

    Returns:
        Real array in FFT order
    """
    f = np.abs(sp_fft.fftfreq(n_samples, d=1.0 / sps))  # in units of the symbol rate
    f_low = (1.0 - rolloff) / 2.0
    f_high = (1.0 + rolloff) / 2.0
    spectrum = np.zeros(n_samples)
    spectrum[f <= f_low] = 1.0
    transition = (f > f_low) & (f <= f_high)
    spectrum[transition] = 0.5 * (1.0 + np.cos(np.pi / rolloff * (f[transition] - f_low)))
    return spectrum


def rrc_transfer_function(n_samples: int, sps: int, rolloff: float) -> np.ndarray:
    """Root-raised-cosine transfer function (unit gain), FFT order."""
    return np.sqrt(raised_cosine_spectrum(n_samples, sps, rolloff))


def rrc_impulse_response(n_samples: int, sps: int, rolloff: float) -> np.ndarray:
    """Circular RRC pulse produced by rrc_shape for a unit symbol at t=0."""
    return sp_fft.ifft(sps * rrc_transfer_function(n_samples, sps, rolloff))


def rrc_shape(
    frame: SymbolFrame,
    rolloff: float,
    sps: int,
    channel_index: int = 0
) -> DualPolSignal:
    """
    Shape one channel of a frame with a circular frequency-domain RRC filter

    The filter gain is sps·sqrt(RC) so that the mean signal power equals
    the mean symbol energy, and a unit-gain sqrt(RC) matched filter
    restores the symbols at the sampling instants.

    Args:
        frame: Symbols to shape
        rolloff: Roll-off factor, 0 < rolloff <= 1
        sps: Samples per symbol
        channel_index: Channel of the frame to shape

    Returns:
        DualPolSignal at sps·symbol_rate

    Raises:
        AliasingError: if sps < 2
        ConfigurationError: if rolloff is outside (0, 1]
    """
    if sps < 2:
        raise AliasingError(f"RRC shaping needs at least 2 samples/symbol, got {sps}")
    if not 0.0 < rolloff <= 1.0:
        raise ConfigurationError(f"rolloff must be in (0, 1], got {rolloff}")

    symbols = frame.channel(channel_index)
    n_samples = frame.n_symbols * sps
    upsampled = np.zeros((2, n_samples), dtype=np.complex128)
    upsampled[:, ::sps] = symbols

    transfer = sps * rrc_transfer_function(n_samples, sps, rolloff)
    shaped = sp_fft.ifft(sp_fft.fft(upsampled, axis=-1) * transfer, axis=-1)
    return DualPolSignal.from_fields(shaped, sample_rate=frame.symbol_rate * sps)


def frequency_shift(signal: DualPolSignal, offset: float) -> DualPolSignal:
    """
    Move the spectrum of a signal up by ``offset`` Hz

    Integer-bin offsets rotate the DFT exactly; other offsets use a
    time-domain phase ramp.
    """
    n = signal.n_samples
    bins = offset * n / signal.sample_rate
    if math.isclose(bins, round(bins), abs_tol=1e-9):
        spectra = np.roll(signal.spectra(), int(round(bins)), axis=-1)
        return signal.with_spectra(spectra)
    t = np.arange(n) / signal.sample_rate
    return signal.with_fields(signal.fields * np.exp(2j * np.pi * offset * t))


def wdm_mux(channels: List[DualPolSignal], spacing: float) -> DualPolSignal:
    """
    Frequency-multiplex channels at offsets k·spacing centered on zero

    Args:
        channels: Baseband channels, lowest frequency first
        spacing: Channel spacing in Hz

    Returns:
        Multiplexed DualPolSignal

    Raises:
        ConfigurationError: on empty input, mismatched grids or grid overflow
    """
    if not channels:
        raise ConfigurationError("wdm_mux needs at least one channel")
    rate = channels[0].sample_rate
    n = channels[0].n_samples
    if any(ch.sample_rate != rate or ch.n_samples != n for ch in channels):
        raise ConfigurationError("all channels must share sample rate and length")

    count = len(channels)
    if count == 1:
        return channels[0]

    offsets = (np.arange(count) - (count - 1) / 2.0) * spacing
    edge = float(np.max(np.abs(offsets))) + spacing / 2.0
    if edge > rate / 2.0 * (1.0 + 1e-12):
        raise ConfigurationError(
            f"multiplex edge {edge / 1e9:.2f} GHz exceeds the {rate / 2e9:.2f} GHz Nyquist limit"
        )

    total = np.zeros((2, n), dtype=np.complex128)
    for channel, offset in zip(channels, offsets):
        total += frequency_shift(channel, float(offset)).fields
    return DualPolSignal.from_fields(total, sample_rate=rate)


def set_power(signal: DualPolSignal, p_dbm: float, num_channels: int) -> DualPolSignal:
    """
    Rescale a signal to num_channels·p of total power

    Args:
        signal: Input signal
        p_dbm: Power per channel, dBm
        num_channels: Channels sharing the total power

    Returns:
        Rescaled signal

    Raises:
        InvalidInputError: if the input has zero power
    """
    current = signal.power
    if current <= 0.0:
        raise InvalidInputError("cannot set the power of a zero-power signal")
    target = num_channels * dbm_to_watt(p_dbm)
    return signal.scaled(math.sqrt(target / current))


class WdmTransmitter:
    """
    Builds the launched multiplex for a transmitter configuration.

    The symbol frame is returned alongside the field so receivers can run
    data-aided estimation.
    """

    def __init__(self, tx_config: TxConfig):
        """
        Initialize transmitter

        Args:
            tx_config: Transmitter parameters
        """
        self.config = tx_config

    def transmit(
        self,
        seed: Optional[int] = None,
        power_dbm: Optional[float] = None
    ) -> Tuple[SymbolFrame, DualPolSignal]:
        """
        Generate symbols, shape, multiplex and set the launch power

        Args:
            seed: Symbol seed (defaults to the configured seed)
            power_dbm: Power per channel (defaults to the configured power)

        Returns:
            Tuple of (SymbolFrame, launched DualPolSignal)
        """
        cfg = self.config
        seed = cfg.seed if seed is None else seed
        power_dbm = cfg.power_per_channel if power_dbm is None else power_dbm

        frame = generate_symbols(cfg.n_symbols, cfg.num_channels, seed, cfg.symbol_rate)
        shaped = [
            rrc_shape(frame, cfg.rolloff, cfg.samples_per_symbol, channel_index=index)
            for index in range(cfg.num_channels)
        ]
        launched = set_power(wdm_mux(shaped, cfg.channel_spacing), power_dbm, cfg.num_channels)
        logger.debug(
            f"Transmitted {cfg.num_channels} ch x {cfg.n_symbols} symbols at "
            f"{power_dbm:.2f} dBm/ch (seed {seed})"
        )
        return frame, launched

"""
Sample-buffer models for transmitted and received optical fields
"""

from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np
from scipy import fft as sp_fft

from ..utils.helpers import angular_frequency_grid
from ..utils.validators import ConfigurationError, InvalidInputError


@dataclass(frozen=True)
class DualPolSignal:
    """
    Sampled complex baseband field on two polarizations.

    |x|² + |y|² is the instantaneous power in W. ``center_offset`` is the
    frequency of the grid center relative to the multiplex center (Hz); it
    flips sign under phase conjugation.
    """
    x: np.ndarray
    y: np.ndarray
    sample_rate: float
    center_offset: float = 0.0

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.complex128)
        y = np.ascontiguousarray(self.y, dtype=np.complex128)
        if x.ndim != 1 or y.ndim != 1:
            raise InvalidInputError("polarization fields must be one-dimensional")
        if len(x) == 0 or len(x) != len(y):
            raise InvalidInputError(
                f"polarization lengths must match and be non-zero (got {len(x)}, {len(y)})"
            )
        if not self.sample_rate > 0:
            raise ConfigurationError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if not np.isfinite(self.power):
            raise InvalidInputError("signal power is not finite")

    @classmethod
    def from_fields(
        cls,
        fields: np.ndarray,
        sample_rate: float,
        center_offset: float = 0.0
    ) -> "DualPolSignal":
        """Build from a (2, N) array of X/Y samples."""
        return cls(fields[0], fields[1], sample_rate, center_offset)

    @property
    def n_samples(self) -> int:
        return len(self.x)

    @property
    def duration(self) -> float:
        """Grid period T in seconds."""
        return self.n_samples / self.sample_rate

    @property
    def fields(self) -> np.ndarray:
        """Stacked (2, N) view of both polarizations."""
        return np.stack([self.x, self.y])

    @property
    def power(self) -> float:
        """Total mean power mean(|x|² + |y|²) in W."""
        return float(np.mean(np.abs(self.x) ** 2 + np.abs(self.y) ** 2))

    @property
    def energy(self) -> float:
        """Sum of |x|² + |y|² over the grid."""
        return float(np.sum(np.abs(self.x) ** 2 + np.abs(self.y) ** 2))

    def spectra(self) -> np.ndarray:
        """Unnormalized DFT of both polarizations, FFT order, shape (2, N)."""
        return sp_fft.fft(self.fields, axis=-1)

    def angular_frequencies(self) -> np.ndarray:
        """Baseband angular frequency of each FFT bin, including the grid offset."""
        return angular_frequency_grid(self.n_samples, self.sample_rate) + 2.0 * np.pi * self.center_offset

    def with_fields(self, fields: np.ndarray) -> "DualPolSignal":
        """Copy with new (2, N) samples; rate and offset preserved."""
        return replace(self, x=fields[0], y=fields[1])

    def with_spectra(self, spectra: np.ndarray) -> "DualPolSignal":
        """Copy whose samples are the inverse DFT of ``spectra``."""
        return self.with_fields(sp_fft.ifft(spectra, axis=-1))

    def scaled(self, factor: complex) -> "DualPolSignal":
        return replace(self, x=self.x * factor, y=self.y * factor)

    def swapped(self) -> "DualPolSignal":
        """Exchange the X and Y polarizations."""
        return replace(self, x=self.y, y=self.x)


@dataclass(frozen=True)
class SymbolFrame:
    """
    Transmitted symbols for every WDM channel.

    ``symbols`` has shape (num_channels, 2, n_symbols): channel, polarization
    (X, Y), time.
    """
    symbols: np.ndarray
    symbol_rate: float

    def __post_init__(self):
        symbols = np.asarray(self.symbols, dtype=np.complex128)
        if symbols.ndim != 3 or symbols.shape[1] != 2 or symbols.shape[2] == 0:
            raise InvalidInputError(
                f"symbols must have shape (channels, 2, n>0), got {symbols.shape}"
            )
        if not self.symbol_rate > 0:
            raise ConfigurationError("symbol_rate must be positive")
        object.__setattr__(self, "symbols", symbols)

    @property
    def num_channels(self) -> int:
        return self.symbols.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.symbols.shape[2]

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.symbols.shape

    def channel(self, index: int) -> np.ndarray:
        """(2, n) symbols of one channel, index counted from the lowest frequency."""
        return self.symbols[index]

"""
Input validation utilities and the package's exception types
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from scipy import fft as sp_fft


class ConfigurationError(ValueError):
    """A configuration value violates a model or grid invariant."""


class InvalidInputError(ValueError):
    """A signal or symbol sequence cannot be processed (e.g. zero energy)."""


class AliasingError(ConfigurationError):
    """The sampling grid cannot represent the requested signal."""


class DiscardConvergenceError(RuntimeError):
    """
    Discard calibration did not settle before reaching half the window.

    Attributes:
        history: Metric value per tried discard (symbols -> dB)
    """

    def __init__(self, message: str, history: Optional[Dict[int, float]] = None):
        super().__init__(message)
        self.history: Dict[int, float] = dict(history or {})


class ResultsIOError(OSError):
    """Reading or writing a result artifact failed."""

    def __init__(self, message: str, path: Union[str, Path]):
        super().__init__(f"{message}: {path}")
        self.path = Path(path)


class GridValidator:
    """Checks for FFT grids and block-processing windows"""

    @staticmethod
    def is_fft_friendly(n_points: int) -> bool:
        """
        Check whether an FFT length factors into small primes

        Args:
            n_points: Transform length

        Returns:
            True if scipy's fast-length search returns the length itself
        """
        return n_points > 0 and sp_fft.next_fast_len(n_points) == n_points

    @staticmethod
    def validate_window(
        window_symbols: int,
        samples_per_symbol: int,
        discard_per_side: int
    ) -> Tuple[bool, str]:
        """
        Validate an equalizer window geometry

        Args:
            window_symbols: Window length in symbols
            samples_per_symbol: Oversampling factor
            discard_per_side: Symbols dropped at each window edge

        Returns:
            Tuple of (is_valid, error_message)
        """
        if window_symbols <= 0:
            return False, "window_symbols must be positive"
        if samples_per_symbol < 2:
            return False, "samples_per_symbol must be at least 2"
        if discard_per_side < 0:
            return False, "discard_per_side cannot be negative"
        if 2 * discard_per_side >= window_symbols:
            return False, (
                f"2*discard_per_side ({2 * discard_per_side}) must be smaller than "
                f"window_symbols ({window_symbols})"
            )
        n_samples = window_symbols * samples_per_symbol
        if not GridValidator.is_fft_friendly(n_samples):
            return False, f"window of {n_samples} samples is not an FFT-friendly length"
        return True, ""


def require_positive(**values: float) -> None:
    """
    Raise ConfigurationError for the first non-positive keyword value

    Args:
        **values: name=value pairs to check
    """
    bad: List[str] = [name for name, value in values.items() if not value > 0]
    if bad:
        raise ConfigurationError(f"must be positive: {', '.join(bad)}")

"""
Windowing Module

Overlap-and-save block processing of a received field: each window is
transformed independently and only its central region is kept.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from config.settings import get_settings

from ..models.equalizer_models import EqualizerConfig
from ..models.signals import DualPolSignal
from ..utils.validators import ConfigurationError, DiscardConvergenceError

logger = logging.getLogger(__name__)

WindowTransform = Callable[[DualPolSignal], DualPolSignal]
DiscardMetric = Callable[[DualPolSignal, EqualizerConfig], float]

MAX_DEFAULT_WINDOW_SYMBOLS = 1024
MEMORY_WINDOW_FACTOR = 4


def window_starts(n_samples: int, config: EqualizerConfig) -> List[int]:
    """
    First input sample of every window

    Cyclic windows may start before 0 and wrap around the grid; the
    kept region of window j always begins at j·advance.

    Args:
        n_samples: Length of the signal
        config: Window geometry

    Returns:
        Window start positions
    """
    advance = config.advance_samples
    discard = config.discard_samples
    if config.wrap_windows:
        count = math.ceil(n_samples / advance)
        return [j * advance - discard for j in range(count)]
    count = (n_samples - 2 * discard) // advance
    return [j * advance for j in range(count)]


def kept_sample_range(n_samples: int, config: EqualizerConfig) -> Tuple[int, int]:
    """
    Input samples covered by windowed_process output, as [start, stop)

    Args:
        n_samples: Length of the signal
        config: Window geometry

    Returns:
        Tuple of (start, stop) sample indices
    """
    if config.wrap_windows:
        return 0, n_samples
    count = len(window_starts(n_samples, config))
    start = config.discard_samples
    return start, start + count * config.advance_samples


def windowed_process(
    signal: DualPolSignal,
    transform: WindowTransform,
    config: EqualizerConfig,
    max_workers: Optional[int] = None
) -> DualPolSignal:
    """
    Apply a per-window transform with overlap-and-save

    Args:
        signal: Input field
        transform: Maps a window-length signal to a window-length signal
        config: Window geometry; wrap_windows selects the cyclic variant
        max_workers: Threads used for windows (defaults to config.max_workers)

    Returns:
        Signal built from the kept regions; same length as the input when
        windows wrap, otherwise starting at input sample discard

    Raises:
        ConfigurationError: if the signal is shorter than one window
    """
    n = signal.n_samples
    width = config.window_samples
    discard = config.discard_samples
    advance = config.advance_samples
    if n < width:
        raise ConfigurationError(f"signal of {n} samples is shorter than the {width}-sample window")

    starts = window_starts(n, config)
    fields = signal.fields
    offsets = np.arange(width)

    def process(start: int) -> DualPolSignal:
        window = fields[:, (start + offsets) % n]
        return transform(signal.with_fields(window))

    workers = max_workers or config.max_workers
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(process, starts))
    else:
        outputs = [process(start) for start in starts]

    kept = np.concatenate([out.fields[:, discard:discard + advance] for out in outputs], axis=-1)
    if config.wrap_windows:
        kept = kept[:, :n]
    logger.debug(f"Processed {len(starts)} windows of {width} samples (advance {advance})")
    return DualPolSignal.from_fields(kept, signal.sample_rate, outputs[0].center_offset)


def default_window_symbols(memory_symbols: float, samples_per_symbol: int = 6) -> int:
    """
    Window of four times the channel memory, capped at 1024 symbols

    The result is rounded up to the next power of two so the window
    length stays FFT-friendly for any samples_per_symbol.

    Args:
        memory_symbols: Channel-memory estimate in symbols
        samples_per_symbol: Oversampling of the equalizer input

    Returns:
        Window length in symbols
    """
    target = max(MEMORY_WINDOW_FACTOR * memory_symbols, 2.0)
    window = 1 << math.ceil(math.log2(target))
    return min(window, MAX_DEFAULT_WINDOW_SYMBOLS)


def discard_calibration(
    signal: DualPolSignal,
    config: EqualizerConfig,
    metric: DiscardMetric,
    tolerance: Optional[float] = None,
    step_symbols: int = 8
) -> int:
    """
    Smallest per-side discard after which the metric stops changing

    The discard grows by step_symbols until two consecutive metric values
    differ by less than the tolerance; the smaller of the two is returned.

    Args:
        signal: Received field used for calibration
        config: Geometry to calibrate (its discard is the starting point)
        metric: Performance (dB) of the chain run with a candidate config
        tolerance: Convergence threshold in dB
        step_symbols: Discard increment per trial

    Returns:
        Calibrated discard in symbols

    Raises:
        DiscardConvergenceError: if 2·discard reaches the window first
    """
    if step_symbols < 1:
        raise ConfigurationError("step_symbols must be at least 1")
    tolerance = get_settings().default_discard_tolerance_db if tolerance is None else tolerance

    history: Dict[int, float] = {}
    discard = config.discard_per_side
    previous = metric(signal, config)
    history[discard] = previous

    while 2 * (discard + step_symbols) < config.window_symbols:
        candidate = config.model_copy(update={"discard_per_side": discard + step_symbols})
        value = metric(signal, candidate)
        history[candidate.discard_per_side] = value
        logger.debug(f"Discard {candidate.discard_per_side} symbols: metric {value:.4f} dB")
        if abs(value - previous) < tolerance:
            logger.info(f"Discard converged at {discard} symbols per side")
            return discard
        discard, previous = candidate.discard_per_side, value

    logger.warning(f"Discard did not converge below half of a {config.window_symbols}-symbol window")
    raise DiscardConvergenceError(
        f"metric still changing at discard {discard} of a {config.window_symbols}-symbol window",
        history,
    )

"""
Receiver DSP chains
"""

from .rx_chain import (
    ChainOutput,
    calibrate_timing,
    conjugate_symbols,
    matched_filter_downsample,
    run_chain,
    select_channel,
)

__all__ = [
    "ChainOutput",
    "calibrate_timing",
    "conjugate_symbols",
    "matched_filter_downsample",
    "run_chain",
    "select_channel",
]

"""
Performance metrics: data-aided SNR, ζ and channel memory
"""

from .estimators import (
    SnrAccumulator,
    channel_memory_estimate,
    snr_data_aided,
    zeta,
)

__all__ = [
    "SnrAccumulator",
    "channel_memory_estimate",
    "snr_data_aided",
    "zeta",
]

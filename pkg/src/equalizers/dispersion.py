"""
Electronic dispersion compensation
"""

import numpy as np

from ..models.link import Link
from ..models.signals import DualPolSignal


def edc(signal: DualPolSignal, beta2: float, length: float) -> DualPolSignal:
    """
    Remove accumulated chromatic dispersion with an all-pass filter

    Args:
        signal: Received field
        beta2: GVD, s²/m
        length: Length of fiber to undo, m

    Returns:
        Field multiplied per bin by exp(−jβ₂ω²L/2)
    """
    if length == 0.0 or beta2 == 0.0:
        return signal
    omega = signal.angular_frequencies()
    return signal.with_spectra(signal.spectra() * np.exp(-0.5j * beta2 * omega ** 2 * length))


def net_dispersion_length(link: Link) -> float:
    """
    Fiber length whose dispersion remains at the receiver

    Spans before an OPC are undone by the spans after it, so a mid-link
    OPC link leaves none.
    """
    if link.has_opc:
        before = sum(span.length for span, _ in link.spans[:link.opc_after_span])
        after = sum(span.length for span, _ in link.spans[link.opc_after_span:])
        return after - before
    return link.total_length

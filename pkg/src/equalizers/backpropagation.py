"""
Ideal digital back-propagation over the full received field
"""

import logging
import math
from typing import Optional

from ..models.link import Link
from ..models.signals import DualPolSignal
from ..simulation.channel import opc_conjugate, split_step

logger = logging.getLogger(__name__)


def dbp_ideal(
    signal: DualPolSignal,
    link: Link,
    steps_per_span: Optional[int] = 100
) -> DualPolSignal:
    """
    Invert the link by split-step integration with negated α, β₂ and γ

    Spans are undone last to first. Each amplifier gain is removed before
    its span is back-propagated, and an OPC is re-applied where it sat.

    Args:
        signal: Received field (whole multiplex)
        link: Link the field crossed
        steps_per_span: Split-step steps per span (defaults to the link's)

    Returns:
        Estimate of the launched field
    """
    steps = steps_per_span or link.steps_per_span
    for index in range(link.num_spans, 0, -1):
        span, amp = link.spans[index - 1]
        if link.opc_after_span == index:
            signal = opc_conjugate(signal)
        signal = signal.scaled(1.0 / math.sqrt(amp.linear_gain))
        signal = split_step(signal, -span.alpha, -span.beta2, -span.gamma, span.length, steps)
    logger.debug(f"Back-propagated {link.num_spans} spans at {steps} steps/span")
    return signal

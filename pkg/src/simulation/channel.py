"""
Channel Module

Symmetrized split-step Fourier integration of the Manakov equation over
multi-span EDFA links, with ASE injection and ideal mid-link OPC.

Field convention: the linear operator is exp((jβ₂ω²/2 − α/2)z) in the
frequency domain, the nonlinear operator rotates both polarizations by
(8/9)γ(|x|² + |y|²) per metre.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy import fft as sp_fft

from ..models.link import Amplifier, FiberSpan, Link
from ..models.signals import DualPolSignal
from ..utils.validators import ConfigurationError

logger = logging.getLogger(__name__)

MANAKOV_FACTOR = 8.0 / 9.0


def linear_transfer(
    omega: np.ndarray,
    alpha: float,
    beta2: float,
    length: float
) -> np.ndarray:
    """Dispersion and loss over ``length`` as a per-bin multiplier."""
    return np.exp((0.5j * beta2 * omega ** 2 - 0.5 * alpha) * length)


def split_step(
    signal: DualPolSignal,
    alpha: float,
    beta2: float,
    gamma: float,
    length: float,
    steps: int
) -> DualPolSignal:
    """
    Integrate the Manakov equation over one homogeneous fiber stretch

    Parameters are taken raw so back-propagation can pass negated values.

    Args:
        signal: Field at the stretch input
        alpha: Power attenuation, Np/m
        beta2: GVD, s²/m
        gamma: Nonlinear coefficient, 1/(W·m)
        length: Stretch length, m
        steps: Number of uniform steps

    Returns:
        Field at the stretch output

    Raises:
        ConfigurationError: if steps < 1
    """
    if steps < 1:
        raise ConfigurationError(f"steps must be at least 1, got {steps}")
    if length == 0.0:
        return signal

    omega = signal.angular_frequencies()
    spectra = signal.spectra()

    if gamma == 0.0:
        return signal.with_spectra(spectra * linear_transfer(omega, alpha, beta2, length))

    h = length / steps
    half_step = linear_transfer(omega, alpha, beta2, h / 2.0)
    full_step = half_step ** 2
    rotation = MANAKOV_FACTOR * gamma * h

    spectra = spectra * half_step
    for step in range(steps):
        fields = sp_fft.ifft(spectra, axis=-1)
        power = np.abs(fields[0]) ** 2 + np.abs(fields[1]) ** 2
        fields = fields * np.exp(1j * rotation * power)
        spectra = sp_fft.fft(fields, axis=-1)
        spectra = spectra * (half_step if step == steps - 1 else full_step)

    return signal.with_spectra(spectra)


def ssfm_propagate(signal: DualPolSignal, span: FiberSpan, steps: int) -> DualPolSignal:
    """
    Propagate a signal through one fiber span

    Args:
        signal: Launched field
        span: Fiber span
        steps: Split-step count (a single linear step is used when gamma is 0)

    Returns:
        Field at the span output
    """
    return split_step(signal, span.alpha, span.beta2, span.gamma, span.length, steps)


def amplify(
    signal: DualPolSignal,
    amp: Amplifier,
    rng: Optional[np.random.Generator] = None
) -> DualPolSignal:
    """
    Apply lumped gain and, if enabled, white ASE noise

    Args:
        signal: Span output field
        amp: Amplifier model
        rng: Noise generator, required when ASE is enabled

    Returns:
        Amplified field

    Raises:
        ConfigurationError: if ASE is enabled and no generator is supplied
    """
    amplified = signal.scaled(math.sqrt(amp.linear_gain))
    if not amp.ase_enabled:
        return amplified
    if rng is None:
        raise ConfigurationError("ASE injection needs a random generator")

    variance = amp.ase_psd_per_pol * signal.sample_rate  # per polarization, W
    shape = (2, signal.n_samples)
    noise = math.sqrt(variance / 2.0) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return amplified.with_fields(amplified.fields + noise)


def opc_conjugate(signal: DualPolSignal) -> DualPolSignal:
    """Ideal phase conjugation: S_out(ω) = S_in*(−ω)."""
    return DualPolSignal(
        x=np.conj(signal.x),
        y=np.conj(signal.y),
        sample_rate=signal.sample_rate,
        center_offset=-signal.center_offset,
    )


def propagate_link(
    signal: DualPolSignal,
    link: Link,
    rng: Optional[np.random.Generator] = None
) -> DualPolSignal:
    """
    Propagate through every (span, amplifier) stage of a link

    Args:
        signal: Launched field
        link: Link description; OPC is applied after span ``opc_after_span``
        rng: Noise generator for ASE-enabled amplifiers

    Returns:
        Received field
    """
    for index, (span, amp) in enumerate(link.spans, start=1):
        signal = ssfm_propagate(signal, span, link.steps_per_span)
        signal = amplify(signal, amp, rng)
        if link.opc_after_span == index:
            signal = opc_conjugate(signal)
            logger.debug(f"OPC applied after span {index}")
        logger.debug(f"Span {index}/{link.num_spans}: power {signal.power * 1e3:.4f} mW")
    return signal

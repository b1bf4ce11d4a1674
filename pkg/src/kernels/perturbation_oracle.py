"""
Regular-perturbation reference terms.

Direct O(N³) evaluations used to validate the equalizer double sums and
the split-step simulator. Nothing on the processing path imports this
module.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from ..models.equalizer_models import IndexMode
from ..models.kernel_models import KernelParams, PowerProfile
from ..models.signals import DualPolSignal
from ..utils.helpers import centered_indices
from .power_profile import phase_integral, power_at

MANAKOV_FACTOR = 8.0 / 9.0


class PerturbationOrder(str, Enum):
    ZEROTH = "zeroth"
    FIRST = "first"


@dataclass(frozen=True)
class PerturbationTerm:
    """Spectrum (2, N, FFT order) of one perturbation order at distance z"""
    order: PerturbationOrder
    spectrum: np.ndarray
    z: float


def brute_force_double_sum(
    spectra_x: np.ndarray,
    spectra_y: np.ndarray,
    kernel: Callable[[np.ndarray], np.ndarray],
    index_mode: IndexMode = IndexMode.CYCLIC
) -> Tuple[np.ndarray, np.ndarray]:
    """
    (1/N²) Σ_{i,l} K((k−l)(i−l)) [X*_i X_l + Y*_i Y_l] X_{k+i−l}, one k at a time

    Args:
        spectra_x: X spectrum, FFT order
        spectra_y: Y spectrum, FFT order
        kernel: Maps integer products m to kernel values
        index_mode: Wrap k+i−l cyclically or drop out-of-grid terms

    Returns:
        Tuple of (sum for X, sum for Y), FFT order
    """
    n = spectra_x.shape[-1]
    c = centered_indices(n)
    ci = c[:, None]
    cl = c[None, :]
    pairs = np.conj(spectra_x)[:, None] * spectra_x[None, :] + np.conj(spectra_y)[:, None] * spectra_y[None, :]

    out_x = np.zeros(n, dtype=np.complex128)
    out_y = np.zeros(n, dtype=np.complex128)
    half = n // 2
    for position in range(n):
        k = c[position]
        weights = kernel((k - cl) * (ci - cl)) * pairs
        target = k + ci - cl
        if index_mode == IndexMode.CLAMPED:
            weights = np.where((target >= -half) & (target < half), weights, 0.0)
        target = target % n
        out_x[position] = np.sum(weights * spectra_x[target])
        out_y[position] = np.sum(weights * spectra_y[target])
    return out_x / n ** 2, out_y / n ** 2


def _edfa_profile(params: KernelParams, z: float) -> PowerProfile:
    spans = max(1, math.ceil(z / params.span_length - 1e-12))
    return PowerProfile.edfa(params.alpha, params.span_length, spans)


def zeroth_order_term(
    signal: DualPolSignal,
    params: KernelParams,
    z: Optional[float] = None
) -> PerturbationTerm:
    """
    Linearly propagated input at distance z (before any amplifier at z)

    Args:
        signal: Launched field
        params: Span parameters; z defaults to num_spans·span_length
        z: Evaluation distance, m

    Returns:
        PerturbationTerm of order ZEROTH
    """
    z = params.num_spans * params.span_length if z is None else z
    omega = signal.angular_frequencies()
    level = power_at(_edfa_profile(params, z), z, "left") if z > 0 else 1.0
    rotation = math.sqrt(level) * np.exp(0.5j * params.beta2 * omega ** 2 * z)
    return PerturbationTerm(PerturbationOrder.ZEROTH, signal.spectra() * rotation, z)


def first_order_nli_oracle(
    signal: DualPolSignal,
    params: KernelParams,
    gamma: float,
    z: Optional[float] = None,
    index_mode: IndexMode = IndexMode.CYCLIC
) -> PerturbationTerm:
    """
    First-order NLI of an EDFA link by direct Riemann sum of the double integral

    A₃(ω_k, z) = j(8/9)γ √P(z⁻) e^{jβ₂ω_k²z/2} (1/N²) Σ_{i,l} K_{kil} ∫₀^z P(z′)e^{jβ₂ΔΩz′}dz′

    Args:
        signal: Launched field
        params: Span parameters; z defaults to num_spans·span_length
        gamma: Nonlinear coefficient, 1/(W·m)
        z: Evaluation distance, m
        index_mode: Index treatment of k+i−l

    Returns:
        PerturbationTerm of order FIRST
    """
    z = params.num_spans * params.span_length if z is None else z
    n = signal.n_samples
    if z <= 0.0 or gamma == 0.0:
        return PerturbationTerm(PerturbationOrder.FIRST, np.zeros((2, n), dtype=np.complex128), z)

    profile = _edfa_profile(params, z)
    d_omega_unit = (2.0 * math.pi * signal.sample_rate / n) ** 2

    def kernel(products: np.ndarray) -> np.ndarray:
        return phase_integral(profile, products * d_omega_unit, params.beta2, 0.0, z)

    spectra = signal.spectra()
    sum_x, sum_y = brute_force_double_sum(spectra[0], spectra[1], kernel, index_mode)

    omega = signal.angular_frequencies()
    level = power_at(profile, z, "left")
    rotation = math.sqrt(level) * np.exp(0.5j * params.beta2 * omega ** 2 * z)
    term = 1j * MANAKOV_FACTOR * gamma * rotation * np.stack([sum_x, sum_y])
    return PerturbationTerm(PerturbationOrder.FIRST, term, z)

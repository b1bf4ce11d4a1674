"""
Analytical third-order Volterra channel kernels.

All kernels are functions of ΔΩ = (ω − ω₂)(ω₁ − ω₂) only and accept
scalars or numpy arrays. With b = β₂ΔΩ:

    F  = ∫₀^L e^{(jb − α)z} dz                 four-wave-mixing efficiency
    Ξ  = Σ_{n=0}^{N−1} e^{jbnL}                 phased array
    G  = e^{−jbL}F − F*                         OPC kernel of one span pair
    F′ = ∫₀^L e^{(α − jb)z} dz                  backward FWM efficiency
    G′ = F′* − e^{jbL}F′                        backward OPC kernel
"""

from enum import Enum
from typing import Union

import numpy as np
from scipy import special

from ..models.kernel_models import KernelMode, KernelParams, PowerProfile
from ..utils.helpers import ArrayOrFloat
from ..utils.validators import ConfigurationError
from .power_profile import exponential_integral, lambda_sum, psi_sum


class BackwardKernel(str, Enum):
    """Selector for backward_kernels"""
    F_PRIME = "F'"
    G_PRIME = "G'"


def _phase_rate(d_omega: ArrayOrFloat, params: KernelParams) -> np.ndarray:
    return params.beta2 * np.asarray(d_omega, dtype=np.float64)


def _finish(value: np.ndarray) -> Union[complex, np.ndarray]:
    return complex(value) if np.ndim(value) == 0 else value


def fwm_efficiency(d_omega: ArrayOrFloat, params: KernelParams) -> Union[complex, np.ndarray]:
    """
    Single-span four-wave-mixing efficiency F

    Args:
        d_omega: ΔΩ in rad²/s²
        params: Span parameters

    Returns:
        (1 − e^{−αL}e^{jβ₂ΔΩL}) / (α − jβ₂ΔΩ), finite at every pole
    """
    b = _phase_rate(d_omega, params)
    return _finish(exponential_integral(1j * b - params.alpha, params.span_length))


def phased_array(
    num_spans: int,
    d_omega: ArrayOrFloat,
    params: KernelParams
) -> Union[complex, np.ndarray]:
    """
    Phased-array factor Ξ over num_spans identical spans

    Args:
        num_spans: Number of coherently adding spans (≥ 1)
        d_omega: ΔΩ in rad²/s²
        params: Span parameters (span_length is used)

    Returns:
        Σ_{n=0}^{num_spans−1} e^{jβ₂ΔΩnL}

    Raises:
        ConfigurationError: if num_spans < 1
    """
    if num_spans < 1:
        raise ConfigurationError(f"num_spans must be at least 1, got {num_spans}")
    theta = _phase_rate(d_omega, params) * params.span_length
    flat = np.atleast_1d(theta)
    # Dirichlet kernel: sin(Nθ/2) / (N sin(θ/2)), exact at the poles θ = 2πk
    value = num_spans * np.exp(0.5j * (num_spans - 1) * flat) * special.diric(flat, num_spans)
    return _finish(np.asarray(value, dtype=np.complex128).reshape(np.shape(theta)))


def opc_kernel_g(d_omega: ArrayOrFloat, params: KernelParams) -> Union[complex, np.ndarray]:
    """
    Residual kernel G of a mid-link OPC span pair

    G = e^{−jβ₂ΔΩL}F − F*, algebraically equal to the closed form
    [(e^{−jbL}e^{−αL} − 1)(α − jb) + (e^{−jbL} − e^{−αL})(α + jb)] / (α² + b²).
    G(0) is exactly zero.
    """
    b = _phase_rate(d_omega, params)
    f = exponential_integral(1j * b - params.alpha, params.span_length)
    return _finish(np.exp(-1j * b * params.span_length) * f - np.conj(f))


def backward_kernels(
    d_omega: ArrayOrFloat,
    params: KernelParams,
    which: Union[BackwardKernel, str]
) -> Union[complex, np.ndarray]:
    """
    Inverse kernels for backward propagation

    Args:
        d_omega: ΔΩ in rad²/s²
        params: Span parameters
        which: ``"F'"`` or ``"G'"``

    Returns:
        F′ = (1 − e^{αL}e^{−jbL}) / (jb − α), or G′ = F′* − e^{jbL}F′

    Raises:
        ConfigurationError: for an unknown selector
    """
    try:
        which = BackwardKernel(which)
    except ValueError as e:
        raise ConfigurationError(f"unknown backward kernel {which!r}") from e

    b = _phase_rate(d_omega, params)
    f_prime = exponential_integral(params.alpha - 1j * b, params.span_length)
    if which == BackwardKernel.F_PRIME:
        return _finish(f_prime)
    return _finish(np.conj(f_prime) - np.exp(1j * b * params.span_length) * f_prime)


def residual_kernel_gamma(
    profile: PowerProfile,
    num_spans: int,
    d_omega: ArrayOrFloat,
    beta2: float
) -> Union[complex, np.ndarray]:
    """
    Residual OPC kernel Γ = Ψ − Λ* for an arbitrary power profile

    Args:
        profile: Power profile of the whole link
        num_spans: Span count; must be even and match the profile
        d_omega: ΔΩ in rad²/s²
        beta2: GVD, s²/m

    Returns:
        Γ evaluated at every ΔΩ

    Raises:
        ConfigurationError: if the span count is odd or disagrees with the profile
    """
    if num_spans != profile.num_spans:
        raise ConfigurationError(
            f"profile covers {profile.num_spans} spans but num_spans={num_spans}"
        )
    if num_spans % 2 != 0:
        raise ConfigurationError(f"mid-link OPC needs an even span count, got {num_spans}")
    half = num_spans // 2
    psi = psi_sum(profile, half, d_omega, beta2)
    lam = lambda_sum(profile, half, d_omega, beta2)
    return _finish(np.asarray(psi - np.conj(lam)))


def kernel_value(
    mode: KernelMode,
    d_omega: ArrayOrFloat,
    params: KernelParams
) -> np.ndarray:
    """
    Channel kernel of a tensor mode at ΔΩ

    Backward modes carry the span-output power reference e^{−αL}: the
    received field is at launch level, one amplifier after the span end.

    Args:
        mode: Tensor mode
        d_omega: ΔΩ in rad²/s²
        params: Link parameters

    Returns:
        Complex array shaped like d_omega

    Raises:
        ConfigurationError: if a VAO mode is requested on an odd span count
    """
    d_omega = np.asarray(d_omega, dtype=np.float64)
    n_spans = params.num_spans
    span_loss = np.exp(-params.alpha * params.span_length)

    if mode in (KernelMode.VAO_FORWARD, KernelMode.VAO_BACKWARD) and n_spans % 2 != 0:
        raise ConfigurationError(f"VAO kernels need an even span count, got {n_spans}")

    if mode == KernelMode.VSFE_FORWARD:
        value = fwm_efficiency(d_omega, params) * phased_array(n_spans, d_omega, params)
    elif mode == KernelMode.VSFE_BACKWARD:
        value = (
            span_loss
            * backward_kernels(d_omega, params, BackwardKernel.F_PRIME)
            * np.conj(phased_array(n_spans, d_omega, params))
        )
    elif mode == KernelMode.VAO_FORWARD:
        value = np.conj(phased_array(n_spans // 2, d_omega, params)) * opc_kernel_g(d_omega, params)
    elif mode == KernelMode.VAO_BACKWARD:
        value = (
            span_loss
            * backward_kernels(d_omega, params, BackwardKernel.G_PRIME)
            * phased_array(n_spans // 2, d_omega, params)
        )
    else:
        value = span_loss * backward_kernels(d_omega, params, BackwardKernel.F_PRIME)
    return np.asarray(value, dtype=np.complex128)

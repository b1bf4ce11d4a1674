"""
Volterra Equalizer Module

Third-order Volterra corrections in the frequency domain: single-step
VSFE, the recursive per-span VSFE and the VAO equalizer behind a mid-link
OPC. The double sum over (i, l) is evaluated by grouping terms with equal
q = i − l, which turns the inner sum over l into a linear convolution.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import fft as sp_fft
from scipy import signal as sp_signal

from config.settings import get_settings

from ..kernels.kernel_tensor import KernelTensor, cached_kernel_tensor
from ..models.equalizer_models import EqualizerConfig, IndexMode, NonlinearCorrection
from ..models.kernel_models import FrequencyGrid, KernelMode, KernelParams
from ..models.link import Link
from ..models.signals import DualPolSignal
from ..simulation.channel import opc_conjugate
from ..utils.validators import ConfigurationError
from .dispersion import edc
from .windowing import windowed_process

logger = logging.getLogger(__name__)

MANAKOV_FACTOR = 8.0 / 9.0


def third_order_term(
    spectra_x: np.ndarray,
    spectra_y: np.ndarray,
    tensor: KernelTensor,
    index_mode: IndexMode = IndexMode.CYCLIC,
    chunk_size: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Evaluate (1/N²) Σ_{i,l} T((k−l)(i−l)) [X*_i X_l + Y*_i Y_l] X_{k+i−l}

    With q = i − l the sum becomes Σ_q X_{k+q} C_q(k), where
    C_q(k) = Σ_l Z_q(l) T((k−l)q) and Z_q(l) = X_l X*_{l+q} + Y_l Y*_{l+q}.

    Args:
        spectra_x: X spectrum, FFT order
        spectra_y: Y spectrum, FFT order
        tensor: Kernel tensor on the same grid
        index_mode: Wrap k+i−l cyclically or drop out-of-grid terms
        chunk_size: Offsets q processed per batch

    Returns:
        Tuple of (sum for X, sum for Y), FFT order

    Raises:
        ConfigurationError: if the tensor grid does not match the spectra
    """
    n = spectra_x.shape[-1]
    if spectra_y.shape[-1] != n or not tensor.matches(n):
        raise ConfigurationError(
            f"tensor grid of {tensor.n_points} bins does not match a {n}-bin window"
        )
    chunk_size = chunk_size or get_settings().kernel_chunk_size

    xc = sp_fft.fftshift(spectra_x)
    yc = sp_fft.fftshift(spectra_y)
    positions = np.arange(n)
    out_x = np.zeros(n, dtype=np.complex128)
    out_y = np.zeros(n, dtype=np.complex128)

    for start in range(-(n - 1), n, chunk_size):
        qs = np.arange(start, min(start + chunk_size, n))
        shifted = positions[None, :] + qs[:, None]
        inside = (shifted >= 0) & (shifted < n)
        clipped = np.clip(shifted, 0, n - 1)

        pairs = (xc[None, :] * np.conj(xc[clipped]) + yc[None, :] * np.conj(yc[clipped])) * inside
        full = sp_signal.fftconvolve(pairs, tensor.lines(qs), mode="full", axes=-1)
        coupling = full[:, n - 1:2 * n - 1]

        if index_mode == IndexMode.CYCLIC:
            target = shifted % n
            out_x += np.sum(xc[target] * coupling, axis=0)
            out_y += np.sum(yc[target] * coupling, axis=0)
        else:
            out_x += np.sum(xc[clipped] * coupling * inside, axis=0)
            out_y += np.sum(yc[clipped] * coupling * inside, axis=0)

    scale = 1.0 / n ** 2
    return sp_fft.ifftshift(out_x) * scale, sp_fft.ifftshift(out_y) * scale


def _correction(
    spectra_x: np.ndarray,
    spectra_y: np.ndarray,
    tensor: KernelTensor,
    gamma: float,
    index_mode: IndexMode,
    chunk_size: Optional[int]
) -> NonlinearCorrection:
    if gamma == 0.0:
        zeros = np.zeros_like(spectra_x, dtype=np.complex128)
        return NonlinearCorrection(ax=zeros, ay=zeros.copy())
    sum_x, sum_y = third_order_term(spectra_x, spectra_y, tensor, index_mode, chunk_size)
    prefactor = -1j * MANAKOV_FACTOR * gamma
    return NonlinearCorrection(ax=prefactor * sum_x, ay=prefactor * sum_y)


def vsfe_correction(
    spectra_x: np.ndarray,
    spectra_y: np.ndarray,
    tensor: KernelTensor,
    gamma: float,
    index_mode: IndexMode = IndexMode.CYCLIC,
    chunk_size: Optional[int] = None
) -> NonlinearCorrection:
    """
    Backward third-order correction of a non-OPC link

    Args:
        spectra_x: Received X spectrum of the window, FFT order
        spectra_y: Received Y spectrum of the window, FFT order
        tensor: VSFE-backward or per-span tensor on the window grid
        gamma: Nonlinear coefficient, 1/(W·m)
        index_mode: Index treatment of k+i−l
        chunk_size: Offsets per convolution batch

    Returns:
        NonlinearCorrection a = −j(8/9)γ·(double sum)

    Raises:
        ConfigurationError: for a tensor of the wrong mode or grid
    """
    if tensor.mode not in (KernelMode.VSFE_BACKWARD, KernelMode.PER_SPAN):
        raise ConfigurationError(f"VSFE correction needs a backward tensor, got {tensor.mode.value}")
    return _correction(spectra_x, spectra_y, tensor, gamma, index_mode, chunk_size)


def vao_correction(
    spectra_x: np.ndarray,
    spectra_y: np.ndarray,
    tensor: KernelTensor,
    gamma: float,
    index_mode: IndexMode = IndexMode.CYCLIC,
    chunk_size: Optional[int] = None
) -> NonlinearCorrection:
    """
    Backward third-order correction behind a mid-link OPC

    The VAO-backward tensor e^{−αL}G′Ξ(N_s/2) acts on the conjugated
    signal kernel and the sum is conjugated back; that equals the direct
    sum with the conjugate tensor Ξ*(N_s/2)G.

    Args:
        spectra_x: Received X spectrum of the window (before conjugation)
        spectra_y: Received Y spectrum of the window (before conjugation)
        tensor: VAO-backward tensor on the window grid
        gamma: Nonlinear coefficient, 1/(W·m)
        index_mode: Index treatment of k+i−l
        chunk_size: Offsets per convolution batch

    Returns:
        NonlinearCorrection to add before the conjugation

    Raises:
        ConfigurationError: for a tensor of the wrong mode or grid
    """
    if tensor.mode != KernelMode.VAO_BACKWARD:
        raise ConfigurationError(f"VAO correction needs a VAO-backward tensor, got {tensor.mode.value}")
    return _correction(spectra_x, spectra_y, tensor.conjugate(), gamma, index_mode, chunk_size)


class VsfeWindowTransform:
    """Per-window single-step VSFE: (X + a)·exp(−jβ₂ω²L/2)."""

    def __init__(
        self,
        tensor: KernelTensor,
        gamma: float,
        beta2: float,
        length: float,
        index_mode: IndexMode = IndexMode.CYCLIC
    ):
        self.tensor = tensor
        self.gamma = gamma
        self.beta2 = beta2
        self.length = length
        self.index_mode = index_mode

    def __call__(self, window: DualPolSignal) -> DualPolSignal:
        spectra = window.spectra()
        correction = vsfe_correction(spectra[0], spectra[1], self.tensor, self.gamma, self.index_mode)
        corrected = window.with_spectra(spectra + correction.stacked)
        return edc(corrected, self.beta2, self.length)


class VaoWindowTransform:
    """Per-window VAO: (X + a), back to time domain, conjugate."""

    def __init__(self, tensor: KernelTensor, gamma: float, index_mode: IndexMode = IndexMode.CYCLIC):
        self.tensor = tensor
        self.gamma = gamma
        self.index_mode = index_mode

    def __call__(self, window: DualPolSignal) -> DualPolSignal:
        spectra = window.spectra()
        correction = vao_correction(spectra[0], spectra[1], self.tensor, self.gamma, self.index_mode)
        return opc_conjugate(window.with_spectra(spectra + correction.stacked))


class RecursiveVsfeWindowTransform:
    """
    Per-window recursive VSFE: one single-span correction and one span of
    dispersion removal per iteration, with energy renormalization after
    every iteration but the last.
    """

    def __init__(
        self,
        tensor: KernelTensor,
        gamma: float,
        beta2: float,
        span_length: float,
        num_spans: int,
        index_mode: IndexMode = IndexMode.CYCLIC
    ):
        self.tensor = tensor
        self.gamma = gamma
        self.beta2 = beta2
        self.span_length = span_length
        self.num_spans = num_spans
        self.index_mode = index_mode

    def __call__(self, window: DualPolSignal) -> DualPolSignal:
        for iteration in range(self.num_spans):
            energy = window.energy
            spectra = window.spectra()
            correction = vsfe_correction(spectra[0], spectra[1], self.tensor, self.gamma, self.index_mode)
            window = edc(window.with_spectra(spectra + correction.stacked), self.beta2, self.span_length)
            if iteration < self.num_spans - 1 and window.energy > 0.0:
                window = window.scaled(np.sqrt(energy / window.energy))
        return window


def _window_grid(config: EqualizerConfig, sample_rate: float) -> FrequencyGrid:
    return FrequencyGrid.from_window(config.window_samples, sample_rate)


def vsfe_single(signal: DualPolSignal, link: Link, config: EqualizerConfig) -> DualPolSignal:
    """
    Single-step VSFE over the whole link, block-processed

    Args:
        signal: Received field at the simulation rate
        link: Non-OPC link the field crossed
        config: Window geometry

    Returns:
        Equalized field
    """
    span = link.reference_span()
    params = KernelParams.from_link(link)
    tensor = cached_kernel_tensor(_window_grid(config, signal.sample_rate), params, KernelMode.VSFE_BACKWARD)
    transform = VsfeWindowTransform(tensor, span.gamma, span.beta2, link.total_length, config.index_mode)
    return windowed_process(signal, transform, config)


def vsfe_recursive(signal: DualPolSignal, link: Link, config: EqualizerConfig) -> DualPolSignal:
    """
    Recursive per-span VSFE, block-processed

    Args:
        signal: Received field at the simulation rate
        link: Non-OPC link the field crossed
        config: Window geometry

    Returns:
        Equalized field
    """
    span = link.reference_span()
    params = KernelParams.from_span(span, 1)
    tensor = cached_kernel_tensor(_window_grid(config, signal.sample_rate), params, KernelMode.PER_SPAN)
    transform = RecursiveVsfeWindowTransform(
        tensor, span.gamma, span.beta2, span.length, link.num_spans, config.index_mode
    )
    return windowed_process(signal, transform, config)


def vao_equalize(signal: DualPolSignal, link: Link, config: EqualizerConfig) -> DualPolSignal:
    """
    VAO equalizer behind a mid-link OPC, block-processed; output is conjugated

    Args:
        signal: Received field of the OPC link
        link: Link with mid-link OPC
        config: Window geometry

    Returns:
        Equalized, conjugated field

    Raises:
        ConfigurationError: if the link has no mid-link OPC
    """
    if not link.has_opc:
        raise ConfigurationError("VAO equalization needs a link with mid-link OPC")
    span = link.reference_span()
    params = KernelParams.from_link(link)
    tensor = cached_kernel_tensor(_window_grid(config, signal.sample_rate), params, KernelMode.VAO_BACKWARD)
    transform = VaoWindowTransform(tensor, span.gamma, config.index_mode)
    return windowed_process(signal, transform, config)

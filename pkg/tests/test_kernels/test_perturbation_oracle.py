"""
Tests of the regular-perturbation reference terms against the split-step simulator
"""

import math

import numpy as np
import pytest

from src.kernels.perturbation_oracle import (
    PerturbationOrder,
    brute_force_double_sum,
    first_order_nli_oracle,
    zeroth_order_term,
)
from src.kernels.volterra_kernels import fwm_efficiency, phased_array
from src.models.equalizer_models import IndexMode
from src.models.kernel_models import KernelParams
from src.models.link import FiberSpan
from src.simulation.channel import split_step, ssfm_propagate
from src.simulation.waveform import generate_symbols, rrc_shape, set_power


class TestPerturbationOracle:
    """Zeroth- and first-order terms"""

    @pytest.fixture
    def span(self):
        """Reference SSMF span"""
        return FiberSpan.from_datasheet_units()

    @pytest.fixture
    def signal(self):
        """Single 32 GBd channel, 64 symbols at 4 samples/symbol, −20 dBm"""
        frame = generate_symbols(64, 1, seed=11)
        return set_power(rrc_shape(frame, rolloff=0.1, sps=4), -20.0, 1)

    def test_zeroth_order_is_linear_propagation(self, span, signal):
        """Zeroth order equals the dispersive lossy span output"""
        params = KernelParams.from_span(span, 1)
        term = zeroth_order_term(signal, params)
        linear = split_step(signal, span.alpha, span.beta2, 0.0, span.length, 1)
        assert term.order == PerturbationOrder.ZEROTH
        np.testing.assert_allclose(term.spectrum, linear.spectra(), rtol=1e-10, atol=1e-14)

    def test_zero_gamma_gives_zero(self, span, signal):
        """No nonlinearity, no first-order term"""
        term = first_order_nli_oracle(signal, KernelParams.from_span(span, 1), gamma=0.0)
        assert not np.any(term.spectrum)

    def test_matches_ssfm_extraction(self, span, signal):
        """First-order term matches SSFM output minus linear output"""
        params = KernelParams.from_span(span, 1)
        nonlinear = ssfm_propagate(signal, span, steps=200).spectra()
        linear = split_step(signal, span.alpha, span.beta2, 0.0, span.length, 1).spectra()
        oracle = first_order_nli_oracle(signal, params, span.gamma).spectrum
        error = np.linalg.norm((nonlinear - linear) - oracle) / np.linalg.norm(oracle)
        assert error < 0.01

    def test_brute_force_clamped_drops_outside_terms(self):
        """Clamped indexing never exceeds the cyclic sum when every weight is one"""
        n = 8
        spectra = np.ones(n, dtype=np.complex128)
        zeros = np.zeros(n, dtype=np.complex128)

        def unit(products):
            return np.ones(np.shape(products), dtype=np.complex128)

        cyclic, _ = brute_force_double_sum(spectra, zeros, unit, IndexMode.CYCLIC)
        clamped, _ = brute_force_double_sum(spectra, zeros, unit, IndexMode.CLAMPED)
        np.testing.assert_allclose(cyclic, np.ones(n))
        assert np.all(clamped.real <= cyclic.real + 1e-12)
        assert clamped.real.min() < 1.0

    def test_matches_closed_form_span_sum(self, span):
        """On an 8-point grid the oracle equals a term-by-term sum with F·Ξ as kernel"""
        num_spans = 2
        params = KernelParams.from_span(span, num_spans)
        signal = rrc_shape(generate_symbols(4, 1, seed=5), rolloff=0.1, sps=2)
        n = signal.n_samples
        spectra = signal.spectra()
        index = np.fft.fftfreq(n, d=1.0 / n).astype(int)
        d_omega = 2.0 * math.pi * signal.sample_rate / n

        k, i, l = np.meshgrid(index, index, index, indexing="ij")
        products = (k - l) * (i - l) * d_omega ** 2
        weights = fwm_efficiency(products, params) * phased_array(num_spans, products, params)

        direct = np.zeros((2, n), dtype=np.complex128)
        for kp in range(n):
            for ip in range(n):
                for lp in range(n):
                    pair = np.vdot(spectra[:, ip], spectra[:, lp])
                    target = (index[kp] + index[ip] - index[lp]) % n
                    direct[:, kp] += weights[kp, ip, lp] * pair * spectra[:, target]

        z = num_spans * span.length
        omega = 2.0 * math.pi * np.fft.fftfreq(n, d=1.0 / signal.sample_rate)
        rotation = math.exp(-0.5 * span.alpha * span.length) * np.exp(0.5j * span.beta2 * omega ** 2 * z)
        direct *= 1j * (8.0 / 9.0) * span.gamma * rotation / n ** 2

        oracle = first_order_nli_oracle(signal, params, span.gamma).spectrum
        np.testing.assert_allclose(oracle, direct, rtol=0.0, atol=1e-10 * np.max(np.abs(direct)))

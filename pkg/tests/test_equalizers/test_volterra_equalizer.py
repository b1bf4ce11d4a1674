"""
Unit tests for the VSFE and VAO equalizers
"""

import numpy as np
import pytest

from src.equalizers.dispersion import edc
from src.equalizers.volterra_equalizer import (
    VaoWindowTransform,
    VsfeWindowTransform,
    third_order_term,
    vao_correction,
    vao_equalize,
    vsfe_correction,
    vsfe_recursive,
    vsfe_single,
)
from src.kernels.kernel_tensor import build_kernel_tensor
from src.kernels.perturbation_oracle import brute_force_double_sum
from src.models.equalizer_models import EqualizerConfig, IndexMode
from src.models.kernel_models import FrequencyGrid, KernelMode, KernelParams
from src.models.link import FiberSpan, Link
from src.simulation.channel import opc_conjugate, propagate_link
from src.simulation.waveform import generate_symbols, rrc_shape, set_power
from src.utils.validators import ConfigurationError


class TestThirdOrderTerm:
    """Fast double sum against the direct loop"""

    @pytest.fixture
    def tensor(self):
        """8-bin VSFE-backward tensor of a ten-span link"""
        params = KernelParams.from_span(FiberSpan.from_datasheet_units(), 10)
        return build_kernel_tensor(FrequencyGrid.from_window(8, 192e9), params, KernelMode.VSFE_BACKWARD)

    @pytest.fixture
    def spectra(self):
        """Random complex X and Y spectra"""
        rng = np.random.default_rng(5)
        return tuple(rng.standard_normal(8) + 1j * rng.standard_normal(8) for _ in range(2))

    @pytest.mark.parametrize("index_mode", [IndexMode.CYCLIC, IndexMode.CLAMPED])
    def test_matches_brute_force(self, tensor, spectra, index_mode):
        """Convolution grouping equals the direct double sum"""
        fast = third_order_term(*spectra, tensor, index_mode, chunk_size=3)
        slow = brute_force_double_sum(*spectra, tensor.at_products, index_mode)
        for got, expected in zip(fast, slow):
            np.testing.assert_allclose(got, expected, rtol=0.0, atol=1e-12 * np.max(np.abs(expected)))

    def test_cubic_scaling(self, tensor, spectra):
        """Scaling the input by c scales the sum by c³"""
        base, _ = third_order_term(*spectra, tensor)
        scaled, _ = third_order_term(spectra[0] * 2.0, spectra[1] * 2.0, tensor)
        np.testing.assert_allclose(scaled, 8.0 * base, rtol=1e-10)

    def test_polarization_swap(self, tensor, spectra):
        """Exchanging X and Y exchanges the outputs"""
        out_x, out_y = third_order_term(spectra[0], spectra[1], tensor)
        swap_x, swap_y = third_order_term(spectra[1], spectra[0], tensor)
        np.testing.assert_allclose(swap_x, out_y, rtol=1e-10)
        np.testing.assert_allclose(swap_y, out_x, rtol=1e-10)

    def test_grid_mismatch(self, tensor):
        """Spectra must match the tensor grid"""
        with pytest.raises(ConfigurationError):
            third_order_term(np.ones(16), np.ones(16), tensor)


class TestCorrections:
    """Mode checks and degenerate cases"""

    @pytest.fixture
    def params(self):
        """Four 100 km spans"""
        return KernelParams.from_span(FiberSpan.from_datasheet_units(), 4)

    @pytest.fixture
    def grid(self):
        """16-bin window grid"""
        return FrequencyGrid.from_window(16, 192e9)

    def test_zero_gamma(self, params, grid):
        """γ = 0 gives an all-zero correction"""
        tensor = build_kernel_tensor(grid, params, KernelMode.VSFE_BACKWARD)
        correction = vsfe_correction(np.ones(16), np.ones(16), tensor, gamma=0.0)
        assert correction.energy == 0.0

    def test_vsfe_rejects_opc_tensor(self, params, grid):
        """VSFE needs a backward non-OPC tensor"""
        tensor = build_kernel_tensor(grid, params, KernelMode.VAO_BACKWARD)
        with pytest.raises(ConfigurationError):
            vsfe_correction(np.ones(16), np.ones(16), tensor, gamma=1e-3)

    def test_vao_rejects_vsfe_tensor(self, params, grid):
        """VAO needs the VAO-backward tensor"""
        tensor = build_kernel_tensor(grid, params, KernelMode.VSFE_BACKWARD)
        with pytest.raises(ConfigurationError):
            vao_correction(np.ones(16), np.ones(16), tensor, gamma=1e-3)

    def test_vao_transform_without_nonlinearity_conjugates(self, params, grid):
        """With γ = 0 the VAO window transform is a plain conjugation"""
        signal = rrc_shape(generate_symbols(8, 1, seed=2), rolloff=0.1, sps=2)
        tensor = build_kernel_tensor(grid, params, KernelMode.VAO_BACKWARD)
        out = VaoWindowTransform(tensor, gamma=0.0)(signal)
        np.testing.assert_allclose(out.fields, opc_conjugate(signal).fields, atol=1e-12)

    def test_vsfe_transform_without_nonlinearity_is_edc(self, params, grid):
        """With γ = 0 the VSFE window transform is EDC"""
        signal = rrc_shape(generate_symbols(8, 1, seed=2), rolloff=0.1, sps=2)
        tensor = build_kernel_tensor(grid, params, KernelMode.VSFE_BACKWARD)
        out = VsfeWindowTransform(tensor, 0.0, params.beta2, 4e5)(signal)
        np.testing.assert_allclose(out.fields, edc(signal, params.beta2, 4e5).fields, atol=1e-12)

    @pytest.mark.parametrize("mode, correct", [
        (KernelMode.VSFE_BACKWARD, vsfe_correction),
        (KernelMode.VAO_BACKWARD, vao_correction),
    ])
    def test_gamma_power_invariance(self, params, grid, mode, correct):
        """Doubling γ at half the power leaves the relative correction unchanged"""
        tensor = build_kernel_tensor(grid, params, mode)
        rng = np.random.default_rng(4)
        x, y = (rng.standard_normal(16) + 1j * rng.standard_normal(16) for _ in range(2))
        base = correct(x, y, tensor, gamma=1.2e-3).stacked
        halved = correct(x / np.sqrt(2.0), y / np.sqrt(2.0), tensor, gamma=2.4e-3).stacked
        tolerance = 1e-12 * np.max(np.abs(base))
        np.testing.assert_allclose(halved * np.sqrt(2.0), base, rtol=1e-6, atol=tolerance)
        doubled = correct(x, y, tensor, gamma=2.4e-3).stacked
        np.testing.assert_allclose(doubled, 2.0 * base, rtol=1e-10, atol=tolerance)


class TestLinkEqualization:
    """Equalizers remove most of the first-order NLI of short links"""

    @pytest.fixture
    def span(self):
        """Reference SSMF span"""
        return FiberSpan.from_datasheet_units()

    @pytest.fixture
    def tx(self):
        """One 32 GBd channel, 64 symbols at 4 samples/symbol, −3 dBm"""
        frame = generate_symbols(64, 1, seed=9)
        return set_power(rrc_shape(frame, rolloff=0.1, sps=4), -3.0, 1)

    @pytest.fixture
    def config(self):
        """One cyclic window over the whole frame"""
        return EqualizerConfig(window_symbols=64, samples_per_symbol=4, discard_per_side=0)

    @staticmethod
    def _error(signal, reference):
        return float(np.linalg.norm(signal.fields - reference.fields))

    def test_vsfe_single_beats_edc(self, span, tx, config):
        """Single-step VSFE leaves a fraction of the EDC error"""
        link = Link.uniform(2, span)
        rx = propagate_link(tx, link)
        edc_error = self._error(edc(rx, span.beta2, link.total_length), tx)
        vsfe_error = self._error(vsfe_single(rx, link, config), tx)
        assert vsfe_error < 0.2 * edc_error

    def test_vsfe_recursive_beats_edc(self, span, tx, config):
        """Recursive VSFE leaves a fraction of the EDC error"""
        link = Link.uniform(2, span)
        rx = propagate_link(tx, link)
        edc_error = self._error(edc(rx, span.beta2, link.total_length), tx)
        recursive_error = self._error(vsfe_recursive(rx, link, config), tx)
        assert recursive_error < 0.3 * edc_error

    def test_recursive_one_span_equals_single(self, span, tx, config):
        """On a single span the recursive VSFE is the single-step VSFE"""
        link = Link.uniform(1, span)
        rx = propagate_link(tx, link)
        single = vsfe_single(rx, link, config).fields
        recursive = vsfe_recursive(rx, link, config).fields
        np.testing.assert_allclose(recursive, single, rtol=0.0, atol=1e-10 * np.max(np.abs(single)))

    def test_vao_beats_plain_opc(self, span, tx, config):
        """VAO removes most of the OPC residual"""
        link = Link.uniform(2, span, opc=True)
        rx = propagate_link(tx, link)
        opc_error = self._error(opc_conjugate(rx), tx)
        vao_error = self._error(vao_equalize(rx, link, config), tx)
        assert vao_error < 0.3 * opc_error

    def test_vao_needs_opc_link(self, span, tx, config):
        """VAO on a link without OPC is a configuration error"""
        with pytest.raises(ConfigurationError):
            vao_equalize(tx, Link.uniform(2, span), config)


@pytest.mark.slow
class TestPerturbationOrder:
    """Low-power growth of the NLI before and after compensation"""

    POWERS_DBM = np.array([-15.0, -12.0, -9.0])

    @pytest.fixture
    def span(self):
        """Reference SSMF span"""
        return FiberSpan.from_datasheet_units()

    @pytest.fixture
    def config(self):
        """One cyclic window over the whole frame"""
        return EqualizerConfig(window_symbols=64, samples_per_symbol=4, discard_per_side=0)

    @classmethod
    def _slope(cls, error_power):
        """dB of error power per dB of launch power"""
        return float(np.polyfit(cls.POWERS_DBM, 10.0 * np.log10(error_power), 1)[0])

    def _error_powers(self, span, config, opc):
        link = Link.uniform(2, span, opc=opc, steps_per_span=4000)
        frame = generate_symbols(64, 1, seed=9)
        plain, residual = [], []
        for power in self.POWERS_DBM:
            tx = set_power(rrc_shape(frame, rolloff=0.1, sps=4), power, 1)
            rx = propagate_link(tx, link)
            if opc:
                uncompensated = opc_conjugate(rx)
                compensated = vao_equalize(rx, link, config)
            else:
                uncompensated = edc(rx, span.beta2, link.total_length)
                compensated = vsfe_single(rx, link, config)
            plain.append(np.sum(np.abs(uncompensated.fields - tx.fields) ** 2))
            residual.append(np.sum(np.abs(compensated.fields - tx.fields) ** 2))
        return np.array(plain), np.array(residual)

    @pytest.mark.parametrize("opc", [False, True], ids=["vsfe", "vao"])
    def test_slopes(self, span, config, opc):
        """First-order NLI grows as P³, the compensated residual as P⁵"""
        plain, residual = self._error_powers(span, config, opc)
        assert self._slope(plain) == pytest.approx(3.0, abs=0.1)
        assert self._slope(residual) == pytest.approx(5.0, abs=0.3)

    def test_zeta_falls_two_db_per_db(self, span, config):
        """ζ = SNR_VSFE − SNR_EDC drops by about 2 dB per dB of launch power"""
        plain, residual = self._error_powers(span, config, opc=False)
        assert self._slope(plain / residual) == pytest.approx(-2.0, abs=0.3)

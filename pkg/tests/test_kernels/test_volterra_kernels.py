"""
Unit tests for the analytical Volterra kernels
"""

import numpy as np
import pytest
from scipy import integrate

from src.kernels.volterra_kernels import (
    BackwardKernel,
    backward_kernels,
    fwm_efficiency,
    kernel_value,
    opc_kernel_g,
    phased_array,
    residual_kernel_gamma,
)
from src.models.kernel_models import KernelMode, KernelParams, PowerProfile
from src.models.link import FiberSpan
from src.utils.validators import ConfigurationError


def _quad_complex(func, lo, hi):
    real, _ = integrate.quad(lambda z: func(z).real, lo, hi, limit=400, epsabs=0.0, epsrel=1e-12)
    imag, _ = integrate.quad(lambda z: func(z).imag, lo, hi, limit=400, epsabs=0.0, epsrel=1e-12)
    return real + 1j * imag


class TestKernelIdentities:
    """Closed-form identities of F, Ξ, G and the backward kernels"""

    @pytest.fixture
    def params(self):
        """Reference SSMF span, ten spans"""
        return KernelParams.from_span(FiberSpan.from_datasheet_units(), 10)

    @pytest.fixture
    def d_omega(self, params):
        """ΔΩ values giving phases up to several π per span"""
        return np.linspace(-3.0, 3.0, 41) * np.pi / abs(params.beta2 * params.span_length)

    def test_g_vanishes_at_zero(self, params):
        """G(0) is zero to machine precision"""
        assert abs(opc_kernel_g(0.0, params)) <= 1e-12

    def test_phased_array_at_zero(self, params):
        """Ξ(N, 0) equals N"""
        assert phased_array(10, 0.0, params) == pytest.approx(10.0)
        assert phased_array(1, 1e20, params) == pytest.approx(1.0)

    def test_fwm_efficiency_at_zero(self, params):
        """F(0) = (1 − e^{−αL})/α"""
        expected = -np.expm1(-params.alpha * params.span_length) / params.alpha
        assert fwm_efficiency(0.0, params) == pytest.approx(expected, rel=1e-12)

    def test_g_hermitian(self, params, d_omega):
        """G(−ΔΩ) = G*(ΔΩ)"""
        np.testing.assert_allclose(opc_kernel_g(-d_omega, params), np.conj(opc_kernel_g(d_omega, params)), atol=1e-9)

    def test_g_closed_form(self, params, d_omega):
        """G matches the expanded closed form"""
        a, length = params.alpha, params.span_length
        b = params.beta2 * d_omega
        e_a = np.exp(-a * length)
        e_b = np.exp(-1j * b * length)
        closed = ((e_b * e_a - 1) * (a - 1j * b) + (e_b - e_a) * (a + 1j * b)) / (a ** 2 + b ** 2)
        np.testing.assert_allclose(opc_kernel_g(d_omega, params), closed, rtol=1e-9, atol=1e-9)

    def test_g_zero_without_loss(self, params, d_omega):
        """A lossless span pair cancels exactly"""
        lossless = params.model_copy(update={"alpha": 0.0})
        np.testing.assert_allclose(opc_kernel_g(d_omega, lossless), 0.0, atol=1e-6)

    def test_phased_array_matches_sum(self, params, d_omega):
        """Dirichlet evaluation equals the explicit sum"""
        theta = params.beta2 * d_omega * params.span_length
        explicit = sum(np.exp(1j * theta * n) for n in range(7))
        np.testing.assert_allclose(phased_array(7, d_omega, params), explicit, atol=1e-9)

    def test_f_matches_quadrature(self, params):
        """F equals ∫₀^L e^{−αz}e^{jβ₂ΔΩz}dz"""
        d_omega = 1.7 / abs(params.beta2 * params.span_length)
        b = params.beta2 * d_omega
        expected = _quad_complex(lambda z: np.exp((1j * b - params.alpha) * z), 0.0, params.span_length)
        assert fwm_efficiency(d_omega, params) == pytest.approx(expected, rel=1e-8)

    def test_backward_relations(self, params, d_omega):
        """e^{−αL}F′ = e^{−jbL}F and e^{−αL}G′ = G*"""
        loss = np.exp(-params.alpha * params.span_length)
        b = params.beta2 * d_omega
        f = fwm_efficiency(d_omega, params)
        g = opc_kernel_g(d_omega, params)
        f_prime = backward_kernels(d_omega, params, BackwardKernel.F_PRIME)
        g_prime = backward_kernels(d_omega, params, "G'")
        np.testing.assert_allclose(loss * f_prime, np.exp(-1j * b * params.span_length) * f, rtol=1e-9)
        np.testing.assert_allclose(loss * g_prime, np.conj(g), atol=1e-6)

    def test_unknown_backward_selector(self, params):
        """Unknown selectors are configuration errors"""
        with pytest.raises(ConfigurationError):
            backward_kernels(0.0, params, "H'")

    def test_phased_array_rejects_zero_spans(self, params):
        """Zero spans are rejected"""
        with pytest.raises(ConfigurationError):
            phased_array(0, 0.0, params)

    def test_scalar_input_returns_complex(self, params):
        """Scalar ΔΩ gives a Python complex"""
        assert isinstance(fwm_efficiency(1e20, params), complex)


class TestKernelModes:
    """Tensor-mode kernel values"""

    @pytest.fixture
    def params(self):
        """Reference SSMF span, four spans"""
        return KernelParams.from_span(FiberSpan.from_datasheet_units(), 4)

    def test_vsfe_forward_at_zero(self, params):
        """No-OPC kernel at ΔΩ=0 is N·F(0)"""
        value = kernel_value(KernelMode.VSFE_FORWARD, 0.0, params)
        assert complex(value) == pytest.approx(4 * fwm_efficiency(0.0, params))

    def test_vao_backward_conjugates_to_gamma(self, params):
        """conj(VAO-backward) = Ξ*(N/2)·G = VAO-forward"""
        d_omega = np.linspace(0.0, 5.0, 17) / abs(params.beta2 * params.span_length)
        np.testing.assert_allclose(
            np.conj(kernel_value(KernelMode.VAO_BACKWARD, d_omega, params)),
            kernel_value(KernelMode.VAO_FORWARD, d_omega, params),
            atol=1e-6,
        )

    def test_backward_undoes_forward_phase(self, params):
        """VSFE-backward·e^{jbNL} equals VSFE-forward"""
        d_omega = np.linspace(-4.0, 4.0, 17) / abs(params.beta2 * params.span_length)
        b = params.beta2 * d_omega
        total = params.num_spans * params.span_length
        np.testing.assert_allclose(
            kernel_value(KernelMode.VSFE_BACKWARD, d_omega, params) * np.exp(1j * b * total),
            kernel_value(KernelMode.VSFE_FORWARD, d_omega, params),
            rtol=1e-8,
            atol=1e-6,
        )

    def test_vao_requires_even_spans(self):
        """VAO modes reject odd span counts"""
        odd = KernelParams.from_span(FiberSpan.from_datasheet_units(), 3)
        with pytest.raises(ConfigurationError):
            kernel_value(KernelMode.VAO_FORWARD, 0.0, odd)

    def test_per_span_is_single_span_backward(self, params):
        """Per-span tensor equals VSFE-backward with one span"""
        one = params.model_copy(update={"num_spans": 1})
        d_omega = np.linspace(0.0, 3.0, 9) / abs(params.beta2 * params.span_length)
        np.testing.assert_allclose(
            kernel_value(KernelMode.PER_SPAN, d_omega, params),
            kernel_value(KernelMode.VSFE_BACKWARD, d_omega, one),
        )


class TestResidualKernel:
    """Γ assembled from Λ and Ψ"""

    @pytest.mark.parametrize("num_spans", [2, 4, 10])
    def test_edfa_factorization(self, num_spans):
        """Γ(EDFA) = Ξ*(N/2)·G over random draws"""
        rng = np.random.default_rng(7)
        for _ in range(100):
            span = FiberSpan.from_datasheet_units(
                length_km=rng.uniform(40.0, 120.0),
                alpha_db_per_km=rng.uniform(0.15, 0.25),
                dispersion_ps_nm_km=rng.uniform(2.0, 20.0),
            )
            params = KernelParams.from_span(span, num_spans)
            d_omega = rng.uniform(-5.0, 5.0) / abs(span.beta2 * span.length)
            profile = PowerProfile.edfa(span.alpha, span.length, num_spans)
            gamma = residual_kernel_gamma(profile, num_spans, d_omega, span.beta2)
            expected = np.conj(phased_array(num_spans // 2, d_omega, params)) * opc_kernel_g(d_omega, params)
            assert abs(gamma - expected) <= 1e-9 * span.length * num_spans

    def test_lossless_profile_cancels(self):
        """Lossless profile gives Γ = 0"""
        span = FiberSpan.from_datasheet_units()
        profile = PowerProfile.lossless(span.length, 4)
        d_omega = np.linspace(-3.0, 3.0, 13) / abs(span.beta2 * span.length)
        gamma = residual_kernel_gamma(profile, 4, d_omega, span.beta2)
        np.testing.assert_allclose(gamma, 0.0, atol=1e-6)

    def test_mismatched_span_count(self):
        """Span count must match the profile"""
        span = FiberSpan.from_datasheet_units()
        profile = PowerProfile.edfa(span.alpha, span.length, 4)
        with pytest.raises(ConfigurationError):
            residual_kernel_gamma(profile, 2, 0.0, span.beta2)

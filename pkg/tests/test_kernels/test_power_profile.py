"""
Unit tests for power profiles, Λ, Ψ and the symmetry predicates
"""

import numpy as np
import pandas as pd
import pytest
from scipy import integrate

from src.kernels.power_profile import (
    exponential_integral,
    lambda_sum,
    phase_integral,
    power_at,
    psi_sum,
    symmetry_predicates,
    write_symmetry_report,
)
from src.kernels.volterra_kernels import fwm_efficiency, opc_kernel_g, residual_kernel_gamma
from src.models.kernel_models import KernelParams, PowerProfile, ProfileSegment
from src.models.link import FiberSpan
from src.utils.validators import ConfigurationError


class TestExponentialIntegral:
    """Stable ∫₀^L e^{rz}dz"""

    def test_zero_rate(self):
        """Zero rate integrates to the length"""
        assert complex(exponential_integral(0.0, 5.0)) == pytest.approx(5.0)

    def test_tiny_rate_uses_series(self):
        """Rates below the series threshold stay accurate"""
        rate = 1e-12 + 1e-12j
        expected = (np.exp(rate * 3.0) - 1.0) / rate
        assert complex(exponential_integral(rate, 3.0)) == pytest.approx(expected, rel=1e-9)

    def test_array_shape(self):
        """Array input keeps its shape"""
        rates = np.array([[0.1, -0.2j], [0.0, 1.0]])
        assert exponential_integral(rates, 2.0).shape == (2, 2)


class TestPowerProfile:
    """Piecewise-exponential profile evaluation"""

    @pytest.fixture
    def span(self):
        """Reference SSMF span"""
        return FiberSpan.from_datasheet_units()

    def test_edfa_one_sided_values(self, span):
        """P(L⁻) is the span loss and P(L⁺) is restored"""
        profile = PowerProfile.edfa(span.alpha, span.length, 2)
        assert power_at(profile, span.length, "left") == pytest.approx(np.exp(-span.alpha * span.length))
        assert power_at(profile, span.length, "right") == pytest.approx(1.0)

    def test_profile_must_tile_link(self):
        """Segments must cover num_spans·span_length"""
        with pytest.raises(ValueError):
            PowerProfile(segments=[ProfileSegment(length=10.0, alpha=0.0)], span_length=20.0, num_spans=1)

    def test_out_of_range_position(self, span):
        """Positions outside the link are rejected"""
        profile = PowerProfile.edfa(span.alpha, span.length, 2)
        with pytest.raises(ConfigurationError):
            power_at(profile, 3 * span.length)

    def test_phase_integral_matches_quadrature(self, span):
        """Piecewise exact integral against quadrature on a random profile"""
        rng = np.random.default_rng(3)
        lengths = rng.uniform(0.5, 1.5, 6)
        lengths *= 2 * span.length / lengths.sum()
        segments = [
            ProfileSegment(length=float(length), alpha=float(rng.uniform(-2e-5, 5e-5)), entry_gain=float(rng.uniform(0.5, 2.0)))
            for length in lengths
        ]
        profile = PowerProfile(segments=segments, span_length=span.length, num_spans=2)
        d_omega = 2.3 / abs(span.beta2 * span.length)
        b = span.beta2 * d_omega

        starts = profile.segment_starts()
        expected = 0j
        for start, segment in zip(starts, segments):
            level = power_at(profile, float(start), "right")
            for part in (np.real, np.imag):
                value, _ = integrate.quad(
                    lambda z: part(level * np.exp(-segment.alpha * (z - start)) * np.exp(1j * b * z)),
                    start,
                    start + segment.length,
                    epsabs=0.0,
                    epsrel=1e-11,
                    limit=200,
                )
                expected += value if part is np.real else 1j * value
        result = complex(phase_integral(profile, d_omega, span.beta2, 0.0, profile.total_length))
        assert abs(result - expected) <= 1e-8 * abs(expected)


class TestLambdaPsi:
    """Λ and Ψ sums"""

    @pytest.fixture
    def span(self):
        """Reference SSMF span"""
        return FiberSpan.from_datasheet_units()

    def test_single_half_span_lambda_is_f(self, span):
        """Λ over one EDFA span equals F"""
        profile = PowerProfile.edfa(span.alpha, span.length, 2)
        params = KernelParams.from_span(span, 2)
        d_omega = 1.1 / abs(span.beta2 * span.length)
        assert complex(lambda_sum(profile, 1, d_omega, span.beta2)) == pytest.approx(
            fwm_efficiency(d_omega, params), rel=1e-12
        )

    def test_two_span_gamma_is_g(self, span):
        """N_s=2 EDFA: Ψ − Λ* = G"""
        profile = PowerProfile.edfa(span.alpha, span.length, 2)
        params = KernelParams.from_span(span, 2)
        d_omega = np.linspace(-2.0, 2.0, 9) / abs(span.beta2 * span.length)
        gamma = psi_sum(profile, 1, d_omega, span.beta2) - np.conj(lambda_sum(profile, 1, d_omega, span.beta2))
        np.testing.assert_allclose(gamma, opc_kernel_g(d_omega, params), atol=1e-10 * span.length)

    def test_zero_frequency_cancels(self, span):
        """ΔΩ=0 gives Γ = 0 for the EDFA profile"""
        profile = PowerProfile.edfa(span.alpha, span.length, 4)
        assert abs(residual_kernel_gamma(profile, 4, 0.0, span.beta2)) <= 1e-9

    def test_lossless_psi_equals_lambda_conjugate(self, span):
        """Lossless link: Ψ = Λ*"""
        profile = PowerProfile.lossless(span.length, 2)
        d_omega = 0.8 / abs(span.beta2 * span.length)
        psi = complex(psi_sum(profile, 1, d_omega, span.beta2))
        lam = complex(lambda_sum(profile, 1, d_omega, span.beta2))
        assert psi == pytest.approx(np.conj(lam), abs=1e-6)

    def test_mirrored_profile_cancels(self, span):
        """Gain-then-loss mirrored profile gives Γ ≈ 0"""
        profile = PowerProfile.mirrored_spans(span.alpha, span.length, 4)
        d_omega = np.linspace(-3.0, 3.0, 7) / abs(span.beta2 * span.length)
        np.testing.assert_allclose(residual_kernel_gamma(profile, 4, d_omega, span.beta2), 0.0, atol=1e-6)

    def test_half_spans_checked(self, span):
        """half_spans must fit the profile"""
        profile = PowerProfile.edfa(span.alpha, span.length, 2)
        with pytest.raises(ConfigurationError):
            lambda_sum(profile, 2, 0.0, span.beta2)


class TestSymmetryPredicates:
    """OPC-cancellation mirror conditions"""

    @pytest.fixture
    def span(self):
        """Reference SSMF span"""
        return FiberSpan.from_datasheet_units()

    def test_lossless_passes(self, span):
        """Flat profile satisfies every condition"""
        report = symmetry_predicates(PowerProfile.lossless(span.length, 4))
        assert report.all_pass
        assert report.asymmetry_norm == pytest.approx(0.0, abs=1e-12)

    def test_edfa_fails_power_mirror(self, span):
        """EDFA sawtooth is not mirror-symmetric"""
        report = symmetry_predicates(PowerProfile.edfa(span.alpha, span.length, 4))
        assert not report.conditions["power_mirror_end"]
        assert not report.all_pass
        assert report.asymmetry_norm > 0.5

    def test_mirrored_passes(self, span):
        """Mirrored two-segment spans pass"""
        report = symmetry_predicates(PowerProfile.mirrored_spans(span.alpha, span.length, 4))
        assert report.all_pass

    def test_odd_span_count_rejected(self, span):
        """Odd span counts are rejected"""
        with pytest.raises(ConfigurationError):
            symmetry_predicates(PowerProfile.edfa(span.alpha, span.length, 3))

    def test_report_csv(self, span, tmp_path):
        """Report exports one row per condition plus the norm"""
        path = write_symmetry_report(PowerProfile.edfa(span.alpha, span.length, 2), tmp_path / "sym.csv")
        frame = pd.read_csv(path)
        assert list(frame["condition"]) == [
            "power_mirror_end",
            "power_mirror_start",
            "loss_mirror_end",
            "loss_mirror_start",
            "asymmetry_norm",
        ]

"""
Unit tests for electronic dispersion compensation
"""

import numpy as np
import pytest

from src.equalizers.dispersion import edc, net_dispersion_length
from src.models.link import FiberSpan, Link
from src.simulation.channel import split_step
from src.simulation.waveform import generate_symbols, rrc_shape


class TestEdc:
    """All-pass dispersion removal"""

    @pytest.fixture
    def signal(self):
        """One 32 GBd channel at 2 samples/symbol"""
        return rrc_shape(generate_symbols(256, 1, seed=4), rolloff=0.1, sps=2)

    def test_undoes_linear_propagation(self, signal):
        """EDC after lossless dispersive propagation restores the input"""
        span = FiberSpan.from_datasheet_units()
        dispersed = split_step(signal, 0.0, span.beta2, 0.0, 3 * span.length, 1)
        restored = edc(dispersed, span.beta2, 3 * span.length)
        np.testing.assert_allclose(restored.fields, signal.fields, atol=1e-10)

    def test_zero_length_is_identity(self, signal):
        """No fiber, no filtering"""
        assert edc(signal, -2e-26, 0.0) is signal

    def test_preserves_energy(self, signal):
        """The filter is all-pass"""
        out = edc(signal, -2.17e-26, 5e5)
        assert out.energy == pytest.approx(signal.energy, rel=1e-10)


class TestNetDispersionLength:
    """Residual dispersion at the receiver"""

    def test_without_opc(self):
        """Plain link leaves the full length"""
        link = Link.uniform(4, FiberSpan.from_datasheet_units())
        assert net_dispersion_length(link) == pytest.approx(4e5)

    def test_mid_link_opc(self):
        """Mid-link OPC leaves nothing"""
        link = Link.uniform(4, FiberSpan.from_datasheet_units(), opc=True)
        assert net_dispersion_length(link) == pytest.approx(0.0)

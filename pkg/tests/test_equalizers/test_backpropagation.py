"""
Unit tests for ideal digital back-propagation
"""

import numpy as np
import pytest

from src.equalizers.backpropagation import dbp_ideal
from src.models.link import FiberSpan, Link
from src.simulation.channel import propagate_link
from src.simulation.waveform import generate_symbols, rrc_shape, set_power


class TestDbpIdeal:
    """Exact inversion of a noiseless link"""

    @pytest.fixture
    def tx(self):
        """One channel at 6 dBm, far into the nonlinear regime"""
        frame = generate_symbols(64, 1, seed=13)
        return set_power(rrc_shape(frame, rolloff=0.1, sps=4), 6.0, 1)

    def test_inverts_plain_link(self, tx):
        """DBP with the forward step count recovers the launched field"""
        link = Link.uniform(2, FiberSpan.from_datasheet_units(), steps_per_span=20)
        restored = dbp_ideal(propagate_link(tx, link), link, steps_per_span=20)
        error = np.linalg.norm(restored.fields - tx.fields) / np.linalg.norm(tx.fields)
        assert error < 1e-9

    def test_inverts_opc_link(self, tx):
        """The OPC is re-applied where it sat"""
        link = Link.uniform(2, FiberSpan.from_datasheet_units(), opc=True, steps_per_span=20)
        restored = dbp_ideal(propagate_link(tx, link), link, steps_per_span=20)
        error = np.linalg.norm(restored.fields - tx.fields) / np.linalg.norm(tx.fields)
        assert error < 1e-9

    def test_defaults_to_link_steps(self, tx):
        """steps_per_span=None uses the link setting"""
        link = Link.uniform(1, FiberSpan.from_datasheet_units(), steps_per_span=10)
        restored = dbp_ideal(propagate_link(tx, link), link, steps_per_span=None)
        np.testing.assert_allclose(restored.fields, tx.fields, atol=1e-9 * np.max(np.abs(tx.fields)))

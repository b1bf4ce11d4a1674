"""
Transmitter and fiber-channel simulation
"""

from .waveform import (
    GRAY_16QAM,
    WdmTransmitter,
    frequency_shift,
    generate_symbols,
    rrc_impulse_response,
    rrc_shape,
    rrc_transfer_function,
    set_power,
    wdm_mux,
)
from .channel import (
    amplify,
    linear_transfer,
    opc_conjugate,
    propagate_link,
    split_step,
    ssfm_propagate,
)

__all__ = [
    "GRAY_16QAM",
    "WdmTransmitter",
    "frequency_shift",
    "generate_symbols",
    "rrc_impulse_response",
    "rrc_shape",
    "rrc_transfer_function",
    "set_power",
    "wdm_mux",
    "amplify",
    "linear_transfer",
    "opc_conjugate",
    "propagate_link",
    "split_step",
    "ssfm_propagate",
]

"""
Receiver-side nonlinearity compensation engines and the block windowing driver
"""

from .dispersion import edc, net_dispersion_length
from .windowing import (
    default_window_symbols,
    discard_calibration,
    kept_sample_range,
    window_starts,
    windowed_process,
)
from .volterra_equalizer import (
    RecursiveVsfeWindowTransform,
    VaoWindowTransform,
    VsfeWindowTransform,
    third_order_term,
    vao_correction,
    vao_equalize,
    vsfe_correction,
    vsfe_recursive,
    vsfe_single,
)
from .backpropagation import dbp_ideal

__all__ = [
    "edc",
    "net_dispersion_length",
    "default_window_symbols",
    "discard_calibration",
    "kept_sample_range",
    "window_starts",
    "windowed_process",
    "RecursiveVsfeWindowTransform",
    "VaoWindowTransform",
    "VsfeWindowTransform",
    "third_order_term",
    "vao_correction",
    "vao_equalize",
    "vsfe_correction",
    "vsfe_recursive",
    "vsfe_single",
    "dbp_ideal",
]

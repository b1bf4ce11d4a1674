"""
Analytical Volterra kernels, their tensors and the general power-profile constructions
"""

from .volterra_kernels import (
    BackwardKernel,
    backward_kernels,
    fwm_efficiency,
    kernel_value,
    opc_kernel_g,
    phased_array,
    residual_kernel_gamma,
)
from .power_profile import (
    SymmetryReport,
    exponential_integral,
    lambda_sum,
    phase_integral,
    psi_sum,
    symmetry_predicates,
    write_symmetry_report,
)
from .kernel_tensor import (
    KernelSurface,
    KernelTensor,
    build_kernel_tensor,
    cached_kernel_tensor,
    render_kernel_surface,
)

__all__ = [
    "BackwardKernel",
    "backward_kernels",
    "fwm_efficiency",
    "kernel_value",
    "opc_kernel_g",
    "phased_array",
    "residual_kernel_gamma",
    "SymmetryReport",
    "exponential_integral",
    "lambda_sum",
    "phase_integral",
    "psi_sum",
    "symmetry_predicates",
    "write_symmetry_report",
    "KernelSurface",
    "KernelTensor",
    "build_kernel_tensor",
    "cached_kernel_tensor",
    "render_kernel_surface",
]

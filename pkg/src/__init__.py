"""
VAO Nonlinearity Compensation Workbench
Core package initialization
"""

__version__ = "0.2.0"
__description__ = (
    "Split-step channel simulation, Volterra kernels and OPC-assisted "
    "nonlinearity compensation for WDM coherent links"
)

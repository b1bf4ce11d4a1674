"""
Kernel Tensor Module

Discretizes a channel kernel over a window grid. The kernel at (k, i, l)
depends only on the integer product m = (k − l)(i − l), so values are
stored once per |m| and negative products use Hermitian symmetry.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
import pandas as pd

from ..models.kernel_models import FrequencyGrid, KernelMode, KernelParams
from .volterra_kernels import kernel_value

logger = logging.getLogger(__name__)


class KernelTensor:
    """
    Immutable memo table of a channel kernel over a FrequencyGrid.

    Indices passed to the tensor are centered bin indices in
    [−N/2, N/2).
    """

    def __init__(
        self,
        grid: FrequencyGrid,
        params: KernelParams,
        mode: KernelMode,
        table: np.ndarray
    ):
        """
        Initialize tensor

        Args:
            grid: Window frequency grid
            params: Link parameters the kernel was built from
            mode: Kernel mode
            table: Kernel value for m = 0 … grid.max_product
        """
        if table.shape != (grid.max_product + 1,):
            raise ValueError(f"table must hold {grid.max_product + 1} values, got {table.shape}")
        table = np.array(table, dtype=np.complex128)
        table.setflags(write=False)
        self.grid = grid
        self.params = params
        self.mode = mode
        self._table = table

    @property
    def n_points(self) -> int:
        return self.grid.n_points

    @property
    def delta_omega(self) -> float:
        return self.grid.delta_omega

    @property
    def table(self) -> np.ndarray:
        """Read-only values for m ≥ 0."""
        return self._table

    def at_products(self, products: Union[int, np.ndarray]) -> np.ndarray:
        """Kernel values at integer products m (negative m uses the conjugate)."""
        products = np.asarray(products, dtype=np.int64)
        values = self._table[np.abs(products)]
        return np.where(products < 0, np.conj(values), values)

    def __call__(self, k, i, l) -> np.ndarray:
        """Kernel value at centered indices (k, i, l)."""
        k, i, l = (np.asarray(v, dtype=np.int64) for v in (k, i, l))
        return self.at_products((k - l) * (i - l))

    def lines(self, qs: np.ndarray) -> np.ndarray:
        """
        Kernel rows h_q(j) = T(j·q) for j = −(N−1) … N−1

        Args:
            qs: Offsets q = i − l

        Returns:
            Array of shape (len(qs), 2N − 1)
        """
        n = self.n_points
        j = np.arange(-(n - 1), n, dtype=np.int64)
        return self.at_products(np.asarray(qs, dtype=np.int64)[:, None] * j[None, :])

    def conjugate(self) -> "KernelTensor":
        """Tensor holding the complex conjugate of every value."""
        return KernelTensor(self.grid, self.params, self.mode, np.conj(self._table))

    def matches(self, n_points: int) -> bool:
        return self.grid.n_points == n_points

    def __repr__(self) -> str:
        return (
            f"KernelTensor(mode={self.mode.value}, n_points={self.n_points}, "
            f"spans={self.params.num_spans})"
        )


def build_kernel_tensor(
    grid: FrequencyGrid,
    params: KernelParams,
    mode: KernelMode
) -> KernelTensor:
    """
    Evaluate a channel kernel once per distinct product (k − l)(i − l)

    Args:
        grid: Window frequency grid
        params: Link parameters
        mode: Kernel mode

    Returns:
        KernelTensor
    """
    products = np.arange(grid.max_product + 1, dtype=np.float64)
    table = kernel_value(mode, products * grid.delta_omega ** 2, params)
    logger.debug(f"Built {mode.value} tensor: {table.size} values over {grid.n_points} bins")
    return KernelTensor(grid, params, mode, table)


@lru_cache(maxsize=4)
def cached_kernel_tensor(
    grid: FrequencyGrid,
    params: KernelParams,
    mode: KernelMode
) -> KernelTensor:
    """build_kernel_tensor, reused across realizations of one process."""
    return build_kernel_tensor(grid, params, mode)


@dataclass(frozen=True)
class KernelSurface:
    """|kernel(ω, ω₁, ω₂)| on an (ω₁, ω₂) plane, rows ω₁ and columns ω₂"""
    omega_1: np.ndarray
    omega_2: np.ndarray
    magnitude: np.ndarray
    mode: KernelMode

    @property
    def peak(self) -> float:
        return float(np.max(self.magnitude))

    def to_frame(self) -> pd.DataFrame:
        """Header row of ω₂ values, first column ω₁ values."""
        frame = pd.DataFrame(self.magnitude, index=self.omega_1, columns=self.omega_2)
        frame.index.name = "omega_1"
        return frame


def render_kernel_surface(
    params: KernelParams,
    grid: FrequencyGrid,
    mode: KernelMode,
    omega_fixed: float = 0.0
) -> KernelSurface:
    """
    Kernel magnitude over the (ω₁, ω₂) plane at fixed ω

    Magnitudes are divided by the no-OPC kernel maximum F(0)·N_s,
    reached on the ω₁ = ω₂ line.

    Args:
        params: Link parameters
        grid: Grid whose centered bins give both axes
        mode: Kernel mode to render
        omega_fixed: Output frequency ω, rad/s

    Returns:
        KernelSurface
    """
    axis = grid.indices * grid.delta_omega
    omega_1 = axis[:, None]
    omega_2 = axis[None, :]
    d_omega = (omega_fixed - omega_2) * (omega_1 - omega_2)

    magnitude = np.abs(kernel_value(mode, d_omega, params))
    reference = abs(complex(kernel_value(KernelMode.VSFE_FORWARD, 0.0, params)))
    return KernelSurface(
        omega_1=axis.copy(),
        omega_2=axis.copy(),
        magnitude=magnitude / reference,
        mode=mode,
    )

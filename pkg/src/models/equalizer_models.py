"""
Equalizer configuration, receiver-chain and correction models
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..utils.validators import GridValidator


class EqualizerVariant(str, Enum):
    """Receiver-side compensation engine"""
    EDC = "edc"
    VSFE_SINGLE = "vsfe_single"
    VSFE_RECURSIVE = "vsfe_recursive"
    VAO = "vao"
    DBP_IDEAL = "dbp_ideal"


class IndexMode(str, Enum):
    """How k+i-l outside the window grid is treated in the double sum"""
    CYCLIC = "cyclic"
    CLAMPED = "clamped"


class Scheme(str, Enum):
    """Transmission scheme + DSP chain compared in a sweep"""
    EDC = "edc"
    OPC = "opc"
    VSFE_SINGLE = "vsfe_single"
    VSFE_RECURSIVE = "vsfe_recursive"
    VAO = "vao"
    DBP = "dbp"

    @property
    def uses_opc_link(self) -> bool:
        return self in (Scheme.OPC, Scheme.VAO)

    @property
    def variant(self) -> Optional[EqualizerVariant]:
        return _SCHEME_VARIANTS[self]


_SCHEME_VARIANTS = {
    Scheme.EDC: EqualizerVariant.EDC,
    Scheme.OPC: None,
    Scheme.VSFE_SINGLE: EqualizerVariant.VSFE_SINGLE,
    Scheme.VSFE_RECURSIVE: EqualizerVariant.VSFE_RECURSIVE,
    Scheme.VAO: EqualizerVariant.VAO,
    Scheme.DBP: EqualizerVariant.DBP_IDEAL,
}


class ChainStage(str, Enum):
    """Processing blocks of a receiver chain"""
    EDC = "edc"
    EQUALIZE = "equalize"
    DBP = "dbp"
    SELECT = "select"
    CONJUGATE = "conjugate"
    MATCHED_FILTER = "matched_filter"


_CHAIN_STAGES = {
    Scheme.EDC: [ChainStage.EDC, ChainStage.SELECT, ChainStage.MATCHED_FILTER],
    Scheme.OPC: [ChainStage.SELECT, ChainStage.CONJUGATE, ChainStage.MATCHED_FILTER],
    Scheme.VSFE_SINGLE: [ChainStage.EQUALIZE, ChainStage.SELECT, ChainStage.MATCHED_FILTER],
    Scheme.VSFE_RECURSIVE: [ChainStage.EQUALIZE, ChainStage.SELECT, ChainStage.MATCHED_FILTER],
    # conjugation happens inside the VAO window transform
    Scheme.VAO: [ChainStage.EQUALIZE, ChainStage.SELECT, ChainStage.MATCHED_FILTER],
    Scheme.DBP: [ChainStage.DBP, ChainStage.SELECT, ChainStage.MATCHED_FILTER],
}


class RxChain(BaseModel):
    """Receiver chain for one scheme and one WDM channel"""
    model_config = ConfigDict(frozen=True)

    scheme: Scheme
    channel_index: Optional[int] = Field(
        default=None, description="0-based channel position from the lowest frequency; None = center"
    )
    target_sps: int = Field(default=2, ge=2)

    @property
    def stages(self) -> List[ChainStage]:
        return list(_CHAIN_STAGES[self.scheme])


class EqualizerConfig(BaseModel):
    """Block-processing geometry and engine selection"""
    model_config = ConfigDict(frozen=True)

    window_symbols: int = Field(default=512, gt=0)
    samples_per_symbol: int = Field(default=6, ge=2)
    discard_per_side: int = Field(default=128, ge=0)
    variant: EqualizerVariant = EqualizerVariant.VSFE_SINGLE
    dbp_steps_per_span: int = Field(default=100, ge=1)
    index_mode: IndexMode = IndexMode.CYCLIC
    wrap_windows: bool = True
    max_workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _window_geometry(self) -> "EqualizerConfig":
        is_valid, error = GridValidator.validate_window(
            self.window_symbols, self.samples_per_symbol, self.discard_per_side
        )
        if not is_valid:
            raise ValueError(error)
        return self

    @property
    def window_samples(self) -> int:
        return self.window_symbols * self.samples_per_symbol

    @property
    def discard_samples(self) -> int:
        return self.discard_per_side * self.samples_per_symbol

    @property
    def advance_samples(self) -> int:
        """Hop between consecutive windows."""
        return self.window_samples - 2 * self.discard_samples


@dataclass(frozen=True)
class NonlinearCorrection:
    """Per-bin third-order correction for both polarizations (FFT order)"""
    ax: np.ndarray
    ay: np.ndarray

    def __post_init__(self):
        if self.ax.shape != self.ay.shape:
            raise ValueError("correction arrays must have the same shape")

    @property
    def stacked(self) -> np.ndarray:
        return np.stack([self.ax, self.ay])

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.ax) ** 2 + np.abs(self.ay) ** 2))

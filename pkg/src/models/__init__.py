"""
Data models for signals, links, kernels, equalizers, metrics and experiments
"""

from .signals import DualPolSignal, SymbolFrame
from .link import Amplifier, FiberSpan, Link
from .kernel_models import (
    FrequencyGrid,
    KernelMode,
    KernelParams,
    PowerProfile,
    ProfileSegment,
)
from .equalizer_models import (
    ChainStage,
    EqualizerConfig,
    EqualizerVariant,
    IndexMode,
    NonlinearCorrection,
    RxChain,
    Scheme,
)
from .metrics_models import SnrEstimate, ZetaRecord
from .experiment_models import (
    EqualizerSettings,
    ExperimentConfig,
    LinkConfig,
    PointStatus,
    StopCriterion,
    SweepAxis,
    SweepConfig,
    SweepResult,
    SweepRow,
    TxConfig,
)

__all__ = [
    "DualPolSignal",
    "SymbolFrame",
    "Amplifier",
    "FiberSpan",
    "Link",
    "FrequencyGrid",
    "KernelMode",
    "KernelParams",
    "PowerProfile",
    "ProfileSegment",
    "ChainStage",
    "EqualizerConfig",
    "EqualizerVariant",
    "IndexMode",
    "NonlinearCorrection",
    "RxChain",
    "Scheme",
    "SnrEstimate",
    "ZetaRecord",
    "EqualizerSettings",
    "ExperimentConfig",
    "LinkConfig",
    "PointStatus",
    "StopCriterion",
    "SweepAxis",
    "SweepConfig",
    "SweepResult",
    "SweepRow",
    "TxConfig",
]

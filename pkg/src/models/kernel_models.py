"""
Kernel parameter, frequency-grid and power-profile models
"""

import math
from enum import Enum
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .link import FiberSpan, Link


class KernelMode(str, Enum):
    """Which channel kernel a tensor evaluates"""
    VSFE_FORWARD = "vsfe_forward"
    VSFE_BACKWARD = "vsfe_backward"
    VAO_FORWARD = "vao_forward"
    VAO_BACKWARD = "vao_backward"
    PER_SPAN = "per_span"


class KernelParams(BaseModel):
    """Span parameters entering F, G, Xi and their backward forms"""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(description="Power attenuation, Np/m")
    beta2: float = Field(description="GVD, s²/m")
    span_length: float = Field(gt=0.0, description="m")
    num_spans: int = Field(ge=1)

    @classmethod
    def from_span(cls, span: FiberSpan, num_spans: int) -> "KernelParams":
        return cls(alpha=span.alpha, beta2=span.beta2, span_length=span.length, num_spans=num_spans)

    @classmethod
    def from_link(cls, link: Link) -> "KernelParams":
        return cls.from_span(link.reference_span(), link.num_spans)


class FrequencyGrid(BaseModel):
    """Centered angular-frequency grid of a processing window"""
    model_config = ConfigDict(frozen=True)

    n_points: int = Field(gt=0)
    delta_omega: float = Field(gt=0.0, description="rad/s")

    @model_validator(mode="after")
    def _even(self) -> "FrequencyGrid":
        if self.n_points % 2 != 0:
            raise ValueError(f"n_points must be even, got {self.n_points}")
        return self

    @classmethod
    def from_window(cls, n_samples: int, sample_rate: float) -> "FrequencyGrid":
        """Grid of a window of n_samples at sample_rate: delta_omega = 2π/T."""
        return cls(n_points=n_samples, delta_omega=2.0 * math.pi * sample_rate / n_samples)

    @property
    def indices(self) -> np.ndarray:
        """Centered bin indices -N/2 ... N/2-1."""
        half = self.n_points // 2
        return np.arange(-half, half, dtype=np.int64)

    @property
    def max_product(self) -> int:
        """Largest |(k-l)(i-l)| reachable on the grid."""
        return (self.n_points - 1) ** 2


class ProfileSegment(BaseModel):
    """Exponential stretch of a power profile with a lumped gain at its start"""
    model_config = ConfigDict(frozen=True)

    length: float = Field(gt=0.0, description="m")
    alpha: float = Field(description="Local power attenuation, Np/m (negative = distributed gain)")
    entry_gain: float = Field(default=1.0, gt=0.0, description="Linear power gain applied at the segment start")


class PowerProfile(BaseModel):
    """
    Piecewise-exponential signal power profile P(z) normalized to the launch power.

    Spans are ``span_length`` long; segments may subdivide spans but must tile
    the link exactly.
    """
    model_config = ConfigDict(frozen=True)

    segments: List[ProfileSegment]
    span_length: float = Field(gt=0.0)
    num_spans: int = Field(ge=1)

    @model_validator(mode="after")
    def _tiles_link(self) -> "PowerProfile":
        if not self.segments:
            raise ValueError("profile needs at least one segment")
        total = sum(segment.length for segment in self.segments)
        expected = self.span_length * self.num_spans
        if not math.isclose(total, expected, rel_tol=1e-9):
            raise ValueError(f"segments cover {total} m but the link is {expected} m")
        return self

    @classmethod
    def edfa(cls, alpha: float, span_length: float, num_spans: int) -> "PowerProfile":
        """Constant loss per span, lumped gain restoring launch power at each span start."""
        first = ProfileSegment(length=span_length, alpha=alpha)
        rest = ProfileSegment(length=span_length, alpha=alpha, entry_gain=math.exp(alpha * span_length))
        return cls(segments=[first] + [rest] * (num_spans - 1), span_length=span_length, num_spans=num_spans)

    @classmethod
    def lossless(cls, span_length: float, num_spans: int) -> "PowerProfile":
        return cls(
            segments=[ProfileSegment(length=span_length, alpha=0.0)] * num_spans,
            span_length=span_length,
            num_spans=num_spans,
        )

    @classmethod
    def mirrored_spans(cls, alpha: float, span_length: float, num_spans: int) -> "PowerProfile":
        """
        Each span decays over its first half and is pumped back over its second half.

        The resulting P(z) is mirror-symmetric about every span midpoint and
        about the link midpoint.
        """
        half = span_length / 2.0
        per_span = [ProfileSegment(length=half, alpha=alpha), ProfileSegment(length=half, alpha=-alpha)]
        return cls(segments=per_span * num_spans, span_length=span_length, num_spans=num_spans)

    @property
    def total_length(self) -> float:
        return self.span_length * self.num_spans

    def segment_starts(self) -> np.ndarray:
        """Start coordinate of each segment."""
        lengths = np.array([segment.length for segment in self.segments])
        return np.concatenate([[0.0], np.cumsum(lengths)[:-1]])

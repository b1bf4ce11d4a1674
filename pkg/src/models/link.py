"""
Physical link models: fiber spans, amplifiers and the span/OPC sequence
"""

import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import constants

from ..utils.helpers import (
    REFERENCE_WAVELENGTH_M,
    attenuation_db_to_neper,
    carrier_frequency,
    dispersion_to_beta2,
    gamma_to_si,
)


class FiberSpan(BaseModel):
    """Single fiber span in SI units (alpha is the power attenuation)"""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(ge=0.0, description="Power attenuation, Np/m")
    beta2: float = Field(description="Group-velocity dispersion, s²/m")
    gamma: float = Field(ge=0.0, description="Nonlinear coefficient, 1/(W·m)")
    length: float = Field(gt=0.0, description="Span length, m")

    @classmethod
    def from_datasheet_units(
        cls,
        length_km: float = 100.0,
        alpha_db_per_km: float = 0.2,
        dispersion_ps_nm_km: float = 17.0,
        gamma_per_w_km: float = 1.2,
        wavelength_m: float = REFERENCE_WAVELENGTH_M
    ) -> "FiberSpan":
        """
        Build a span from datasheet units

        Args:
            length_km: Span length in km
            alpha_db_per_km: Attenuation in dB/km
            dispersion_ps_nm_km: Dispersion parameter D
            gamma_per_w_km: Nonlinear coefficient in 1/(W·km)
            wavelength_m: Reference wavelength for the D -> beta2 conversion

        Returns:
            FiberSpan in SI units
        """
        return cls(
            alpha=attenuation_db_to_neper(alpha_db_per_km),
            beta2=dispersion_to_beta2(dispersion_ps_nm_km, wavelength_m),
            gamma=gamma_to_si(gamma_per_w_km),
            length=length_km * 1e3,
        )

    @property
    def loss_db(self) -> float:
        """Span loss in dB."""
        return 10.0 * self.alpha * self.length / math.log(10.0)

    @property
    def effective_length(self) -> float:
        """(1 - exp(-alpha·L))/alpha, or L when lossless."""
        if self.alpha == 0.0:
            return self.length
        return -math.expm1(-self.alpha * self.length) / self.alpha


class Amplifier(BaseModel):
    """Lumped amplifier at the end of a span"""
    model_config = ConfigDict(frozen=True)

    gain: float = Field(ge=0.0, description="Gain, dB")
    noise_figure: float = Field(default=5.0, description="Noise figure, dB")
    ase_enabled: bool = False
    reference_frequency: float = Field(default_factory=carrier_frequency, gt=0.0)

    @model_validator(mode="after")
    def _physical_noise_figure(self) -> "Amplifier":
        if self.ase_enabled and self.noise_figure < 3.0:
            raise ValueError(
                f"noise_figure {self.noise_figure} dB is below the 3 dB quantum limit"
            )
        return self

    @property
    def linear_gain(self) -> float:
        return 10.0 ** (self.gain / 10.0)

    @property
    def spontaneous_emission_factor(self) -> float:
        """n_sp = 10^(NF/10)/2."""
        return 10.0 ** (self.noise_figure / 10.0) / 2.0

    @property
    def ase_psd_per_pol(self) -> float:
        """ASE power spectral density per polarization, W/Hz."""
        return (
            (self.linear_gain - 1.0)
            * self.spontaneous_emission_factor
            * constants.h
            * self.reference_frequency
        )


class Link(BaseModel):
    """Ordered (span, amplifier) sequence with optional mid-link OPC"""
    model_config = ConfigDict(frozen=True)

    spans: List[Tuple[FiberSpan, Amplifier]] = Field(default_factory=list)
    opc_after_span: Optional[int] = None
    steps_per_span: int = Field(default=100, ge=1)

    @field_validator("spans")
    @classmethod
    def _as_tuples(cls, value):
        return [tuple(stage) for stage in value]

    @model_validator(mode="after")
    def _mid_link_opc(self) -> "Link":
        if self.opc_after_span is not None:
            n_spans = len(self.spans)
            if n_spans == 0 or n_spans % 2 != 0:
                raise ValueError(f"mid-link OPC needs an even span count, got {n_spans}")
            if self.opc_after_span != n_spans // 2:
                raise ValueError(
                    f"opc_after_span must be {n_spans // 2} for a {n_spans}-span link"
                )
        return self

    @classmethod
    def uniform(
        cls,
        num_spans: int,
        span: FiberSpan,
        amplifier: Optional[Amplifier] = None,
        opc: bool = False,
        steps_per_span: int = 100
    ) -> "Link":
        """
        Build a link of identical spans

        Args:
            num_spans: Number of spans
            span: Fiber span repeated along the link
            amplifier: Amplifier after each span (default: noiseless, gain = span loss)
            opc: Insert ideal OPC after span num_spans/2
            steps_per_span: SSFM steps per span

        Returns:
            Link instance
        """
        if amplifier is None:
            amplifier = Amplifier(gain=span.loss_db)
        return cls(
            spans=[(span, amplifier)] * num_spans,
            opc_after_span=num_spans // 2 if opc else None,
            steps_per_span=steps_per_span,
        )

    @property
    def num_spans(self) -> int:
        return len(self.spans)

    @property
    def total_length(self) -> float:
        return sum(span.length for span, _ in self.spans)

    @property
    def has_opc(self) -> bool:
        return self.opc_after_span is not None

    @property
    def fiber_spans(self) -> List[FiberSpan]:
        return [span for span, _ in self.spans]

    def reference_span(self) -> FiberSpan:
        """
        The span type shared by every stage

        Raises:
            ValueError: if spans differ (kernels assume a uniform link)
        """
        if not self.spans:
            raise ValueError("link has no spans")
        first = self.spans[0][0]
        if any(span != first for span, _ in self.spans[1:]):
            raise ValueError("kernel construction requires identical spans")
        return first

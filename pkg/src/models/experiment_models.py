"""
Experiment configuration and sweep result models

Every default reproduces the canonical 5 x 32 GBd PM-16QAM system over
10 x 100 km SSMF, so an empty configuration file is a valid experiment.
"""

import math
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .equalizer_models import EqualizerConfig, EqualizerVariant, IndexMode, Scheme
from .link import Amplifier, FiberSpan, Link
from ..utils.helpers import carrier_frequency
from ..utils.validators import GridValidator


class TxConfig(BaseModel):
    """WDM transmitter parameters"""
    model_config = ConfigDict(frozen=True)

    num_channels: int = Field(default=5, ge=1)
    symbol_rate: float = Field(default=32e9, gt=0.0, description="Baud")
    channel_spacing: float = Field(default=32.5e9, gt=0.0, description="Hz")
    rolloff: float = Field(default=0.01, gt=0.0, le=1.0)
    samples_per_symbol: int = Field(default=6, ge=2)
    power_per_channel: float = Field(default=0.0, description="dBm")
    seed: int = 1
    n_symbols: int = Field(default=4096, gt=0)

    @model_validator(mode="after")
    def _spectral_plan(self) -> "TxConfig":
        if self.num_channels > 1 and self.channel_spacing < self.symbol_rate * (1.0 + self.rolloff):
            raise ValueError("channel_spacing must be at least symbol_rate*(1+rolloff)")
        if self.sample_rate < self.num_channels * self.channel_spacing:
            raise ValueError(
                f"grid of {self.sample_rate / 1e9:.1f} GHz does not cover "
                f"{self.num_channels} x {self.channel_spacing / 1e9:.1f} GHz"
            )
        n_samples = self.n_symbols * self.samples_per_symbol
        if not GridValidator.is_fft_friendly(n_samples):
            raise ValueError(f"frame of {n_samples} samples is not an FFT-friendly length")
        return self

    @property
    def sample_rate(self) -> float:
        return self.symbol_rate * self.samples_per_symbol

    @property
    def total_bandwidth(self) -> float:
        """Optical bandwidth occupied by the multiplex, Hz."""
        return self.num_channels * self.channel_spacing

    @property
    def center_channel(self) -> int:
        return (self.num_channels - 1) // 2

    def channel_offset(self, channel_index: int) -> float:
        """Carrier offset of a channel from the multiplex center, Hz."""
        return (channel_index - (self.num_channels - 1) / 2.0) * self.channel_spacing


class LinkConfig(BaseModel):
    """Link description in datasheet units"""
    model_config = ConfigDict(frozen=True)

    num_spans: int = Field(default=10, ge=0)
    span_length_km: float = Field(default=100.0, gt=0.0)
    alpha_db_per_km: float = Field(default=0.2, ge=0.0)
    dispersion_ps_nm_km: float = 17.0
    gamma_per_w_km: float = Field(default=1.2, ge=0.0)
    noise_figure_db: float = 5.0
    ase_enabled: bool = True
    steps_per_span: int = Field(default=100, ge=1)
    wavelength_nm: float = Field(default=1550.0, gt=0.0)

    def fiber_span(self) -> FiberSpan:
        return FiberSpan.from_datasheet_units(
            length_km=self.span_length_km,
            alpha_db_per_km=self.alpha_db_per_km,
            dispersion_ps_nm_km=self.dispersion_ps_nm_km,
            gamma_per_w_km=self.gamma_per_w_km,
            wavelength_m=self.wavelength_nm * 1e-9,
        )

    def amplifier(self) -> Amplifier:
        span = self.fiber_span()
        return Amplifier(
            gain=span.loss_db,
            noise_figure=self.noise_figure_db,
            ase_enabled=self.ase_enabled,
            reference_frequency=carrier_frequency(self.wavelength_nm * 1e-9),
        )

    def build_link(self, opc: bool, num_spans: Optional[int] = None) -> Link:
        """
        Assemble the simulated link

        Args:
            opc: Place ideal OPC after the middle span
            num_spans: Override the configured span count (distance sweeps)

        Returns:
            Link instance
        """
        spans = self.num_spans if num_spans is None else num_spans
        return Link.uniform(
            spans,
            self.fiber_span(),
            self.amplifier(),
            opc=opc,
            steps_per_span=self.steps_per_span,
        )


class EqualizerSettings(BaseModel):
    """Per-scheme equalizer settings"""
    model_config = ConfigDict(frozen=True)

    window_symbols: int = Field(default=512, gt=0)
    recursive_window_symbols: int = Field(default=256, gt=0)
    discard_fraction: float = Field(default=0.25, ge=0.0, lt=0.5)
    discard_symbols: Optional[int] = Field(default=None, ge=0)
    auto_window: bool = False
    calibrate_discard: bool = False
    discard_tolerance_db: float = Field(default=0.05, gt=0.0)
    dbp_steps_per_span: int = Field(default=100, ge=1)
    index_mode: IndexMode = IndexMode.CYCLIC
    wrap_windows: bool = True

    def config_for(
        self,
        scheme: Scheme,
        samples_per_symbol: int,
        window_override: Optional[int] = None,
        discard_override: Optional[int] = None,
    ) -> EqualizerConfig:
        """
        Equalizer configuration for one scheme

        Args:
            scheme: Scheme whose variant is configured
            samples_per_symbol: Oversampling of the received field
            window_override: Window from a window sweep or memory-based sizing
            discard_override: Discard found by calibration

        Returns:
            EqualizerConfig instance
        """
        if window_override is not None:
            window = window_override
        elif scheme == Scheme.VSFE_RECURSIVE:
            window = self.recursive_window_symbols
        else:
            window = self.window_symbols
        if discard_override is not None:
            discard = discard_override
        elif self.discard_symbols is not None:
            discard = min(self.discard_symbols, (window - 1) // 2)
        else:
            discard = int(math.floor(window * self.discard_fraction))
        return EqualizerConfig(
            window_symbols=window,
            samples_per_symbol=samples_per_symbol,
            discard_per_side=discard,
            variant=scheme.variant or EqualizerVariant.EDC,
            dbp_steps_per_span=self.dbp_steps_per_span,
            index_mode=self.index_mode,
            wrap_windows=self.wrap_windows,
        )


class SweepAxis(str, Enum):
    """Independent variable of a sweep"""
    POWER = "power"
    DISTANCE = "distance"


class SweepConfig(BaseModel):
    """Sweep definition"""
    model_config = ConfigDict(frozen=True)

    axis: SweepAxis = SweepAxis.POWER
    powers_dbm: List[float] = Field(default_factory=lambda: [-4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0])
    distances_km: List[float] = Field(default_factory=list)
    fixed_power_dbm: Optional[float] = None
    optimize_power: bool = False
    initial_power_dbm: float = 0.0
    windows: List[int] = Field(default_factory=list)


class StopCriterion(BaseModel):
    """Monte-Carlo stopping rule and budgets per sweep point"""
    model_config = ConfigDict(frozen=True)

    half_width_db: float = Field(default=0.05, gt=0.0)
    max_symbols: Optional[int] = Field(default=None, gt=0)
    max_wall_time_s: Optional[float] = Field(default=None, gt=0.0)


class ExperimentConfig(BaseModel):
    """Full experiment description"""
    model_config = ConfigDict(frozen=True)

    name: str = "experiment"
    tx: TxConfig = Field(default_factory=TxConfig)
    link: LinkConfig = Field(default_factory=LinkConfig)
    equalizer: EqualizerSettings = Field(default_factory=EqualizerSettings)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    schemes: List[Scheme] = Field(default_factory=lambda: list(Scheme))
    seeds: List[int] = Field(default_factory=lambda: [1])
    stop: StopCriterion = Field(default_factory=StopCriterion)
    channel_index: Optional[int] = None

    @model_validator(mode="after")
    def _consistent(self) -> "ExperimentConfig":
        if not self.seeds:
            raise ValueError("at least one seed is required")
        for distance in self.sweep.distances_km:
            spans = distance / self.link.span_length_km
            if distance <= 0 or not math.isclose(spans, round(spans), abs_tol=1e-9):
                raise ValueError(
                    f"distance {distance} km is not a positive multiple of the "
                    f"{self.link.span_length_km} km span"
                )
        if any(scheme.uses_opc_link for scheme in self.schemes):
            counts = self.span_counts()
            if any(count % 2 for count in counts):
                raise ValueError("OPC schemes need an even number of spans at every sweep point")
        if self.channel_index is not None and not 0 <= self.channel_index < self.tx.num_channels:
            raise ValueError(f"channel_index {self.channel_index} outside the multiplex")
        return self

    @property
    def needs_zeta(self) -> bool:
        return not self.link.ase_enabled

    def span_counts(self) -> List[int]:
        """Span count at every sweep point."""
        if self.sweep.axis == SweepAxis.DISTANCE:
            return [int(round(d / self.link.span_length_km)) for d in self.sweep.distances_km]
        return [self.link.num_spans]


class PointStatus(str, Enum):
    """Outcome of one sweep point"""
    SUCCESS = "success"
    ERROR = "error"
    SKIPPED = "skipped"
    PARTIAL = "partial"  # budget exhausted before the half-width target


class SweepRow(BaseModel):
    """One (scheme, power, distance, window) result"""
    scheme: Scheme
    power_dbm: float
    distance_km: float
    window_symbols: int
    discard: int
    snr_db: Optional[float] = None
    zeta_db: Optional[float] = None
    num_symbols: int = 0
    wall_time_s: float = 0.0
    seeds: List[int] = Field(default_factory=list)
    status: PointStatus = PointStatus.SUCCESS
    error_message: Optional[str] = None
    confidence_halfwidth: Optional[float] = None

    def sort_key(self):
        return (self.scheme.value, self.distance_km, self.power_dbm, self.window_symbols)


class SweepResult(BaseModel):
    """Rows of a finished (or resumed) sweep"""
    name: str = "experiment"
    rows: List[SweepRow] = Field(default_factory=list)

    def sorted(self) -> "SweepResult":
        """Canonical order: scheme, then axis values."""
        return SweepResult(name=self.name, rows=sorted(self.rows, key=SweepRow.sort_key))

    def for_scheme(self, scheme: Scheme) -> List[SweepRow]:
        return [row for row in self.rows if row.scheme == scheme]

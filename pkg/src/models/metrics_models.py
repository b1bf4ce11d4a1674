"""
Data models for performance metrics
"""

from pydantic import BaseModel, Field, model_validator


class SnrEstimate(BaseModel):
    """Data-aided SNR estimate with a 95 % confidence half-width"""
    snr_db: float
    num_symbols: int = Field(gt=0)
    confidence_halfwidth: float = Field(default=0.0, ge=0.0, description="dB")
    capped: bool = False


class ZetaRecord(BaseModel):
    """NLI suppression factor: SNR with NLC minus SNR with EDC, ASE off"""
    snr_nlc_db: float
    snr_edc_db: float
    zeta_db: float

    @model_validator(mode="after")
    def _difference(self) -> "ZetaRecord":
        if self.zeta_db != self.snr_nlc_db - self.snr_edc_db:
            raise ValueError("zeta_db must equal snr_nlc_db - snr_edc_db")
        return self

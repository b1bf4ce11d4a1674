"""
Application settings and configuration
"""

from typing import Optional
from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache


class Settings(BaseSettings):
    """Process-wide settings loaded from environment variables (prefix VAO_)"""

    # Application Settings
    app_name: str = "VAO Nonlinearity Compensation Workbench"
    debug: bool = False
    log_level: str = "INFO"
    log_file: Optional[str] = None
    enable_colors: bool = True

    # Execution
    max_workers: int = 1
    show_progress: bool = True
    kernel_chunk_size: int = 128  # q-offsets per batched convolution in the double sum

    # Results
    results_dir: str = "./results"
    deterministic_output: bool = True  # wall_time_s is zeroed in CSV; timings go to the manifest
    write_figures: bool = False

    # Estimation
    snr_cap_db: float = 80.0
    default_discard_tolerance_db: float = 0.05

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="VAO_",
        case_sensitive=False
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()

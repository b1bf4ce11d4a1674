"""
Utility modules: unit conversions, validation, exceptions and figures
"""

from .helpers import (
    dbm_to_watt,
    watt_to_dbm,
    db_to_linear,
    linear_to_db,
    dispersion_to_beta2,
    attenuation_db_to_neper,
    format_duration,
)
from .validators import (
    AliasingError,
    ConfigurationError,
    DiscardConvergenceError,
    GridValidator,
    InvalidInputError,
    ResultsIOError,
)

__all__ = [
    "dbm_to_watt",
    "watt_to_dbm",
    "db_to_linear",
    "linear_to_db",
    "dispersion_to_beta2",
    "attenuation_db_to_neper",
    "format_duration",
    "AliasingError",
    "ConfigurationError",
    "DiscardConvergenceError",
    "GridValidator",
    "InvalidInputError",
    "ResultsIOError",
]

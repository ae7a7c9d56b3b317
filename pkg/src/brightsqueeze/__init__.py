"""Noise modelling for intensity-stabilized bright squeezed light."""

__version__ = "0.1.0"

from .errors import ConfigError, DomainError, GridMismatchError, InfeasibleError, InstabilityError
from .spectra import FrequencyGrid, NoisePsd, incoherent_sum_db, rsn

__all__ = [
    "ConfigError",
    "DomainError",
    "FrequencyGrid",
    "GridMismatchError",
    "InfeasibleError",
    "InstabilityError",
    "NoisePsd",
    "incoherent_sum_db",
    "rsn",
]

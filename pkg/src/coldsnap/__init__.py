"""coldsnap: Monte-Carlo valuation of customer losses and non-energy impacts
from extreme-temperature power outages.

The pipeline: synthesize a building population, simulate per-building indoor
temperatures under a scenario's power schedules, map exposure to mortality
risk, productivity, and freeze damage, then price deaths, medical care,
lost work, repairs, and interruption costs over many probabilistic trials.
"""

__version__ = "0.1.0"

from .errors import ConfigurationError, IngestionError  # noqa: F401

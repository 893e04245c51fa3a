"""Edge statistics of interpolating random-matrix ensembles."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    AccuracyError,
    ConfigError,
    DomainError,
    IndexOutOfRange,
    NumericError,
    SamplerError,
)

__version__ = "0.1.0"

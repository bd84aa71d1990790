"""Fiber four-wave-mixing photon-pair source design toolkit."""

__version__ = "0.1.0"

from . import counting, dispersion, fbg, jsa, phasematch, units  # noqa: F401
from .errors import (  # noqa: F401
    DesignError,
    DomainError,
    EmptySpectrumError,
    FitError,
    GepcfError,
    NumericError,
    ValidationError,
)

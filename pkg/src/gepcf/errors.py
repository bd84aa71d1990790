"""Exception hierarchy.

Validation failures (bad arguments, malformed files) and domain failures
(evaluation outside a model's validity window) are kept distinct from
numeric failures (non-convergence, overflow) so callers and the CLI can
map them to different exit codes.
"""


class GepcfError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(GepcfError, ValueError):
    """Invalid argument or configuration value."""


class DomainError(ValidationError):
    """Evaluation requested outside a model's validity window."""


class FitError(GepcfError, ValueError):
    """Least-squares fit could not be performed (e.g. rank deficiency)."""


class NumericError(GepcfError, RuntimeError):
    """Root finding or numeric evaluation failed; message carries diagnostics."""


class DesignError(GepcfError, ValueError):
    """Requested design targets cannot be met; message lists the frontier."""


class EmptySpectrumError(GepcfError, ValueError):
    """A filtering operation annihilated the spectrum (all-zero result)."""

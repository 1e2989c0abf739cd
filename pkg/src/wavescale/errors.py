"""Exception taxonomy shared across the package.

The CLI maps these onto process exit codes, so library code should raise
the most specific class that applies rather than bare ValueError.
"""


class ConfigurationError(ValueError):
    """Invalid option, parameter, or configuration file contents."""


class ShapeError(ValueError):
    """Input array has an unusable shape (odd length, non-dyadic, ragged)."""


class IngestionError(ValueError):
    """A data file could not be parsed or is internally inconsistent."""


class EstimationError(RuntimeError):
    """An estimate could not be produced from the given data."""

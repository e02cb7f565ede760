"""Exception types shared across the package."""


class ToxdetectError(Exception):
    """Base class for every error this package raises on purpose."""


class SchemaError(ToxdetectError):
    """A CSV file is missing a required column (or has no header at all)."""


class DataError(ToxdetectError):
    """A data value is malformed: bad label, short row, empty id."""


class ParseError(ToxdetectError):
    """A word-vector file line could not be parsed."""


class FormatError(ToxdetectError):
    """A file does not match its declared format (magic, version, header)."""


class IntegrityError(FormatError):
    """A binary container is corrupt, truncated, or inconsistent."""


class ShapeError(ToxdetectError):
    """Array shapes or index ranges do not conform."""


class NumericError(ToxdetectError):
    """A computation produced NaN or Inf."""


class ConfigError(ToxdetectError):
    """Invalid configuration or hyperparameter value."""


class FitError(ToxdetectError):
    """fit() was called with unusable training data."""


class MetricError(ToxdetectError):
    """A metric is undefined for the given inputs."""

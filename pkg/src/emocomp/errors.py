"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
anything else -> 3.
"""


class EmocompError(Exception):
    pass


class ConfigError(EmocompError):
    """Invalid configuration value or inconsistent run setup."""


class DataError(EmocompError):
    """Malformed or missing input data."""


class CorpusFormatError(DataError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceError(DataError):
    """A feature flag was enabled but its backing resource is missing."""


class DimensionError(EmocompError):
    """Shape mismatch between tensors or feature vectors."""


class StateError(EmocompError):
    """Operation called before required fitting/training happened."""

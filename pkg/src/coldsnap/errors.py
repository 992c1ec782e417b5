"""Exception types shared across the package.

Configuration and ingestion problems map to CLI exit code 2; anything
else that escapes maps to exit code 1.
"""


class ConfigurationError(Exception):
    """Invalid configuration value, weights, paths, or parameters."""


class IngestionError(ConfigurationError):
    """A data file could not be parsed; message names file, row, and column."""

    def __init__(self, message: str, path=None, row=None, column=None):
        parts = [message]
        if path is not None:
            parts.append(f"file={path}")
        if row is not None:
            parts.append(f"row={row}")
        if column is not None:
            parts.append(f"column={column}")
        super().__init__("; ".join(str(p) for p in parts))
        self.path = path
        self.row = row
        self.column = column

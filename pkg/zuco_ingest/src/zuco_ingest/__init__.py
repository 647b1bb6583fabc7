"""Convert eye-tracking task archives into canonical JSONL bundles."""

__version__ = "0.1.0"


class IngestError(Exception):
    """Base class for converter and validator failures."""

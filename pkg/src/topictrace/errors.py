"""Exception types shared across the toolkit."""


class TopicTraceError(Exception):
    """Base class for all toolkit errors."""


class IngestError(TopicTraceError):
    """Unrecoverable problem with an input stream (bad header, reject flood)."""


class ConfigError(TopicTraceError):
    """Invalid configuration value; carries the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class AnalysisError(TopicTraceError):
    """An analysis step cannot produce a defined result."""


class TrendUndefinedError(AnalysisError):
    """Trend fit requested on a series with fewer than two nonzero years."""


class ZipfFitError(AnalysisError):
    """Rank-frequency fit is impossible (too few ranks or degenerate counts)."""


class TermhoodUndefinedError(AnalysisError):
    """Termhood requested for a unit with no per-discipline occurrences."""


class TermSelectionError(AnalysisError):
    """Term selection cannot normalize scores over the surviving units."""


class PajekFormatError(TopicTraceError):
    """Text does not parse as a Pajek .net network file."""

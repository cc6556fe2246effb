"""Exception types shared across the package."""


class GraphSketchError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(GraphSketchError):
    """Invalid sketch configuration."""


class RegressingClock(GraphSketchError):
    """An item arrived with a timestamp older than the newest subwindow."""


class EmptyPattern(GraphSketchError):
    """A subgraph query was issued with no pattern edges."""


class PathQueryDisabled(GraphSketchError):
    """A path query was issued but vertex tracking is switched off."""


class ZeroTruth(GraphSketchError):
    """Relative error is undefined when the exact answer is zero."""


class StreamFormatError(GraphSketchError):
    """A stream file line could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SnapshotError(GraphSketchError):
    """A snapshot file is truncated, corrupt, or has the wrong version."""


class OracleCapExceeded(GraphSketchError):
    """The exact reference store refused to grow past its configured cap."""

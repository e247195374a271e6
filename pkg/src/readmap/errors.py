"""Exception types shared across the pipeline."""


class ReadmapError(Exception):
    """Base class for domain errors raised by this package."""


class IngestError(ReadmapError):
    """A record stream could not be parsed or validated.

    Carries the 1-based line number of the offending record when the
    error is tied to a specific line.
    """

    def __init__(self, source: str, line: int | None, message: str):
        self.source = source
        self.line = line
        if line is None:
            super().__init__(f"{source}: {message}")
        else:
            super().__init__(f"{source} line {line}: {message}")


class LayoutError(ReadmapError):
    """Geometry could not be computed under the configured constraints."""

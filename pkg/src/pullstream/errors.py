"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


class SequencingError(ValueError):
    """A chunk was enqueued out of playback order."""


class TraceFormatError(ValueError):
    """A video trace file violates the expected grid or invariants."""

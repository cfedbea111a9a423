"""Exception types shared across the package."""

from __future__ import annotations


class PizzatruckError(Exception):
    """Base class for all domain errors raised by this package."""


class ConfigInvalid(PizzatruckError):
    """A game configuration violates one or more invariants.

    Carries the full list of violations so callers can report all of them
    at once instead of fixing one field at a time.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid config: " + "; ".join(self.problems))


class IndexOutOfRange(PizzatruckError, IndexError):
    """An order index outside the generated sequence."""


class DuplicateResponse(PizzatruckError):
    """A response was already evaluated for this order."""


class IllegalTransition(PizzatruckError):
    """An event that is not legal in the current game phase.

    The state machine rejects the event without mutating any state.
    """

    def __init__(self, phase, event):
        self.phase = phase
        self.event = event
        super().__init__(f"event {event!r} is illegal in phase {phase!r}")


class InvalidBand(PizzatruckError):
    """Band edges that do not satisfy 0 < f_low < f_high < fs/2."""


class UnstableDesign(PizzatruckError):
    """A filter design with poles on or outside the unit circle."""


class SegmentTooLong(PizzatruckError):
    """Welch segment length exceeds the epoch length."""


class BandOutOfRange(PizzatruckError):
    """Band integration limits outside the PSD frequency range."""


class NotCalibrated(PizzatruckError):
    """Classification requested before baseline calibration completed."""


class InvalidScript(PizzatruckError):
    """A workload script violating its invariants."""


class MalformedFile(PizzatruckError):
    """A recording file that cannot be parsed.

    Reports the 1-based line (and column where meaningful) of the first
    offending value.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class MissingMetadata(PizzatruckError):
    """A recording file without the required metadata comment line."""


class ConfigLocked(PizzatruckError):
    """Configuration change attempted after the session left Configuring."""


class AlreadyRunning(PizzatruckError):
    """Start requested on a session that already started."""


class LogCorrupt(PizzatruckError):
    """Session log replay diverged from the logged outbound stream."""

    def __init__(self, position, message):
        self.position = position
        super().__init__(f"log corrupt at entry {position}: {message}")


class BadMessage(PizzatruckError):
    """An inbound wire message that fails schema validation."""

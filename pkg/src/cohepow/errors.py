class CohepowError(Exception):
    """Base class for package errors."""


class EmptyWindow(CohepowError):
    """No element survived the cohesive filter; the horizon must grow."""


class Undetermined(CohepowError):
    """The window is too short to settle a parity tail."""


class IncompatibleContexts(CohepowError):
    """Power elements over different bases or cohesive windows."""


class LadderExhausted(CohepowError):
    """A representative value lies beyond the ladder built within the horizon."""


class UnsupportedBase(CohepowError):
    """The base order lacks the arithmetic a witness construction needs."""


class PreconditionFailed(CohepowError):
    """A witness construction was asked for outside its hypotheses."""


class WitnessNotFound(CohepowError):
    def __init__(self, message: str, failing: list | None = None):
        super().__init__(message)
        self.failing = failing or []


class ConfigError(CohepowError):
    """Invalid recipe or command-line configuration."""

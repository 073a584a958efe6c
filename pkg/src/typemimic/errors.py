"""Exception types shared across the package."""


class TypemimicError(Exception):
    """Base class for all package errors."""


class ValidationError(TypemimicError, ValueError):
    """A parameter value or combination is outside its allowed range."""


class StructureError(TypemimicError, ValueError):
    """A document structure's spans are inconsistent with its text."""


class PlanIntegrityError(TypemimicError, ValueError):
    """An edit plan cannot be replayed to its final text."""


class ReplayError(TypemimicError, ValueError):
    """An event trace is not applicable to a text buffer.

    Carries the index of the offending event.
    """

    def __init__(self, index: int, message: str):
        super().__init__(f"event {index}: {message}")
        self.index = index


class ConfigError(TypemimicError, ValueError):
    """A configuration file or object is invalid."""


class BackendUnavailable(TypemimicError, RuntimeError):
    """The response backend timed out or failed; the session survives."""

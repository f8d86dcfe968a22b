"""Exception types shared by every module."""


class InputError(ValueError):
    """Malformed or inconsistent arguments (dimension mismatch, disconnected image, ...)."""


class ParseError(InputError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class EmptinessError(ValueError):
    """Raised when no simple closed curve with the requested size exists."""


class ResourceLimitError(RuntimeError):
    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class SynthesisError(RuntimeError):
    """A constructed planner failed verification and no fallback repaired it."""

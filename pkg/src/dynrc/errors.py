"""Exception hierarchy shared by every dynrc module."""


class DynRCError(Exception):
    """Base class for all library errors."""


class OutOfLifetime(DynRCError):
    pass


class EmptyInterval(DynRCError):
    pass


class ParseError(DynRCError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class InvalidSpec(DynRCError):
    pass


class LimitExceeded(DynRCError):
    pass


class RepresentationMismatch(DynRCError):
    pass


class HypothesisNotSatisfied(DynRCError):
    pass


class ConfigError(DynRCError):
    pass


class InvalidParam(DynRCError):
    pass

class TandemNetError(Exception):
    """Base class for every error raised by tandem_net."""


class InvalidInputError(TandemNetError, ValueError):
    """Arguments with wrong dimensions, ranges or normalization."""


class InvalidNetworkError(InvalidInputError):
    """Decision functions whose message alphabets do not chain."""


class InfeasibleRequestError(TandemNetError):
    """A request whose search space exceeds the configured budget."""

    def __init__(self, message: str, cardinality: int) -> None:
        super().__init__(message)
        self.cardinality = cardinality


class InvariantViolationError(TandemNetError):
    """A computed result broke a library invariant."""


class ConfigError(TandemNetError):
    """Experiment config problem, anchored to a file line when known."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")

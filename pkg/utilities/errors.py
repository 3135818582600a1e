"""Exception hierarchy shared by every hankelfiber package."""

from typing import Optional


class HankelFiberError(Exception):
    """Base class for all library errors."""


class RegistryMismatchError(HankelFiberError, ValueError):
    pass


class UnassignedVariableError(HankelFiberError, KeyError):
    def __init__(self, name: str, context: str = "substitution"):
        super().__init__(name)
        self.name = name
        self.context = context

    def __str__(self):
        return f"variable {self.name} has no assignment in {self.context}"


class ShapeError(HankelFiberError, ValueError):
    pass


class ParseError(HankelFiberError, ValueError):
    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        super().__init__(message)
        self.text = text
        self.position = position

    def __str__(self):
        base = self.args[0]
        if self.position is None:
            return base
        return f"{base} at position {self.position} in {self.text!r}"


class BudgetExceededError(HankelFiberError, RuntimeError):
    """Raised when a pair, time or expansion budget runs out.

    Carries the statistics gathered up to the point of failure so callers can
    report them next to the "not-determined" status.
    """

    def __init__(self, message: str, stats: Optional[dict] = None):
        super().__init__(message)
        self.stats = dict(stats or {})


class IncompleteBasisError(HankelFiberError, RuntimeError):
    pass


class NonHomogeneousError(HankelFiberError, ValueError):
    pass


class RankCertificationError(HankelFiberError, RuntimeError):
    pass


class ConfigError(HankelFiberError, ValueError):
    pass

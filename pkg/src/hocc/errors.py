"""Exception hierarchy."""

from __future__ import annotations


class HoccError(Exception):
    """Base class for every error raised by the package."""


class IllTyped(HoccError):
    def __init__(self, message: str, position: str = ""):
        super().__init__(f"ill-typed at {position or 'ε'}: {message}")
        self.position = position


class BadPosition(HoccError):
    def __init__(self, position: str):
        super().__init__(f"no subterm at position {position or 'ε'}")
        self.position = position


class FuelExhausted(HoccError):
    def __init__(self, term, steps: int):
        super().__init__(f"no normal form reached after {steps} steps")
        self.term = term
        self.steps = steps


class ParseError(HoccError):
    def __init__(self, message: str, line: int, col: int, kind: str = "ParseError"):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.kind = kind


class SystemInvalid(HoccError):
    """Raised by validation with every problem found."""

    def __init__(self, problems: list[tuple[str, str]]):
        super().__init__("; ".join(f"{kind}: {msg}" for kind, msg in problems))
        self.problems = problems

    @property
    def kinds(self) -> set[str]:
        return {kind for kind, _ in self.problems}


class NotBaseCodomain(HoccError):
    pass


class Unsatisfiable(HoccError):
    def __init__(self, symbol: str, index: int):
        super().__init__(f"no base order makes argument {index} of {symbol} positive")
        self.symbol = symbol
        self.index = index


class LengthMismatch(HoccError):
    pass


class FilterOutOfRange(HoccError):
    pass


class ConfigInvalid(HoccError):
    pass


class BoundExceeded(HoccError):
    pass


class NotAPattern(HoccError):
    def __init__(self, position: str):
        super().__init__(f"not a pattern at position {position or 'ε'}")
        self.position = position


class InvalidValuation(HoccError):
    pass


class DepthExceeded(HoccError):
    pass


class BadEquationShape(HoccError):
    pass


class CertificateError(HoccError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"node {path or 'root'}: {reason}")
        self.path = path
        self.reason = reason

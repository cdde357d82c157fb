"""Domain errors raised by the library.

Every error carries a stable machine-readable ``code`` so the CLI can emit
``{"error": code, "detail": ...}`` objects without string matching.
"""


class WeylFanError(Exception):
    """Base class for all domain errors."""

    code = "Error"

    def __init__(self, detail=""):
        super().__init__(detail)
        self.detail = detail


class NotUnimodular(WeylFanError):
    code = "NotUnimodular"


class UnsupportedFamily(WeylFanError):
    code = "UnsupportedFamily"


class NotInSpan(WeylFanError):
    code = "NotInSpan"


class NotRootSpan(WeylFanError):
    code = "NotRootSpan"


class NotSurjective(WeylFanError):
    code = "NotSurjective"


class MissingPair(WeylFanError):
    code = "MissingPair"


class NoChartFound(WeylFanError):
    code = "NoChartFound"


class NotPreorder(WeylFanError):
    code = "NotPreorder"


class EmptyKeep(WeylFanError):
    code = "EmptyKeep"


class InconsistentPL(WeylFanError):
    code = "InconsistentPL"

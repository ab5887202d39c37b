"""Exception hierarchy shared by every gabp module.

Each error carries the module that raised it and the process exit code the
CLI should use: 2 for bad input, 3 for numeric failures.
"""

from typing import Optional, Sequence


class GabpError(Exception):
    """Base class for all toolkit errors"""

    module = "gabp"
    exit_code = 1

    def __init__(self, message: str, issues: Optional[Sequence[str]] = None,
                 module: Optional[str] = None):
        super().__init__(message.strip())
        self.issues = list(issues or [])
        if module:
            self.module = module

    def qualified(self) -> str:
        """Message prefixed with the module name, as printed by the CLI"""
        return f"{self.module}: {self}"


class InputError(GabpError):
    exit_code = 2


class NumericError(GabpError):
    exit_code = 3


class ConfigError(InputError):
    module = "config"


# ingest

class MalformedRow(InputError):
    module = "ingest"

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


class DuplicateDate(InputError):
    module = "ingest"


class NonMonotonicDate(InputError):
    module = "ingest"


class SchemaMismatch(InputError):
    module = "ingest"


class EdgeGap(InputError):
    module = "ingest"


class DegenerateColumn(NumericError):
    module = "ingest"


# stats

class SeriesTooShort(InputError):
    module = "stats"


class DegenerateSeries(NumericError):
    module = "stats"


class SingularRegression(NumericError):
    module = "stats"


# features

class NonPositivePrice(InputError):
    module = "features"


class WindowTooLarge(InputError):
    module = "features"


class InsufficientRows(InputError):
    module = "features"


class ConstantFeature(NumericError):
    module = "features"


class DegenerateRange(NumericError):
    module = "features"


# network

class LengthMismatch(InputError):
    module = "network"


class DimensionMismatch(InputError):
    module = "network"


class NonFiniteLoss(NumericError):
    module = "network"


class ModelParseError(InputError):
    module = "network"


# metrics

class EmptyInput(InputError):
    module = "metrics"


# synth

class NonStationary(InputError):
    module = "synth"

"""
Exception hierarchy shared by the engine, the verification suites and the CLI
"""

from typing import Any, Optional, Sequence, Tuple


class DunklkitError(Exception):
    """Base class for every error raised by dunklkit"""

    exit_code = 1


class DomainError(DunklkitError, ValueError):
    """A parameter lies outside the domain of the operation"""

    exit_code = 2


class RootSystemValidationError(DomainError):
    """The supplied vectors do not form a reduced root system"""

    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.pair = pair


class GroupClosureError(DomainError):
    """Reflection closure did not terminate below the configured cap"""


class SymbolicPathUnavailable(DomainError):
    """Exact arithmetic is impossible for this system; use numeric evaluation"""


class RefusedInputError(DomainError):
    """Input is well-formed but a stated precondition does not hold"""


class NumericalFailure(DunklkitError):
    """A numerical procedure failed to converge within its budget"""

    def __init__(self, message: str, estimates: Sequence[float] = ()):
        super().__init__(message)
        self.estimates = tuple(float(e) for e in estimates)


class PoisonedIntegralError(NumericalFailure):
    """An integrand returned NaN or infinity at a quadrature node"""

    def __init__(self, message: str, node: Any = None):
        super().__init__(message)
        self.node = node


class KernelOverflowError(NumericalFailure):
    """exp(Re<x,z>) overflows double precision; rescale x or z"""


class InternalConsistencyError(DunklkitError):
    """Two exact computations that must agree did not (arithmetic bug)"""


class CheckFailure(DunklkitError):
    """A verification oracle rejected the computed values"""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.details = details or {}


class ConfigError(DunklkitError):
    """The experiment configuration could not be parsed or validated"""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class ReportIOError(DunklkitError):
    """A report could not be written"""

    exit_code = 3

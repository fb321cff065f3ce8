"""
Verification harness: suite SDK and factory
"""

from .suite_factory import SuiteFactory
from .suite_sdk import (
    BaseSuite,
    CheckResult,
    CheckTask,
    SuiteCapabilities,
    SuiteContext,
    SuiteReport,
    require,
    run_parallel,
)

__all__ = [
    "BaseSuite",
    "CheckResult",
    "CheckTask",
    "SuiteCapabilities",
    "SuiteContext",
    "SuiteFactory",
    "SuiteReport",
    "require",
    "run_parallel",
]

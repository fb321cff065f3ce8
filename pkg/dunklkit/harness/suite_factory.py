"""
Suite factory: maps `verify` names to suite classes
"""

import logging
from typing import Dict, List, Optional, Type

from .suite_sdk import BaseSuite, SuiteContext, SuiteReport

logger = logging.getLogger(__name__)


class SuiteFactory:
    """Factory for creating verification suites"""

    def __init__(self):
        self.registered_types: Dict[str, Type[BaseSuite]] = {}
        self._register_builtin_suites()

    def _register_builtin_suites(self):
        from ..suites import BUILTIN_SUITES

        for name, suite_class in BUILTIN_SUITES.items():
            self.register_suite_type(name, suite_class)
        logger.debug(f"Registered built-in suites: {sorted(self.registered_types)}")

    def register_suite_type(self, name: str, suite_class: Type[BaseSuite]):
        if not issubclass(suite_class, BaseSuite):
            raise ValueError("Suite class must inherit from BaseSuite")
        self.registered_types[name] = suite_class

    @property
    def names(self) -> List[str]:
        return list(self.registered_types)

    def create_suite(self, name: str, context: Optional[SuiteContext] = None) -> BaseSuite:
        if name not in self.registered_types:
            raise ValueError(f"Unknown suite: {name}")
        try:
            return self.registered_types[name](context=context)
        except Exception as e:
            logger.error(f"Failed to create suite {name}: {e}")
            raise

    def run(self, name: str, context: Optional[SuiteContext] = None, threads: int = 1) -> List[SuiteReport]:
        """Run one suite, or every registered suite in registration order for 'all'"""
        names = self.names if name == "all" else [name]
        return [self.create_suite(n, context).run(threads) for n in names]


__all__ = ["SuiteFactory"]

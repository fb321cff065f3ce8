"""
Verification suites, one per `verify` name
"""

from .area import AreaSuite
from .boundary import BoundarySuite
from .means import MeansSuite
from .poisson import PoissonSuite
from .symbolic import SymbolicSuite
from .translation import TranslationSuite

BUILTIN_SUITES = {
    "symbolic": SymbolicSuite,
    "translation": TranslationSuite,
    "poisson": PoissonSuite,
    "means": MeansSuite,
    "area": AreaSuite,
    "boundary": BoundarySuite,
}

__all__ = [
    "AreaSuite",
    "BUILTIN_SUITES",
    "BoundarySuite",
    "MeansSuite",
    "PoissonSuite",
    "SymbolicSuite",
    "TranslationSuite",
]

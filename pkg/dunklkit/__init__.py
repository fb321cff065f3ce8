"""
dunklkit: harmonic analysis for Dunkl operators

Root systems and reflection groups, an exact polynomial ring with Dunkl operators,
weighted quadrature, the intertwining operator and generalized translations, spherical
means, the Dunkl-Poisson integral, cone area integrals and boundary-behaviour probes,
plus the verification suites and experiments that exercise them.
"""

from .area import AreaBudget, AreaResult, ConeSpec, area_integral, area_integral_psi, sandwich_residual
from .boundary import fatou_table, green_residual, nt_limit_probe
from .config import ExperimentConfig
from .dunklops import HarmonicField, dunkl_apply, dunkl_laplacian, harmonic_basis, is_harmonic
from .errors import (
    CheckFailure,
    ConfigError,
    DomainError,
    DunklkitError,
    NumericalFailure,
    ReportIOError,
)
from .intertwine import TranslationEvaluator, dunkl_kernel_eval, intertwine_apply, translate_point
from .means import SphericalMeanEvaluator, spherical_mean
from .poisson import BoundaryDatum, PoissonBacked, poisson_integral, poisson_kernel
from .polyring import Poly, parse_poly
from .rootsys import RootSystemData, build_root_system, type_a, type_b, z2d

__version__ = "0.3.0"

__all__ = [
    "AreaBudget",
    "AreaResult",
    "BoundaryDatum",
    "CheckFailure",
    "ConeSpec",
    "ConfigError",
    "DomainError",
    "DunklkitError",
    "ExperimentConfig",
    "HarmonicField",
    "NumericalFailure",
    "PoissonBacked",
    "Poly",
    "ReportIOError",
    "RootSystemData",
    "SphericalMeanEvaluator",
    "TranslationEvaluator",
    "area_integral",
    "area_integral_psi",
    "build_root_system",
    "dunkl_apply",
    "dunkl_kernel_eval",
    "dunkl_laplacian",
    "fatou_table",
    "green_residual",
    "harmonic_basis",
    "intertwine_apply",
    "is_harmonic",
    "nt_limit_probe",
    "parse_poly",
    "poisson_integral",
    "poisson_kernel",
    "sandwich_residual",
    "spherical_mean",
    "translate_point",
    "type_a",
    "type_b",
    "z2d",
    "__version__",
]

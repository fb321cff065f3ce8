"""
Generalized spherical means, the mean-value residual and the Darboux-type identity
"""

import logging
from typing import Any, Callable, Sequence, Union

import numpy as np
from scipy.special import roots_laguerre

from .dunklops import HarmonicField, dunkl_laplacian
from .errors import DomainError
from .intertwine import TranslationEvaluator
from .polyring import Poly
from .quadrature import sphere_rule
from .rootsys import sphere_weight_mass, z2d

logger = logging.getLogger(__name__)

VectorFunction = Callable[[np.ndarray], np.ndarray]


class SphericalMeanEvaluator:
    """M_f(x, r) = d_kappa * integral over the unit sphere of (tau_x f)(r t') W_kappa(t') dt'

    The sphere rule carries the normalized weight, so d_kappa never enters a sum; it is
    exposed as ``normalization`` for reports.
    """

    def __init__(self, lambdas: Sequence[float], n_sphere: int = 16, n_jacobi: int = 64):
        self.translator = TranslationEvaluator(lambdas, n_jacobi)
        self.lambdas = self.translator.lambdas
        self.rule = sphere_rule(self.lambdas, n_sphere)

    @property
    def dim(self) -> int:
        return len(self.lambdas)

    @property
    def normalization(self) -> float:
        """d_kappa, the inverse of the W_kappa-mass of the unit sphere"""
        return 1.0 / sphere_weight_mass(self.lambdas)

    def mean(self, f: VectorFunction, x: Any, r: float) -> float:
        if r < 0:
            raise DomainError(f"radius must be nonnegative, got {r}")
        values = self.translator.translate_point(x, f, r * self.rule.nodes)
        return float(self.rule.apply(values))

    def means(self, f: VectorFunction, x: Any, radii: Sequence[float]) -> np.ndarray:
        """M_f(x, r) for several radii with a single translation call"""
        radii = np.asarray(radii, dtype=float)
        if np.any(radii < 0):
            raise DomainError("radii must be nonnegative")
        targets = (radii[:, None, None] * self.rule.nodes[None, :, :]).reshape(-1, self.dim)
        values = self.translator.translate_point(x, f, targets).reshape(len(radii), -1)
        return np.sum(values * self.rule.weights[None, :], axis=1)


def spherical_mean(
    lambdas: Sequence[float], f: VectorFunction, x: Any, r: float,
    n_sphere: int = 16, n_jacobi: int = 64,
) -> float:
    return SphericalMeanEvaluator(lambdas, n_sphere, n_jacobi).mean(f, x, r)


def _augmented(u: Union[HarmonicField, Poly, VectorFunction], d: int) -> VectorFunction:
    """u as a function of stacked points (..., d+1)"""
    if isinstance(u, Poly):
        if not u.has_y or u.dim != d:
            raise DomainError("polynomial must live in (x1..xd, y)")
        return u.evaluate_array
    if isinstance(u, HarmonicField):
        return lambda pts: u.evaluate(pts[..., :d], pts[..., d])
    return u


def spherical_mean_field(
    lambdas: Sequence[float],
    u: Union[HarmonicField, Poly, VectorFunction],
    x: Any,
    y: float,
    r: float,
    n_sphere: int = 16,
    n_jacobi: int = 64,
) -> float:
    """Mean of u over the sphere of radius r about (x, y) in R^(d+1) with multiplicity (kappa, 0)"""
    lams = tuple(float(v) for v in lambdas)
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    center = np.concatenate([xv, [float(y)]])
    evaluator = SphericalMeanEvaluator(lams + (0.0,), n_sphere, n_jacobi)
    return evaluator.mean(_augmented(u, len(lams)), center, r)


def mean_value_residual(
    lambdas: Sequence[float],
    u: Union[HarmonicField, Poly, VectorFunction],
    x: Any,
    y: float,
    r: float,
    n_sphere: int = 16,
    n_jacobi: int = 64,
) -> float:
    """|M_u((x, y), r) - u(x, y)|; the ball must stay inside the half-space (r < y)"""
    if y <= 0:
        raise DomainError(f"center height must be positive, got {y}")
    if not 0 <= r < y:
        raise DomainError(f"sphere of radius {r} about height {y} leaves the half-space")
    lams = tuple(float(v) for v in lambdas)
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    g = _augmented(u, len(lams))
    center_value = float(np.asarray(g(np.concatenate([xv, [float(y)]])[None, :]))[0])
    mean = spherical_mean_field(lams, g, xv, y, r, n_sphere, n_jacobi)
    return abs(mean - center_value)


def darboux_residual(
    lambdas: Sequence[float],
    f: Poly,
    x: Any,
    r: float,
    n_sphere: int = 16,
    n_jacobi: int = 64,
    n_laguerre: int = 64,
) -> float:
    """|M_f(x,r) - f(x) - int_0^r s^(1-N) int_0^s v^(N-1) M_{Delta f}(x,v) dv ds|, N = 2|lambda| + d

    The double integral equals r^2 int_0^inf e^(-2u) phi(u) M_{Delta f}(x, r e^(-u)) du with
    phi(u) = (1 - e^(-(N-2)u))/(N-2) (phi(u) = u when N = 2), computed by Gauss-Laguerre
    in v = mu*u, mu = min(2, N).
    """
    lams = tuple(float(v) for v in lambdas)
    if f.has_y or f.dim != len(lams):
        raise DomainError("f must be a polynomial in x1..xd only")
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r}")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    evaluator = SphericalMeanEvaluator(lams, n_sphere, n_jacobi)
    lap = dunkl_laplacian(z2d(lams), f)
    N = 2.0 * sum(lams) + len(lams)
    mu = min(2.0, N)
    v, w = roots_laguerre(n_laguerre)
    u = v / mu
    if abs(N - 2.0) < 1e-14:
        phi = u
    else:
        phi = -np.expm1(-(N - 2.0) * u) / (N - 2.0)
    inner = evaluator.means(lap.evaluate_array, xv, r * np.exp(-u))
    correction = r * r / mu * float(np.sum(w * np.exp(v - 2.0 * u) * phi * inner))
    mean = evaluator.mean(f.evaluate_array, xv, r)
    center = float(f.evaluate_array(xv[None, :])[0])
    residual = abs(mean - center - correction)
    logger.debug(f"darboux_residual: M={mean!r} f(x)={center!r} correction={correction!r}")
    return residual


__all__ = [
    "SphericalMeanEvaluator",
    "darboux_residual",
    "mean_value_residual",
    "spherical_mean",
    "spherical_mean_field",
]

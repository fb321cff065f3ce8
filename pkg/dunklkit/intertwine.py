"""
Z_2^d intertwining operator, Dunkl kernel and generalized translations

mu_x is represented as the image of the product measure dm_lambda_1 x ... x dm_lambda_d
under xi_j = x_j * theta_j. Translations come in two forms: the iterated rank-one
formula for arbitrary f, and the mu_x integral for radial f.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, List, Sequence, Tuple

import numpy as np
from scipy.special import betainc

from .errors import DomainError, KernelOverflowError, PoisonedIntegralError
from .polyring import Poly
from .quadrature import QuadratureRule, jacobi_constant, jacobi_rule, tensor_rule

logger = logging.getLogger(__name__)

VectorFunction = Callable[[np.ndarray], np.ndarray]
RadialProfile = Callable[[np.ndarray], np.ndarray]

OVERFLOW_EXPONENT = 700.0
# cap on points evaluated per vectorized chunk
CHUNK_POINTS = 1 << 20


def _lambdas(values: Sequence[float]) -> Tuple[float, ...]:
    lams = tuple(float(v) for v in values)
    if not lams:
        raise DomainError("need at least one multiplicity")
    if any(v < 0 for v in lams):
        raise DomainError(f"multiplicities must be nonnegative, got {lams}")
    return lams


def _finite(values: np.ndarray, where: Any) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise PoisonedIntegralError(f"integrand is not finite near {where!r}", node=where)
    return values


@dataclass(frozen=True, eq=False)
class ProductMeasureRep:
    """dmu_x as weighted nodes xi = (x_1 theta_1, ..., x_d theta_d)"""

    x: np.ndarray
    rule: QuadratureRule

    @property
    def points(self) -> np.ndarray:
        return self.rule.nodes * self.x[None, :]

    @property
    def weights(self) -> np.ndarray:
        return self.rule.weights

    @property
    def mass(self) -> float:
        return self.rule.mass

    @property
    def support_box(self) -> List[Tuple[float, float]]:
        return [(-abs(v), abs(v)) for v in self.x]


class TranslationEvaluator:
    """Product-Jacobi representation of mu_x^lambda and tau_x for Z_2^d"""

    def __init__(self, lambdas: Sequence[float], n: int = 64):
        self.lambdas = _lambdas(lambdas)
        self.n = int(n)
        self.rules = [jacobi_rule(lam, self.n) for lam in self.lambdas]
        self._tensor = tensor_rule(self.rules)
        # lambda_j = 0 coordinates are classical shifts: fixed sign, no mirrored evaluation
        self._classical = np.array([lam == 0 for lam in self.lambdas])
        signs = np.array(list(np.ndindex(*([2] * self.dim)))) * -2.0 + 1.0
        keep = np.all(signs[:, self._classical] > 0, axis=1)
        self._signs = signs[keep]

    @property
    def dim(self) -> int:
        return len(self.lambdas)

    @property
    def kappa_total(self) -> float:
        return float(sum(self.lambdas))

    def _point(self, x: Any) -> np.ndarray:
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        if xv.shape != (self.dim,):
            raise DomainError(f"point has shape {xv.shape}, expected ({self.dim},)")
        return xv

    def _targets(self, t: Any) -> np.ndarray:
        # scalars and 1-d arrays are many targets when d = 1, a single target otherwise
        tv = np.asarray(t, dtype=float)
        if tv.ndim <= 1:
            tv = tv.reshape(-1, 1) if self.dim == 1 else tv.reshape(1, -1)
        if tv.shape[-1] != self.dim:
            raise DomainError(f"targets have {tv.shape[-1]} coordinates, expected {self.dim}")
        return tv.reshape(-1, self.dim)

    def measure(self, x: Any) -> ProductMeasureRep:
        return ProductMeasureRep(x=self._point(x), rule=self._tensor)

    def intertwine(self, f: VectorFunction, x: Any) -> float:
        """V_lambda f(x) = integral of f(x_1 theta_1, ..., x_d theta_d) dm_lambda(theta)"""
        rep = self.measure(x)
        values = _finite(np.asarray(f(rep.points)), tuple(rep.x))
        return np.sum(rep.weights * values)

    def kernel(self, x: Any, z: Any) -> complex:
        """E_lambda(x, z) as the product of one-dimensional integrals of exp(x_j theta z_j)"""
        xv = self._point(x)
        zv = np.atleast_1d(np.asarray(z, dtype=complex))
        if zv.shape != (self.dim,):
            raise DomainError(f"z has shape {zv.shape}, expected ({self.dim},)")
        exponent = float(np.sum(np.abs(xv * zv.real)))
        if exponent > OVERFLOW_EXPONENT:
            raise KernelOverflowError(
                f"|Re<x,z>| bound {exponent:.1f} overflows double precision; rescale x or z",
                estimates=(exponent,),
            )
        value = 1.0 + 0.0j
        for j, rule in enumerate(self.rules):
            value *= np.sum(rule.weights * np.exp(xv[j] * zv[j] * rule.nodes))
        return complex(value)

    def translate_point(self, x: Any, f: VectorFunction, t: Any) -> np.ndarray:
        """(tau_x f)(t) by iterating the rank-one formula over the coordinates

            (tau_{x_i} f)(t_i) = int [f_e(B) + f_o(B)(x_i + t_i)/B] dm_lambda_i,
            B = sqrt(x_i^2 + t_i^2 + 2 x_i t_i theta_i)

        Even and odd parts are taken by evaluating f at ±B. ``t`` may hold many targets
        (shape (M, d)); the result has shape (M,).
        """
        xv = self._point(x)
        targets = self._targets(t)
        theta = self._tensor.nodes
        weights = self._tensor.weights
        signs = self._signs
        per_target = len(weights) * len(signs)
        chunk = max(1, CHUNK_POINTS // per_target)
        out = np.empty(len(targets))
        for start in range(0, len(targets), chunk):
            tt = targets[start:start + chunk]
            B2 = xv ** 2 + tt[:, None, :] ** 2 + 2.0 * xv * tt[:, None, :] * theta[None, :, :]
            B = np.sqrt(np.maximum(B2, 0.0))
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(B > 1e-300, (xv + tt[:, None, :]) / B, 0.0)
            if np.any(self._classical):
                shifted = np.broadcast_to(xv + tt[:, None, :], B.shape)
                B = np.where(self._classical, shifted, B)
                ratio = np.where(self._classical, 1.0, ratio)
            points = signs[None, None, :, :] * B[:, :, None, :]
            coeff = np.prod(0.5 * (1.0 + signs[None, None, :, :] * ratio[:, :, None, :]), axis=-1)
            values = _finite(np.asarray(f(points), dtype=float), (tuple(xv), tt[0].tolist()))
            out[start:start + chunk] = np.sum(np.sum(coeff * values, axis=2) * weights, axis=1)
        return out

    def translate_radial(self, x: Any, f0: RadialProfile, t: Any) -> np.ndarray:
        """(tau_x f)(t) for f(x) = f0(|x|): integral of f0(sqrt(|x|^2 + |t|^2 + 2<t, xi>)) dmu_x(xi)"""
        rep = self.measure(x)
        xi = rep.points
        targets = self._targets(t)
        chunk = max(1, CHUNK_POINTS // len(rep.weights))
        out = np.empty(len(targets))
        base = float(rep.x @ rep.x)
        for start in range(0, len(targets), chunk):
            tt = targets[start:start + chunk]
            r2 = base + np.sum(tt * tt, axis=1)[:, None] + 2.0 * tt @ xi.T
            values = _finite(
                np.asarray(f0(np.sqrt(np.maximum(r2, 0.0))), dtype=float), (tuple(rep.x), tt[0].tolist())
            )
            out[start:start + chunk] = np.sum(values * rep.weights[None, :], axis=1)
        return out


def intertwine_apply(lambdas: Sequence[float], f: VectorFunction, x: Any, n: int = 64) -> float:
    return float(np.real_if_close(TranslationEvaluator(lambdas, n).intertwine(f, x)))


def dunkl_kernel_eval(lambdas: Sequence[float], x: Any, z: Any, n: int = 64) -> complex:
    return TranslationEvaluator(lambdas, n).kernel(x, z)


def translate_point(
    lambdas: Sequence[float], x: Any, f: VectorFunction, t: Any, n: int = 64
) -> np.ndarray:
    return TranslationEvaluator(lambdas, n).translate_point(x, f, t)


def translate_radial(
    lambdas: Sequence[float], x: Any, f0: RadialProfile, t: Any, n: int = 64
) -> np.ndarray:
    return TranslationEvaluator(lambdas, n).translate_radial(x, f0, t)


def measure_tail(lam: float, c: float) -> float:
    """m_lambda{theta > c} = I_{(1-c)/2}(lambda, lambda) + c_lambda (1 - c^2)^lambda / (2 lambda)"""
    if lam < 0:
        raise DomainError(f"multiplicity must be nonnegative, got {lam}")
    if c >= 1.0:
        return 0.0
    if lam == 0:
        return 1.0
    if c <= -1.0:
        return 1.0
    return float(
        betainc(lam, lam, (1.0 - c) / 2.0) + jacobi_constant(lam) * (1.0 - c * c) ** lam / (2.0 * lam)
    )


@dataclass
class DensityEntry:
    x: Tuple[float, ...]
    delta: float
    measure: float
    comparator: float

    @property
    def ratio(self) -> float:
        return self.measure / self.comparator


@dataclass
class DensityBoundReport:
    lambdas: Tuple[float, ...]
    entries: List[DensityEntry]

    @property
    def min_ratio(self) -> float:
        return min(e.ratio for e in self.entries)

    @property
    def max_ratio(self) -> float:
        return max(e.ratio for e in self.entries)


def cap_measure(lambdas: Sequence[float], x: Any, delta: float, n: int = 64) -> float:
    """mu_x{xi : <x, xi> > |x|^2 - delta^2}, i.e. sum_j x_j^2 (1 - theta_j) < delta^2

    The last coordinate is integrated in closed form with measure_tail, the others by
    product Jacobi quadrature.
    """
    lams = _lambdas(lambdas)
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    d = len(lams)
    last = xv[-1] ** 2

    def inner(budget: np.ndarray) -> np.ndarray:
        out = np.zeros_like(budget)
        positive = budget > 0
        if last == 0:
            out[positive] = 1.0
            return out
        for k in np.flatnonzero(positive):
            out[k] = measure_tail(lams[-1], 1.0 - budget[k] / last)
        return out

    if d == 1:
        return float(inner(np.array([delta * delta]))[0])
    outer = tensor_rule([jacobi_rule(lam, n) for lam in lams[:-1]])
    used = np.sum(xv[:-1] ** 2 * (1.0 - outer.nodes), axis=1)
    return float(np.sum(outer.weights * inner(delta * delta - used)))


def density_bound_probe(
    lambdas: Sequence[float],
    xs: Sequence[Any],
    deltas: Sequence[float],
    n: int = 64,
) -> DensityBoundReport:
    """mu_x{<x,xi> > |x|^2 - delta^2} against delta^(2|lambda|+d) / |B(x, delta)|_lambda over a grid"""
    from .rootsys import ball_measure, z2d

    lams = _lambdas(lambdas)
    rs = z2d(lams)
    d = len(lams)
    entries = []
    for x in xs:
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        for delta in deltas:
            measure = cap_measure(lams, xv, delta, n)
            comparator = delta ** (2 * sum(lams) + d) / ball_measure(rs, xv, delta)
            entries.append(DensityEntry(tuple(xv.tolist()), float(delta), measure, comparator))
    report = DensityBoundReport(lambdas=lams, entries=entries)
    logger.info(f"density_bound_probe: {len(entries)} points, min ratio {report.min_ratio:.6g}")
    return report


def kernel_eigen_residual(
    lambdas: Sequence[float], x: Any, z: Any, step: float = 1e-5, n: int = 64
) -> float:
    """max_j |D_j E(., z)(x) - z_j E(x, z)| relative to |E(x, z)| for real x off the hyperplanes"""
    ev = TranslationEvaluator(lambdas, n)
    xv = ev._point(x)
    zv = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(xv == 0):
        raise DomainError("x must lie off the coordinate hyperplanes")
    base = ev.kernel(xv, zv).real
    h = step * max(1.0, float(np.max(np.abs(xv))))
    worst = 0.0
    for j, lam in enumerate(ev.lambdas):
        e = np.zeros(ev.dim)
        e[j] = h
        derivative = (ev.kernel(xv + e, zv).real - ev.kernel(xv - e, zv).real) / (2 * h)
        flipped = xv.copy()
        flipped[j] = -flipped[j]
        reflection = lam * (base - ev.kernel(flipped, zv).real) / xv[j]
        worst = max(worst, abs(derivative + reflection - zv[j] * base))
    return worst / max(abs(base), 1e-300)


def dunkl_laplacian_numeric(
    lambdas: Sequence[float], g: Callable[[np.ndarray], np.ndarray], t: Any, step: float = 1e-3
) -> float:
    """Delta_lambda g(t) in R^d by central differences plus exact reflection differences"""
    lams = _lambdas(lambdas)
    tv = np.atleast_1d(np.asarray(t, dtype=float))
    h = step * max(1.0, float(np.max(np.abs(tv))))
    center = float(g(tv[None, :])[0])
    total = 0.0
    for j, lam in enumerate(lams):
        e = np.zeros(len(lams))
        e[j] = h
        plus = float(g((tv + e)[None, :])[0])
        minus = float(g((tv - e)[None, :])[0])
        total += (plus - 2 * center + minus) / (h * h)
        if lam:
            if tv[j] == 0:
                raise DomainError("t must lie off the coordinate hyperplanes")
            flipped = tv.copy()
            flipped[j] = -flipped[j]
            mirror = float(g(flipped[None, :])[0])
            first = (plus - minus) / (2 * h)
            total += 2 * lam * (first / tv[j] - (center - mirror) / (2 * tv[j] ** 2))
    return total


def translation_laplacian_residual(
    lambdas: Sequence[float], f: Poly, x: Any, t: Any, n: int = 64, step: float = 1e-3
) -> float:
    """|tau_x(Delta_lambda f)(t) - Delta_lambda^t (tau_x f)(t)| for a polynomial f in x1..xd"""
    from .dunklops import dunkl_laplacian
    from .rootsys import z2d

    lams = _lambdas(lambdas)
    if f.has_y or f.dim != len(lams):
        raise DomainError("f must be a polynomial in x1..xd only")
    ev = TranslationEvaluator(lams, n)
    lap = dunkl_laplacian(z2d(lams), f)
    lhs = float(ev.translate_point(x, lap.evaluate_array, np.atleast_1d(np.asarray(t, dtype=float)))[0])

    def translated(points: np.ndarray) -> np.ndarray:
        return ev.translate_point(x, f.evaluate_array, points)

    rhs = dunkl_laplacian_numeric(lams, translated, t, step)
    return abs(lhs - rhs)


__all__ = [
    "DensityBoundReport",
    "DensityEntry",
    "ProductMeasureRep",
    "TranslationEvaluator",
    "cap_measure",
    "density_bound_probe",
    "dunkl_kernel_eval",
    "dunkl_laplacian_numeric",
    "intertwine_apply",
    "kernel_eigen_residual",
    "measure_tail",
    "translate_point",
    "translate_radial",
    "translation_laplacian_residual",
]

"""
Truncated cones, the smooth cutoff psi and the Lusin-type area integrals

S_{a,h}u(x)^2 = d^(-1) int_0^h int_0^{ay} M_{Delta_kappa u^2(., y)}(x, r) (r/y)^(N-1) dr dy
S^psi_{a,h}u(x)^2 = int_0^h int (Delta_kappa u^2)(t, y) (tau_{-x/ay} psi)(t/ay) y^(1-N) dw(t) dy

with N = 2|kappa| + d. Inside this module dw is the coordinate weight prod |t_j|^(2 lambda_j) dt
and d^(-1) its unit-sphere mass, so that S = 1 for u = y, d = 1, lambda = 1/2, a = h = 1.
The y-integral is truncated at delta = h 4^(-k) and refined in k.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Chebyshev

from .dunklops import HarmonicField
from .errors import CheckFailure, DomainError, NumericalFailure
from .intertwine import TranslationEvaluator
from .means import SphericalMeanEvaluator
from .quadrature import beta_rule, coordinate_sphere_mass, gauss_legendre, tensor_rule, weighted_panels

logger = logging.getLogger(__name__)

CONSTANT_CONVENTION = (
    "S^2 = d^-1 int int M(x,r) (r/y)^(2|kappa|+d-1) dr dy with dw = prod|t_j|^(2 lambda_j) dt "
    "and d^-1 = int_{S^(d-1)} prod|t_j|^(2 lambda_j)"
)

FINITE = "finite"
INFINITE = "infinite"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ConeSpec:
    """Gamma_a^h(x) = {(t, y): |t - x| < a y, 0 < y < h}"""

    vertex: Tuple[float, ...]
    aperture: float
    height: float

    def __post_init__(self):
        if not self.aperture > 0 or not self.height > 0:
            raise DomainError(f"cone needs a > 0 and h > 0, got a={self.aperture}, h={self.height}")
        object.__setattr__(self, "vertex", tuple(float(v) for v in np.atleast_1d(self.vertex)))

    @property
    def dim(self) -> int:
        return len(self.vertex)

    def contains(self, t: Any, y: Any) -> np.ndarray:
        tv = np.asarray(t, dtype=float)
        if self.dim == 1 and (tv.ndim == 0 or tv.shape[-1] != 1):
            tv = tv[..., None]
        yv = np.asarray(y, dtype=float)
        dist = np.linalg.norm(tv - np.asarray(self.vertex), axis=-1)
        return (yv > 0) & (yv < self.height) & (dist < self.aperture * yv)

    def widened(self, factor: float) -> "ConeSpec":
        return ConeSpec(self.vertex, self.aperture * factor, self.height)


def _bump(t: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)


def _bridge(r: Any) -> np.ndarray:
    rv = np.asarray(r, dtype=float)
    left = _bump(1.0 - rv)
    right = _bump(rv - 0.5)
    return left / (left + right)


@dataclass(frozen=True)
class CutoffPsi:
    """Smooth radial profile with psi0 = 1 on [0, 1/2] and psi0 = 0 on [1, inf)"""

    profile: Callable[[Any], np.ndarray] = _bridge

    def __call__(self, r: Any) -> np.ndarray:
        return self.profile(r)

    def radial(self, x: np.ndarray) -> np.ndarray:
        return self.profile(np.linalg.norm(np.asarray(x, dtype=float), axis=-1))

    def check(self, samples: int = 100) -> bool:
        inner = np.linspace(0.0, 0.5, samples)
        outer = np.linspace(1.0, 3.0, samples)
        ramp = self.profile(np.linspace(0.5, 1.0, samples))
        return bool(
            np.all(self.profile(inner) == 1.0)
            and np.all(self.profile(outer) == 0.0)
            and np.all(np.diff(ramp) <= 0.0)
            and np.all((ramp >= 0.0) & (ramp <= 1.0))
        )


def make_cutoff() -> CutoffPsi:
    return CutoffPsi()


@dataclass
class AreaResult:
    """Outcome of a delta-refined area integral"""

    value: float
    verdict: str
    estimates: List[float]
    increments: List[float]
    delta: float
    aperture: float
    height: float
    kind: str = "S"
    convention: str = CONSTANT_CONVENTION

    @property
    def finite(self) -> bool:
        return self.verdict == FINITE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "value": self.value,
            "verdict": self.verdict,
            "delta": self.delta,
            "aperture": self.aperture,
            "height": self.height,
            "estimates": list(self.estimates),
            "convention": self.convention,
        }


@dataclass
class AreaBudget:
    """Quadrature budget of the area integrals"""

    levels: int = 12
    n_y: int = 8
    n_r: int = 12
    n_t: int = 32
    n_sphere: int = 16
    n_jacobi: int = 64
    cheb_degree: int = 24
    rel_tol: float = 1e-6
    divergence_ratio: float = 0.9
    divergence_levels: int = 3
    min_levels: int = 3


def classify_refinement(
    increments: Sequence[float],
    rel_tol: float = 1e-6,
    divergence_ratio: float = 0.9,
    divergence_levels: int = 3,
    min_levels: int = 3,
) -> str:
    """Verdict on a sequence of squared-integral increments over shrinking delta

    finite: the square root of the partial sum changed by less than rel_tol at the last step.
    infinite: the last divergence_levels increments each kept at least divergence_ratio of
    their predecessor, so the tail does not sum.
    """
    inc = [float(v) for v in increments]
    if len(inc) < min_levels:
        return INDETERMINATE
    total = sum(inc)
    previous = total - inc[-1]
    s_now, s_before = math.sqrt(max(total, 0.0)), math.sqrt(max(previous, 0.0))
    if total == 0.0 or abs(s_now - s_before) <= rel_tol * s_now:
        return FINITE
    if len(inc) > divergence_levels:
        tail = inc[-(divergence_levels + 1):]
        if all(b >= divergence_ratio * a and b > 0 for a, b in zip(tail[:-1], tail[1:])):
            return INFINITE
    return INDETERMINATE


class _SliceSampler:
    """y-slices t -> g(t, y) of a field quantity (Delta_kappa u^2 or 2|grad u|^2)

    Polynomial fields are evaluated exactly. Other fields in d = 1 are replaced by
    Chebyshev interpolants on the windows ±[max(0, |x| - R), |x| + R] that the
    translation can reach, R = reach * y.
    """

    def __init__(self, u: HarmonicField, quantity: str, x: np.ndarray, reach: float, degree: int):
        self.u = u
        self.quantity = quantity
        self.x = x
        self.reach = reach
        self.degree = degree
        self._cache: Dict[float, List[Tuple[float, float, Chebyshev]]] = {}

    def _direct(self, t: np.ndarray, y: float) -> np.ndarray:
        if self.quantity == "square_laplacian":
            return np.asarray(self.u.square_laplacian(t, y), dtype=float)
        grad = np.asarray(self.u.gradient(t, y), dtype=float)
        return 2.0 * np.sum(grad * grad, axis=-1)

    def _windows(self, y: float) -> List[Tuple[float, float, Chebyshev]]:
        if y not in self._cache:
            ax = float(abs(self.x[0]))
            R = self.reach * y
            if R >= ax:
                bounds = [(-(ax + R), ax + R)]
            else:
                bounds = [(-(ax + R), -(ax - R)), (ax - R, ax + R)]
            windows = []
            for lo, hi in bounds:
                fn = lambda s: self._direct(np.asarray(s, dtype=float)[:, None], y)
                windows.append((lo, hi, Chebyshev.interpolate(fn, self.degree, domain=[lo, hi])))
            self._cache[y] = windows
        return self._cache[y]

    def __call__(self, t: np.ndarray, y: float) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.u.is_polynomial or self.u.dim != 1:
            return self._direct(t, y)
        s = t[..., 0]
        out = np.zeros(s.shape)
        windows = self._windows(y)
        for lo, hi, cheb in windows:
            inside = (s >= lo - 1e-12 * (1 + abs(lo))) & (s <= hi + 1e-12 * (1 + abs(hi)))
            out = np.where(inside, cheb(np.clip(s, lo, hi)), out)
        return out


def _validate(u: HarmonicField, x: Any, a: float, h: float) -> np.ndarray:
    if not isinstance(u, HarmonicField):
        raise DomainError("area integrals take a HarmonicField")
    lams = u.rs.coordinate_lambdas
    if lams is None:
        raise DomainError("area integrals are implemented for Z_2^d multiplicities")
    if not a > 0 or not h > 0:
        raise DomainError(f"cone needs a > 0 and h > 0, got a={a}, h={h}")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if xv.shape != (u.dim,):
        raise DomainError(f"vertex has shape {xv.shape}, expected ({u.dim},)")
    return xv


def _refine(
    slice_integral: Callable[[float], float],
    a: float,
    h: float,
    budget: AreaBudget,
    kind: str,
    delta_floor: Optional[float] = None,
) -> AreaResult:
    """Sum panel integrals of y -> slice_integral(y) over [h 4^-k, h 4^-k+1] until a verdict"""
    increments: List[float] = []
    estimates: List[float] = []
    verdict = INDETERMINATE
    delta = h
    for k in range(1, budget.levels + 1):
        lo = h * 4.0 ** (-k)
        if delta_floor is not None and lo < delta_floor:
            break
        rule = gauss_legendre(budget.n_y, lo, h * 4.0 ** (-k + 1))
        values = np.array([slice_integral(float(y)) for y in rule.nodes])
        if np.any(values < -1e-12 * (1.0 + np.max(np.abs(values)))):
            raise NumericalFailure(
                f"{kind}: negative slice integral {values.min():.3g}; the integrand must be nonnegative",
                estimates=estimates[-2:],
            )
        increments.append(float(rule.apply(np.maximum(values, 0.0))))
        estimates.append(math.sqrt(sum(increments)))
        delta = lo
        verdict = classify_refinement(
            increments, budget.rel_tol, budget.divergence_ratio, budget.divergence_levels, budget.min_levels
        )
        if verdict != INDETERMINATE:
            break
    value = estimates[-1] if estimates else 0.0
    if verdict == INFINITE:
        value = math.inf
    logger.debug(f"{kind}: verdict={verdict} levels={len(increments)} estimates={estimates}")
    return AreaResult(
        value=value, verdict=verdict, estimates=estimates, increments=increments,
        delta=delta, aperture=a, height=h, kind=kind,
    )


def _mean_area(
    u: HarmonicField,
    x: Any,
    a: float,
    h: float,
    quantity: str,
    kind: str,
    budget: Optional[AreaBudget],
    delta_floor: Optional[float],
) -> AreaResult:
    budget = budget or AreaBudget()
    xv = _validate(u, x, a, h)
    lams = u.rs.coordinate_lambdas
    N = 2.0 * sum(lams) + len(lams)
    inverse_d = coordinate_sphere_mass(lams)
    means = SphericalMeanEvaluator(lams, budget.n_sphere, budget.n_jacobi)
    radial = beta_rule(N, 1.0, budget.n_r)
    sampler = _SliceSampler(u, quantity, xv, a, budget.cheb_degree)

    def slice_integral(y: float) -> float:
        # int_0^{ay} M(x, r) (r/y)^(N-1) dr = a^N y / N * E_Beta(N,1)[M(x, a y s)]
        m = means.means(lambda pts: sampler(pts, y), xv, a * y * radial.nodes)
        return inverse_d * a ** N * y / N * float(radial.apply(m))

    result = _refine(slice_integral, a, h, budget, kind, delta_floor)
    logger.info(f"{kind}({u.name}, x={xv.tolist()}, a={a}, h={h}) = {result.value!r} [{result.verdict}]")
    return result


def area_integral(
    u: HarmonicField,
    x: Any,
    a: float,
    h: float,
    delta_floor: Optional[float] = None,
    budget: Optional[AreaBudget] = None,
) -> AreaResult:
    """S_{a,h}u(x) through spherical means of Delta_kappa u^2"""
    return _mean_area(u, x, a, h, "square_laplacian", "S", budget, delta_floor)


def gradient_area_integral(
    u: HarmonicField,
    x: Any,
    a: float,
    h: float,
    delta_floor: Optional[float] = None,
    budget: Optional[AreaBudget] = None,
) -> AreaResult:
    """The same cone integral with 2|grad u|^2 in place of Delta_kappa u^2; never larger than S"""
    return _mean_area(u, x, a, h, "gradient", "S_grad", budget, delta_floor)


def _cutoff_breakpoints(xj: float, reach: float) -> List[float]:
    edge = abs(xj) + reach
    pts = {-edge, edge, 0.0}
    for c in (xj, -xj):
        for p in (c - reach, c, c + reach):
            if -edge <= p <= edge:
                pts.add(p)
    return sorted(pts)


def area_integral_psi(
    u: HarmonicField,
    x: Any,
    a: float,
    h: float,
    delta_floor: Optional[float] = None,
    budget: Optional[AreaBudget] = None,
    cutoff: Optional[CutoffPsi] = None,
) -> AreaResult:
    """S^psi_{a,h}u(x) in the dual form with the translated cutoff (tau_{-x/ay} psi)(t/ay)"""
    budget = budget or AreaBudget()
    cutoff = cutoff or make_cutoff()
    xv = _validate(u, x, a, h)
    lams = u.rs.coordinate_lambdas
    N = 2.0 * sum(lams) + len(lams)
    translator = TranslationEvaluator(lams, budget.n_jacobi)
    sampler = _SliceSampler(u, "square_laplacian", xv, a, budget.cheb_degree)

    def slice_integral(y: float) -> float:
        reach = a * y
        rules = [weighted_panels(_cutoff_breakpoints(xv[j], reach), lam, budget.n_t) for j, lam in enumerate(lams)]
        rule = rules[0] if len(rules) == 1 else tensor_rule(rules)
        t = rule.nodes.reshape(-1, len(lams))
        psi = translator.translate_radial(-xv / reach, cutoff, t / reach)
        mask = np.abs(psi) > 0
        if not np.any(mask):
            return 0.0
        values = np.zeros(len(psi))
        values[mask] = sampler(t[mask], y) * psi[mask]
        return y ** (1.0 - N) * float(rule.apply(values))

    result = _refine(slice_integral, a, h, budget, "S_psi", delta_floor)
    logger.info(f"S_psi({u.name}, x={xv.tolist()}, a={a}, h={h}) = {result.value!r} [{result.verdict}]")
    return result


def cutoff_support_probe(
    lambdas: Sequence[float], x: Any, a: float, points: Sequence[Tuple[Any, float]], n_jacobi: int = 64
) -> float:
    """max |(tau_{-x/ay} psi)(t/ay)| over (t, y) with min_sigma |t - sigma x| >= a y"""
    translator = TranslationEvaluator(lambdas, n_jacobi)
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    cutoff = make_cutoff()
    worst = 0.0
    for t, y in points:
        tv = np.atleast_1d(np.asarray(t, dtype=float))
        orbit_gap = np.sqrt(np.sum(np.minimum(np.abs(tv - xv), np.abs(tv + xv)) ** 2))
        if orbit_gap < a * y:
            raise DomainError(f"probe ({tv.tolist()}, {y}) lies inside the reflected cones")
        value = translator.translate_radial(-xv / (a * y), cutoff, (tv / (a * y))[None, :])[0]
        worst = max(worst, abs(float(value)))
    return worst


def cone_integral_classical(
    lambdas: Sequence[float],
    g: Callable[[np.ndarray, float], np.ndarray],
    x: Any,
    a: float,
    h: float,
    delta: float = 0.0,
    n_t: int = 32,
    n_y: int = 16,
    levels: int = 12,
) -> float:
    """int_delta^h int_{|t - x| < a y} g(t, y) y^(1-N) dw(t) dy without translation

    In d >= 2 the cone slice is integrated on its bounding box with an indicator mask,
    so the result is only as accurate as the tensor rule resolves the sphere.
    """
    lams = tuple(float(v) for v in lambdas)
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    d = len(lams)
    N = 2.0 * sum(lams) + d
    total = 0.0
    for k in range(1, levels + 1):
        lo = max(delta, h * 4.0 ** (-k))
        hi = h * 4.0 ** (-k + 1)
        if hi <= lo:
            break
        yrule = gauss_legendre(n_y, lo, hi)
        vals = []
        for y in yrule.nodes:
            reach = a * y
            rules = []
            for j, lam in enumerate(lams):
                pts = [xv[j] - reach, xv[j] + reach]
                if pts[0] < 0 < pts[1]:
                    pts.append(0.0)
                rules.append(weighted_panels(pts, lam, n_t))
            rule = rules[0] if d == 1 else tensor_rule(rules)
            t = rule.nodes.reshape(-1, d)
            inside = np.linalg.norm(t - xv, axis=-1) < reach
            values = np.where(inside, np.asarray(g(t, float(y)), dtype=float), 0.0)
            vals.append(y ** (1.0 - N) * float(rule.apply(values)))
        total += float(yrule.apply(np.array(vals)))
        if lo <= delta:
            break
    return total


@dataclass
class SandwichTriple:
    lower: AreaResult
    middle: AreaResult
    upper: AreaResult
    tolerance: float

    @property
    def values(self) -> Tuple[float, float, float]:
        return (self.lower.value, self.middle.value, self.upper.value)

    @property
    def ordered(self) -> bool:
        lo, mid, hi = self.values
        if not math.isfinite(mid):
            # a divergent middle integral needs a non-convergent upper one
            return self.upper.verdict != FINITE
        slack = self.tolerance * (1.0 + mid)
        return lo <= mid + slack and mid <= hi + slack

    def to_dict(self) -> Dict[str, Any]:
        return {
            "S_psi_a": self.lower.value,
            "S_a": self.middle.value,
            "S_psi_2a": self.upper.value,
            "ordered": self.ordered,
            "verdicts": [self.lower.verdict, self.middle.verdict, self.upper.verdict],
            "convention": CONSTANT_CONVENTION,
        }


def sandwich_residual(
    u: HarmonicField,
    x: Any,
    a: float,
    h: float,
    tolerance: float = 1e-5,
    budget: Optional[AreaBudget] = None,
    strict: bool = True,
) -> SandwichTriple:
    """(S^psi_{a,h}, S_{a,h}, S^psi_{2a,h}) at a common delta floor; must be nondecreasing"""
    budget = budget or AreaBudget()
    middle = area_integral(u, x, a, h, budget=budget)
    floor = middle.delta
    lower = area_integral_psi(u, x, a, h, delta_floor=floor, budget=budget)
    upper = area_integral_psi(u, x, 2.0 * a, h, delta_floor=floor, budget=budget)
    triple = SandwichTriple(lower=lower, middle=middle, upper=upper, tolerance=tolerance)
    if strict and not triple.ordered:
        raise CheckFailure(
            f"sandwich ordering violated at x={x}: {triple.values}",
            details=triple.to_dict(),
        )
    return triple


__all__ = [
    "AreaBudget",
    "AreaResult",
    "CONSTANT_CONVENTION",
    "ConeSpec",
    "CutoffPsi",
    "FINITE",
    "INDETERMINATE",
    "INFINITE",
    "SandwichTriple",
    "area_integral",
    "area_integral_psi",
    "classify_refinement",
    "cone_integral_classical",
    "cutoff_support_probe",
    "gradient_area_integral",
    "make_cutoff",
    "sandwich_residual",
]

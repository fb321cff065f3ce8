"""
Deterministic quadrature engine

Gauss-Legendre, Gauss-Jacobi rules for dm_lambda and |t|^(2 lambda), generalized Hermite
rules, double-exponential rules on half-lines, composite weighted panels, and the
Dirichlet product rule on spheres carrying the coordinate weight prod |t_j|^(2 lambda_j).
All reductions are numpy pairwise sums in canonical node order.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import gammaln, roots_genlaguerre, roots_jacobi

from .errors import DomainError, PoisonedIntegralError

logger = logging.getLogger(__name__)

EXACT_FOR_ALL = 10 ** 9


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes (shape (n,) or (n, m)) with positive weights for a tagged measure"""

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    measure_tag: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise DomainError("rule has different node and weight counts")
        if np.any(self.weights <= 0):
            raise DomainError(f"rule {self.measure_tag} has nonpositive weights")

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def apply(self, values: np.ndarray) -> float:
        """Weighted sum of precomputed node values; NaN/inf poisons the integral"""
        values = np.asarray(values)
        bad = ~np.isfinite(values)
        if np.any(bad):
            index = int(np.argmax(bad))
            raise PoisonedIntegralError(
                f"integrand is not finite at node {self.nodes[index]!r} ({self.measure_tag})",
                node=self.nodes[index],
            )
        return np.sum(self.weights * values)

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        """Integrate a vectorized integrand evaluated on all nodes at once"""
        return float(self.apply(f(self.nodes)))


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    error: float
    nodes: int


def _dirac(point: float, tag: str) -> QuadratureRule:
    return QuadratureRule(
        nodes=np.array([point]), weights=np.array([1.0]),
        exactness_degree=EXACT_FOR_ALL, measure_tag=tag,
    )


@lru_cache(maxsize=256)
def _legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    return x, w


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """n-point Gauss-Legendre rule for Lebesgue measure on [a, b]"""
    if n < 1:
        raise DomainError("a rule needs at least one node")
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    return QuadratureRule(
        nodes=a + half * (x + 1.0), weights=half * w,
        exactness_degree=2 * n - 1, measure_tag=f"lebesgue[{a},{b}]",
    )


def jacobi_constant(lam: float) -> float:
    """c_lambda = Gamma(lambda+1/2) / (Gamma(1/2) Gamma(lambda)), the normalizer of dm_lambda"""
    if lam <= 0:
        raise DomainError("c_lambda is defined for lambda > 0")
    return math.exp(gammaln(lam + 0.5) - gammaln(lam) - gammaln(0.5))


@lru_cache(maxsize=256)
def jacobi_rule(lam: float, n: int = 64) -> QuadratureRule:
    """Gauss-Jacobi rule for the probability measure

        dm_lambda(theta) = c_lambda (1 + theta) (1 - theta^2)^(lambda - 1) d theta

    on [-1, 1], i.e. Jacobi exponents (lambda - 1, lambda). lambda = 0 is the Dirac
    mass at theta = 1.
    """
    lam = float(lam)
    if lam < 0:
        raise DomainError(f"multiplicity must be nonnegative, got {lam}")
    if lam == 0:
        return _dirac(1.0, "dm_0")
    if n < 1:
        raise DomainError("a rule needs at least one node")
    x, w = roots_jacobi(n, lam - 1.0, lam)
    # roots_jacobi returns the raw weight mass; the measure is a probability measure
    w = np.asarray(w) / np.sum(w)
    return QuadratureRule(
        nodes=np.asarray(x), weights=w,
        exactness_degree=2 * n - 1, measure_tag=f"dm_{lam}",
        metadata={"c_lambda": jacobi_constant(lam)},
    )


@lru_cache(maxsize=256)
def beta_rule(a: float, b: float, n: int) -> QuadratureRule:
    """Gauss rule for the Beta(a, b) probability distribution on [0, 1]"""
    if a <= 0 or b <= 0:
        raise DomainError(f"Beta parameters must be positive, got ({a}, {b})")
    x, w = roots_jacobi(n, b - 1.0, a - 1.0)
    w = np.asarray(w) / np.sum(w)
    return QuadratureRule(
        nodes=0.5 * (np.asarray(x) + 1.0), weights=w,
        exactness_degree=2 * n - 1, measure_tag=f"beta({a},{b})",
    )


def power_panel_rule(b: float, lam: float, n: int) -> QuadratureRule:
    """Rule for |t|^(2 lambda) dt on the panel between 0 and b (b may be negative)"""
    if b == 0:
        raise DomainError("degenerate panel")
    span = abs(b)
    if lam == 0:
        x, w = _legendre(n)
        scale = span / 2.0
    else:
        x, w = roots_jacobi(n, 0.0, 2.0 * lam)
        scale = span / 2.0
        w = np.asarray(w) * scale ** (2.0 * lam)
    nodes = scale * (np.asarray(x) + 1.0)
    return QuadratureRule(
        nodes=np.sign(b) * nodes, weights=np.asarray(w) * scale,
        exactness_degree=2 * n - 1, measure_tag=f"power_{lam}",
    )


def weighted_panels(
    breakpoints: Sequence[float],
    lam: float,
    n: int = 24,
    tail: bool = False,
) -> QuadratureRule:
    """Composite rule for |t|^(2 lambda) dt over the union of panels between breakpoints

    Panels touching the origin use Gauss-Jacobi with the weight absorbed; other panels
    use Gauss-Legendre with the weight multiplied in. With ``tail`` the intervals
    (-inf, min] and [max, inf) are added through t = R/u.
    """
    pts = sorted(set(float(p) for p in breakpoints))
    if 0.0 not in pts and pts[0] < 0.0 < pts[-1]:
        pts = sorted(pts + [0.0])
    nodes: List[np.ndarray] = []
    weights: List[np.ndarray] = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        if lo == 0.0 or hi == 0.0:
            rule = power_panel_rule(hi if lo == 0.0 else lo, lam, n)
            nodes.append(rule.nodes)
            weights.append(rule.weights)
        else:
            rule = gauss_legendre(n, lo, hi)
            nodes.append(rule.nodes)
            weights.append(rule.weights * np.abs(rule.nodes) ** (2.0 * lam))
    if tail:
        for edge in (pts[0], pts[-1]):
            if edge == 0.0:
                raise DomainError("a tail cannot start at the origin")
            u, w = _legendre(n)
            u = 0.5 * (u + 1.0)
            w = 0.5 * w
            t = edge / u
            nodes.append(t)
            weights.append(w * abs(edge) / u ** 2 * np.abs(t) ** (2.0 * lam))
    all_nodes = np.concatenate(nodes)
    order = np.argsort(all_nodes, kind="stable")
    return QuadratureRule(
        nodes=all_nodes[order], weights=np.concatenate(weights)[order],
        exactness_degree=2 * n - 1, measure_tag=f"panels_{lam}",
    )


def graded_breakpoints(center: float, scale: float, levels: int, extent: float) -> List[float]:
    """Breakpoints center ± scale*2^k, k = 0..levels, clipped to [-extent, extent]"""
    pts = {center}
    for k in range(levels + 1):
        step = scale * 2.0 ** k
        for p in (center - step, center + step):
            if -extent <= p <= extent:
                pts.add(p)
    pts.update((-extent, extent))
    return sorted(pts)


@lru_cache(maxsize=64)
def half_line_rule(n: int = 201, span: float = 4.0) -> QuadratureRule:
    """Double-exponential (exp-sinh) trapezoidal rule for Lebesgue measure on (0, inf)"""
    s = np.linspace(-span, span, n)
    h = s[1] - s[0]
    arg = 0.5 * np.pi * np.sinh(s)
    x = np.exp(arg)
    w = h * 0.5 * np.pi * np.cosh(s) * x
    return QuadratureRule(
        nodes=x, weights=w, exactness_degree=0, measure_tag="lebesgue(0,inf)",
    )


def real_line_rule(n: int = 201) -> QuadratureRule:
    """Mirror of half_line_rule, Lebesgue measure on the real line"""
    half = half_line_rule(n)
    return QuadratureRule(
        nodes=np.concatenate([-half.nodes[::-1], half.nodes]),
        weights=np.concatenate([half.weights[::-1], half.weights]),
        exactness_degree=0, measure_tag="lebesgue(R)",
    )


@lru_cache(maxsize=64)
def generalized_hermite_rule(lam: float, n: int = 48) -> QuadratureRule:
    """Rule for |x|^(2 lambda) exp(-x^2/2) dx on the real line

    With u = x^2/2 each half-line becomes 2^(lambda - 1/2) u^(lambda - 1/2) e^(-u) du,
    a generalized Laguerre weight.
    """
    if lam < 0:
        raise DomainError(f"multiplicity must be nonnegative, got {lam}")
    u, w = roots_genlaguerre(n, lam - 0.5)
    x = np.sqrt(2.0 * np.asarray(u))
    w = np.asarray(w) * 2.0 ** (lam - 0.5)
    return QuadratureRule(
        nodes=np.concatenate([-x[::-1], x]),
        weights=np.concatenate([w[::-1], w]),
        exactness_degree=2 * n - 1, measure_tag=f"gaussian_{lam}",
    )


def coordinate_sphere_mass(lambdas: Sequence[float]) -> float:
    """Integral of prod |t_j|^(2 lambda_j) over the unit sphere of R^m

    = 2 prod Gamma(lambda_j + 1/2) / Gamma(sum lambda_j + m/2); equals 2 for m = 1.
    """
    lambdas = [float(v) for v in lambdas]
    log_mass = sum(gammaln(v + 0.5) for v in lambdas) - gammaln(sum(lambdas) + len(lambdas) / 2.0)
    return 2.0 * math.exp(log_mass)


@lru_cache(maxsize=128)
def _sphere_rule_cached(lambdas: Tuple[float, ...], n: int) -> QuadratureRule:
    m = len(lambdas)
    if m == 1:
        return QuadratureRule(
            nodes=np.array([[-1.0], [1.0]]), weights=np.array([0.5, 0.5]),
            exactness_degree=EXACT_FOR_ALL, measure_tag=f"sphere{lambdas}",
        )
    # stick-breaking: t_j^2 = V_j with V ~ Dirichlet(lambda_j + 1/2)
    params = [v + 0.5 for v in lambdas]
    rules = [
        beta_rule(params[j], sum(params[j + 1:]), n) for j in range(m - 1)
    ]
    squares: List[np.ndarray] = []
    weights: List[float] = []
    for combo in np.ndindex(*([n] * (m - 1))):
        remaining = 1.0
        v = []
        w = 1.0
        for j, k in enumerate(combo):
            b = rules[j].nodes[k]
            v.append(remaining * b)
            remaining *= 1.0 - b
            w *= rules[j].weights[k]
        v.append(remaining)
        squares.append(np.sqrt(np.maximum(v, 0.0)))
        weights.append(w)
    base = np.array(squares)
    base_w = np.array(weights)
    signs = np.array(list(np.ndindex(*([2] * m)))) * -2 + 1
    nodes = (signs[None, :, :] * base[:, None, :]).reshape(-1, m)
    w_all = np.repeat(base_w, len(signs)) / len(signs)
    return QuadratureRule(
        nodes=nodes, weights=w_all,
        exactness_degree=2 * n - 1, measure_tag=f"sphere{lambdas}",
    )


def sphere_rule(lambdas: Sequence[float], n: int = 16) -> QuadratureRule:
    """Probability rule on the unit sphere of R^m for the normalized weight prod |t_j|^(2 lambda_j)

    For m = 1 the sphere is {-1, 1} with mass 1/2 each. Sign patterns are uniform, so
    every node lies off the coordinate hyperplanes.
    """
    key = tuple(float(v) for v in lambdas)
    if not key:
        raise DomainError("a sphere needs at least one coordinate")
    if any(v < 0 for v in key):
        raise DomainError(f"multiplicities must be nonnegative, got {key}")
    return _sphere_rule_cached(key, int(n))


def tensor_rule(rules: Sequence[QuadratureRule]) -> QuadratureRule:
    """Product rule over one-dimensional rules; nodes have shape (N, len(rules))"""
    grids = np.meshgrid(*[r.nodes for r in rules], indexing="ij")
    wgrids = np.meshgrid(*[r.weights for r in rules], indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return QuadratureRule(
        nodes=nodes, weights=weights,
        exactness_degree=min(r.exactness_degree for r in rules),
        measure_tag="x".join(r.measure_tag for r in rules),
    )


def integrate(
    family: Callable[[int], QuadratureRule],
    f: Callable[[np.ndarray], np.ndarray],
    n: int = 32,
) -> IntegralEstimate:
    """Integrate with the n- and 2n-node members of a rule family; the gap is the error estimate"""
    coarse = family(n).integrate(f)
    fine_rule = family(2 * n)
    fine = fine_rule.integrate(f)
    logger.debug(f"integrate: n={n} coarse={coarse!r} fine={fine!r}")
    return IntegralEstimate(value=fine, error=abs(fine - coarse), nodes=fine_rule.size)


__all__ = [
    "IntegralEstimate",
    "QuadratureRule",
    "beta_rule",
    "coordinate_sphere_mass",
    "gauss_legendre",
    "generalized_hermite_rule",
    "graded_breakpoints",
    "half_line_rule",
    "integrate",
    "jacobi_constant",
    "jacobi_rule",
    "power_panel_rule",
    "real_line_rule",
    "sphere_rule",
    "tensor_rule",
    "weighted_panels",
]

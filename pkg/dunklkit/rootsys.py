"""
Root systems, multiplicity functions, reflection groups, the weight W_kappa and
weighted ball measures
"""

import itertools
import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from scipy.integrate import IntegrationWarning, quad

from .errors import (
    DomainError,
    GroupClosureError,
    NumericalFailure,
    RootSystemValidationError,
    SymbolicPathUnavailable,
)
from .polyring import ExactMatrix, as_fraction, rational_direction, reflection_matrix
from .quadrature import coordinate_sphere_mass

logger = logging.getLogger(__name__)

DEFAULT_GROUP_CAP = 10 ** 6
ROOT_KINDS = ("Z2d", "A", "B", "custom")

ExactVector = Tuple[sympy.Expr, ...]


@dataclass(frozen=True, eq=False)
class PositiveRoot:
    """A root of R+ with everything the exact and numeric engines need"""

    vector: ExactVector
    numeric: np.ndarray
    kappa: Fraction
    orbit: int
    reflection: np.ndarray
    # alpha = s*l with l rational; None when no rational direction exists
    direction: Optional[Tuple[Fraction, ...]] = None
    scale_sq: Optional[Fraction] = None
    exact_reflection: Optional[ExactMatrix] = None

    def pairing(self, x: np.ndarray) -> np.ndarray:
        """<alpha, x> along the last axis"""
        return np.asarray(x, dtype=float) @ self.numeric


@dataclass(frozen=True)
class Multiplicity:
    """Per-orbit multiplicity values and |kappa| = sum over R+ of kappa(alpha)"""

    values: Dict[int, Fraction]
    total: Fraction

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())


@dataclass(frozen=True, eq=False)
class RootSystemData:
    """The (R, R+, kappa, G) tuple; immutable after construction"""

    kind: str
    dim: int
    roots: Tuple[ExactVector, ...]
    roots_numeric: np.ndarray
    positive: Tuple[PositiveRoot, ...]
    multiplicity: Multiplicity
    orbits: Tuple[Tuple[int, ...], ...]
    group: Tuple[np.ndarray, ...]
    exact_group: Optional[Tuple[ExactMatrix, ...]] = None
    label: str = ""

    @property
    def kappa_total(self) -> float:
        return float(self.multiplicity.total)

    @property
    def symbolic_capable(self) -> bool:
        return all(p.direction is not None for p in self.positive)

    @property
    def order(self) -> int:
        return len(self.group)

    @property
    def coordinate_lambdas(self) -> Optional[Tuple[float, ...]]:
        """Per-coordinate multiplicities when W_kappa is a product over coordinates

        That is the case for Z2d systems and for any system whose roots with positive
        multiplicity are coordinate vectors (in particular kappa = 0).
        """
        lambdas = [0.0] * self.dim
        for root in self.positive:
            if root.kappa == 0:
                continue
            support = np.flatnonzero(np.abs(root.numeric) > 1e-14)
            if len(support) != 1 or lambdas[support[0]]:
                return None
            lambdas[support[0]] = float(root.kappa)
        return tuple(lambdas)

    def describe(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "label": self.label,
            "dim": self.dim,
            "roots": [[str(c) for c in r] for r in self.roots],
            "kappa_total": str(self.multiplicity.total),
            "group_order": self.order,
        }


def _exact_vector(values: Sequence[Any]) -> ExactVector:
    return tuple(sympy.nsimplify(sympy.sympify(v)) for v in values)


def _numeric(vec: ExactVector) -> np.ndarray:
    return np.array([float(c) for c in vec], dtype=float)


def _lex_positive(vec: np.ndarray) -> bool:
    for c in vec:
        if abs(c) > 1e-12:
            return c > 0
    return False


def _key(vec: np.ndarray) -> Tuple[float, ...]:
    return tuple(np.round(vec, 9) + 0.0)


def _normalize(vec: ExactVector) -> ExactVector:
    norm_sq = sympy.simplify(sum(c * c for c in vec))
    if norm_sq == 0:
        raise RootSystemValidationError("the zero vector is not a root")
    factor = sympy.sqrt(sympy.Integer(2) / norm_sq)
    return tuple(sympy.radsimp(sympy.simplify(c * factor)) for c in vec)


def _reflect_numeric(alpha: np.ndarray) -> np.ndarray:
    return np.eye(len(alpha)) - np.outer(alpha, alpha) * (2.0 / float(alpha @ alpha))


def _check_reduced(vectors: Sequence[np.ndarray]) -> None:
    for i, j in itertools.combinations(range(len(vectors)), 2):
        a, b = vectors[i], vectors[j]
        if np.linalg.matrix_rank(np.stack([a, b]), tol=1e-10) == 1:
            ratio = float(b @ a / (a @ a))
            if abs(abs(ratio) - 1.0) > 1e-10:
                raise RootSystemValidationError(
                    f"roots {i} and {j} are proportional with ratio {ratio:g}; "
                    f"non-reduced systems are not supported",
                    pair=(i, j),
                )


def _validate_closure(vectors: np.ndarray) -> None:
    keys = {_key(v): i for i, v in enumerate(vectors)}
    for i, alpha in enumerate(vectors):
        if _key(-alpha) not in keys:
            raise RootSystemValidationError(
                f"root {i} = {tuple(alpha)} has no negative in the system", pair=(i, i)
            )
        sigma = _reflect_numeric(alpha)
        for j, beta in enumerate(vectors):
            if _key(sigma @ beta) not in keys:
                raise RootSystemValidationError(
                    f"reflection in root {i} maps root {j} outside the system", pair=(i, j)
                )


def _mat_key_exact(m: ExactMatrix) -> Tuple[Fraction, ...]:
    return tuple(v for row in m for v in row)


def _mat_mul_exact(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n))
        for i in range(n)
    )


def generate_group(
    roots: Sequence[Sequence[Any]],
    cap: int = DEFAULT_GROUP_CAP,
    exact: Optional[bool] = None,
) -> List[Union[ExactMatrix, np.ndarray]]:
    """Closure of the reflections {sigma_alpha} under composition

    Returns exact Fraction matrices when every root has a rational direction (or when
    ``exact`` is True), float matrices otherwise. Elements are sorted canonically with
    the identity first.
    """
    if not roots:
        raise DomainError("cannot generate a group from an empty root list")
    d = len(roots[0])
    directions: List[Optional[Tuple[Fraction, ...]]] = []
    for alpha in roots:
        try:
            directions.append(rational_direction(alpha))
        except SymbolicPathUnavailable:
            directions.append(None)
    use_exact = all(v is not None for v in directions) if exact is None else exact
    if use_exact and any(v is None for v in directions):
        raise SymbolicPathUnavailable("exact group requested for roots without rational direction")

    if use_exact:
        gens = []
        seen_gen = set()
        for direction in directions:
            m = reflection_matrix(direction)
            if _mat_key_exact(m) not in seen_gen:
                seen_gen.add(_mat_key_exact(m))
                gens.append(m)
        identity = tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))
        elements = {_mat_key_exact(identity): identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = _mat_mul_exact(s, g)
                    k = _mat_key_exact(h)
                    if k not in elements:
                        elements[k] = h
                        nxt.append(h)
                        if len(elements) > cap:
                            raise GroupClosureError(
                                f"closure exceeded {cap} elements; not a finite reflection system"
                            )
            frontier = nxt
        ident_key = _mat_key_exact(identity)
        ordered = [identity] + [elements[k] for k in sorted(elements) if k != ident_key]
        logger.debug(f"generate_group: exact closure of order {len(ordered)}")
        return ordered

    gens_num = []
    seen = set()
    for alpha in roots:
        m = _reflect_numeric(np.array([float(sympy.sympify(c)) for c in alpha]))
        if _key(m.ravel()) not in seen:
            seen.add(_key(m.ravel()))
            gens_num.append(m)
    identity_num = np.eye(d)
    found = {_key(identity_num.ravel()): identity_num}
    frontier_num = [identity_num]
    while frontier_num:
        nxt_num = []
        for g in frontier_num:
            for s in gens_num:
                h = s @ g
                k = _key(h.ravel())
                if k not in found:
                    found[k] = h
                    nxt_num.append(h)
                    if len(found) > cap:
                        raise GroupClosureError(
                            f"closure exceeded {cap} elements; not a finite reflection system"
                        )
        frontier_num = nxt_num
    ident = _key(identity_num.ravel())
    ordered_num = [identity_num] + [found[k] for k in sorted(found) if k != ident]
    logger.debug(f"generate_group: numeric closure of order {len(ordered_num)}")
    return ordered_num


def orbit_decomposition(
    roots_numeric: np.ndarray, group: Sequence[np.ndarray]
) -> Tuple[Tuple[int, ...], ...]:
    """G-orbits of the roots, as sorted tuples of root indices, in order of first member"""
    keys = {_key(v): i for i, v in enumerate(roots_numeric)}
    assigned: Dict[int, int] = {}
    orbits: List[Tuple[int, ...]] = []
    for i, alpha in enumerate(roots_numeric):
        if i in assigned:
            continue
        members = sorted({keys[_key(g @ alpha)] for g in group})
        for m in members:
            assigned[m] = len(orbits)
        orbits.append(tuple(members))
    return tuple(orbits)


def _float_matrix(m: Union[ExactMatrix, np.ndarray]) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in m], dtype=float)


def _assemble(
    kind: str,
    exact_roots: Sequence[ExactVector],
    root_kappa: Sequence[Fraction],
    label: str,
    cap: int,
) -> RootSystemData:
    numeric = np.array([_numeric(r) for r in exact_roots])
    d = numeric.shape[1]
    # canonical order: positive roots lexicographically decreasing, then their negatives
    pos_index = [i for i, v in enumerate(numeric) if _lex_positive(v)]
    pos_index.sort(key=lambda i: tuple(-numeric[i]))
    neg_lookup = {_key(numeric[i]): i for i in range(len(numeric))}
    order = pos_index + [neg_lookup[_key(-numeric[i])] for i in pos_index]
    exact_roots = [exact_roots[i] for i in order]
    numeric = numeric[order]
    root_kappa = [root_kappa[i] for i in order]

    raw_group = generate_group(exact_roots, cap=cap)
    exact_group = None
    if raw_group and not isinstance(raw_group[0], np.ndarray):
        exact_group = tuple(raw_group)
    group = tuple(_float_matrix(g) for g in raw_group)
    orbits = orbit_decomposition(numeric, group)

    values: Dict[int, Fraction] = {}
    for o, members in enumerate(orbits):
        kappas = {root_kappa[m] for m in members}
        if len(kappas) != 1:
            raise RootSystemValidationError(
                f"multiplicity is not constant on the orbit of root {members[0]}",
                pair=(members[0], members[-1]),
            )
        value = kappas.pop()
        if value < 0:
            raise DomainError(f"multiplicities must be nonnegative, got {value}")
        values[o] = value
    orbit_of = {m: o for o, members in enumerate(orbits) for m in members}

    positive = []
    for i in range(len(pos_index)):
        vec = exact_roots[i]
        try:
            direction = rational_direction(vec)
            norm = sum(v * v for v in direction)
            scale_sq = Fraction(2) / norm
            exact_refl = reflection_matrix(direction)
        except SymbolicPathUnavailable:
            direction, scale_sq, exact_refl = None, None, None
        positive.append(
            PositiveRoot(
                vector=vec,
                numeric=numeric[i],
                kappa=values[orbit_of[i]],
                orbit=orbit_of[i],
                reflection=_reflect_numeric(numeric[i]),
                direction=direction,
                scale_sq=scale_sq,
                exact_reflection=exact_refl,
            )
        )
    total = sum((p.kappa for p in positive), Fraction(0))
    rs = RootSystemData(
        kind=kind,
        dim=d,
        roots=tuple(exact_roots),
        roots_numeric=numeric,
        positive=tuple(positive),
        multiplicity=Multiplicity(values=values, total=total),
        orbits=orbits,
        group=group,
        exact_group=exact_group,
        label=label,
    )
    logger.info(
        f"built root system {label or kind}: d={d}, |R|={len(exact_roots)}, "
        f"|G|={len(group)}, |kappa|={total}"
    )
    return rs


def z2d(lambdas: Sequence[Any], cap: int = DEFAULT_GROUP_CAP) -> RootSystemData:
    """Z_2^d: roots ±sqrt(2) e_j with per-coordinate multiplicities lambda_j"""
    lams = [as_fraction(v) for v in lambdas]
    d = len(lams)
    if d < 1:
        raise DomainError("Z2d needs d >= 1")
    if any(v < 0 for v in lams):
        raise DomainError(f"multiplicities must be nonnegative, got {[str(v) for v in lams]}")
    roots, kappas = [], []
    for j in range(d):
        for sign in (1, -1):
            vec = [sympy.Integer(0)] * d
            vec[j] = sign * sympy.sqrt(2)
            roots.append(tuple(vec))
            kappas.append(lams[j])
    label = "Z2^%d(%s)" % (d, ",".join(str(v) for v in lams))
    return _assemble("Z2d", roots, kappas, label, cap)


def type_a(rank: int, kappa: Any, cap: int = DEFAULT_GROUP_CAP) -> RootSystemData:
    """A_rank in R^(rank+1): roots ±(e_i - e_j), one orbit"""
    if rank < 1:
        raise DomainError("A needs rank >= 1")
    k = as_fraction(kappa)
    if k < 0:
        raise DomainError(f"multiplicities must be nonnegative, got {k}")
    d = rank + 1
    roots = []
    for i, j in itertools.combinations(range(d), 2):
        for sign in (1, -1):
            vec = [sympy.Integer(0)] * d
            vec[i], vec[j] = sympy.Integer(sign), sympy.Integer(-sign)
            roots.append(tuple(vec))
    return _assemble("A", roots, [k] * len(roots), f"A{rank}({k})", cap)


def type_b(d: int, kappa0: Any, kappa1: Any, cap: int = DEFAULT_GROUP_CAP) -> RootSystemData:
    """B_d: short roots ±sqrt(2) e_j (kappa0) and long roots ±(e_i ± e_j) (kappa1)"""
    if d < 2:
        raise DomainError("B needs d >= 2")
    k0, k1 = as_fraction(kappa0), as_fraction(kappa1)
    if k0 < 0 or k1 < 0:
        raise DomainError(f"multiplicities must be nonnegative, got ({k0}, {k1})")
    roots, kappas = [], []
    for j in range(d):
        for sign in (1, -1):
            vec = [sympy.Integer(0)] * d
            vec[j] = sign * sympy.sqrt(2)
            roots.append(tuple(vec))
            kappas.append(k0)
    for i, j in itertools.combinations(range(d), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            vec = [sympy.Integer(0)] * d
            vec[i], vec[j] = sympy.Integer(si), sympy.Integer(sj)
            roots.append(tuple(vec))
            kappas.append(k1)
    return _assemble("B", roots, kappas, f"B{d}({k0},{k1})", cap)


def custom(
    roots: Sequence[Sequence[Any]],
    kappa: Union[Any, Sequence[Any]],
    cap: int = DEFAULT_GROUP_CAP,
) -> RootSystemData:
    """Custom system: each root is rescaled to <alpha, alpha> = 2 and validated

    ``kappa`` is a scalar or one value per input root.
    """
    if not roots:
        raise RootSystemValidationError("empty root list")
    exact_in = [_exact_vector(r) for r in roots]
    d = len(exact_in[0])
    if any(len(r) != d for r in exact_in):
        raise RootSystemValidationError("roots have different dimensions")
    if isinstance(kappa, (list, tuple)):
        if len(kappa) != len(roots):
            raise DomainError("need one multiplicity per root")
        kappas_in = [as_fraction(k) for k in kappa]
    else:
        kappas_in = [as_fraction(kappa)] * len(roots)
    if any(k < 0 for k in kappas_in):
        raise DomainError("multiplicities must be nonnegative")

    numeric_in = [_numeric(r) for r in exact_in]
    if any(not np.any(v) for v in numeric_in):
        raise RootSystemValidationError("the zero vector is not a root")
    _check_reduced(numeric_in)

    exact_roots: List[ExactVector] = []
    kappas: List[Fraction] = []
    seen: Dict[Tuple[float, ...], int] = {}
    for vec, k in zip(exact_in, kappas_in):
        normalized = _normalize(vec)
        key = _key(_numeric(normalized))
        if key in seen:
            if kappas[seen[key]] != k:
                raise RootSystemValidationError("duplicate root with different multiplicities")
            continue
        seen[key] = len(exact_roots)
        exact_roots.append(normalized)
        kappas.append(k)
    for i, vec in enumerate(exact_roots):
        if sympy.simplify(sum(c * c for c in vec) - 2) != 0:
            raise RootSystemValidationError(f"root {i} could not be normalized exactly")
    _validate_closure(np.array([_numeric(r) for r in exact_roots]))
    # negation pairs must carry the same multiplicity
    for i, vec in enumerate(exact_roots):
        j = seen[_key(-_numeric(vec))]
        if kappas[i] != kappas[j]:
            raise RootSystemValidationError(
                f"roots {i} and {j} are negatives with different multiplicities", pair=(i, j)
            )
    return _assemble("custom", exact_roots, kappas, f"custom(d={d})", cap)


def build_root_system(kind: str, **params: Any) -> RootSystemData:
    """Dispatch on the kind name: Z2d(lambdas), A(rank, kappa), B(d, kappa0, kappa1), custom(roots, kappa)"""
    builders = {
        "Z2d": lambda: z2d(params["lambdas"], cap=params.get("cap", DEFAULT_GROUP_CAP)),
        "A": lambda: type_a(params["rank"], params["kappa"], cap=params.get("cap", DEFAULT_GROUP_CAP)),
        "B": lambda: type_b(
            params["d"], params["kappa0"], params["kappa1"], cap=params.get("cap", DEFAULT_GROUP_CAP)
        ),
        "custom": lambda: custom(params["roots"], params["kappa"], cap=params.get("cap", DEFAULT_GROUP_CAP)),
    }
    if kind not in builders:
        raise DomainError(f"unknown root-system kind {kind!r}; expected one of {ROOT_KINDS}")
    try:
        return builders[kind]()
    except KeyError as e:
        raise DomainError(f"root-system kind {kind!r} is missing parameter {e}") from e


# weights and measures


def weight_eval(rs: RootSystemData, x: Sequence[Any]) -> Union[Fraction, float]:
    """W_kappa(x) = prod over R+ of |<alpha, x>|^(2 kappa(alpha))

    Exact (a Fraction) for rational x when every multiplicity is an integer and every
    root has a rational direction; a float otherwise.
    """
    if len(x) != rs.dim:
        raise DomainError(f"point has {len(x)} coordinates, expected {rs.dim}")
    exact_point = all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in x)
    integral_kappa = all(p.kappa.denominator == 1 for p in rs.positive)
    if exact_point and integral_kappa and rs.symbolic_capable:
        xf = [Fraction(v) for v in x]
        value = Fraction(1)
        for p in rs.positive:
            if p.kappa == 0:
                continue
            lin = sum((l * v for l, v in zip(p.direction, xf)), Fraction(0))
            value *= (p.scale_sq * lin * lin) ** int(p.kappa)
        return value
    return float(weight_array(rs, np.asarray([float(v) for v in x]))[()])


def weight_array(rs: RootSystemData, x: np.ndarray) -> np.ndarray:
    """Vectorized W_kappa over points with shape (..., d)"""
    pts = np.asarray(x, dtype=float)
    out = np.ones(pts.shape[:-1])
    for p in rs.positive:
        if p.kappa:
            out = out * np.abs(pts @ p.numeric) ** (2.0 * float(p.kappa))
    return out


def ball_comparator(rs: RootSystemData, x: Sequence[float], r: float) -> float:
    """r^d prod over R of (|<alpha, x>| + r)^kappa(alpha)"""
    xv = np.asarray(x, dtype=float)
    value = r ** rs.dim
    for p in rs.positive:
        value *= (abs(float(xv @ p.numeric)) + r) ** (2.0 * float(p.kappa))
    return float(value)


def sphere_weight_mass(lambdas: Sequence[float]) -> float:
    """Integral of W_kappa over the unit sphere for Z_2^d (sqrt(2)-normalized roots)"""
    return 2.0 ** float(sum(lambdas)) * coordinate_sphere_mass(lambdas)


def _power_antiderivative(t: float, lam: float) -> float:
    return math.copysign(abs(t) ** (2.0 * lam + 1.0), t) / (2.0 * lam + 1.0)


def _ball_integral(rs: RootSystemData, center: np.ndarray, r: float, limit: int) -> float:
    d = rs.dim
    lambdas = rs.coordinate_lambdas

    def crossings(prefix: List[float], level: int, lo: float, hi: float) -> List[float]:
        pts = []
        for p in rs.positive:
            a = p.numeric
            if p.kappa == 0 or abs(a[level]) < 1e-14 or np.any(np.abs(a[level + 1:]) > 1e-14):
                continue
            t = -float(np.dot(a[:level], prefix)) / a[level]
            if lo < t < hi:
                pts.append(t)
        return sorted(pts)

    def slice_integral(prefix: List[float], level: int) -> float:
        rem = r * r - sum((prefix[i] - center[i]) ** 2 for i in range(level))
        if rem <= 0:
            return 0.0
        h = math.sqrt(rem)
        lo, hi = center[level] - h, center[level] + h
        if level == d - 1 and lambdas is not None:
            lam = lambdas[level]
            factor = 2.0 ** lam * (_power_antiderivative(hi, lam) - _power_antiderivative(lo, lam))
            for i in range(level):
                factor *= 2.0 ** lambdas[i] * abs(prefix[i]) ** (2.0 * lambdas[i])
            return factor
        if level == d - 1:
            def integrand(t: float) -> float:
                return float(weight_array(rs, np.array(prefix + [t])))
        else:
            def integrand(t: float) -> float:
                return slice_integral(prefix + [t], level + 1)
        pts = crossings(prefix, level, lo, hi)
        value, _ = quad(
            integrand, lo, hi, points=pts or None, limit=limit, epsabs=1e-13, epsrel=1e-11
        )
        return value

    return slice_integral([], 0)


def ball_measure(
    rs: RootSystemData,
    x: Sequence[float],
    r: float,
    budget: int = 100,
    tol: float = 1e-8,
) -> float:
    """|B(x, r)|_kappa, the W_kappa-measure of the Euclidean ball

    Nested adaptive quadrature with breakpoints at root hyperplanes; the innermost
    coordinate is integrated in closed form for product weights. The integral is
    recomputed with twice the subdivision budget; a relative change above ``tol``
    raises NumericalFailure with both estimates.
    """
    if r <= 0:
        raise DomainError(f"ball radius must be positive, got {r}")
    center = np.asarray(x, dtype=float)
    if center.shape != (rs.dim,):
        raise DomainError(f"center has shape {center.shape}, expected ({rs.dim},)")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        coarse = _ball_integral(rs, center, r, budget)
        if rs.dim == 1 and rs.coordinate_lambdas is not None:
            return coarse
        fine = _ball_integral(rs, center, r, 2 * budget)
    if abs(fine - coarse) > tol * max(abs(fine), 1e-300):
        raise NumericalFailure(
            f"ball measure did not converge at x={tuple(center)}, r={r}", estimates=(coarse, fine)
        )
    return fine


__all__ = [
    "DEFAULT_GROUP_CAP",
    "Multiplicity",
    "PositiveRoot",
    "RootSystemData",
    "ball_comparator",
    "ball_measure",
    "build_root_system",
    "custom",
    "generate_group",
    "orbit_decomposition",
    "sphere_weight_mass",
    "type_a",
    "type_b",
    "weight_array",
    "weight_eval",
    "z2d",
]

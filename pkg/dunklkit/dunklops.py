"""
Dunkl operators, the kappa-Laplacian in both forms, kappa-harmonic bases and the
exact polynomial identities built on them
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .errors import (
    CheckFailure,
    DomainError,
    InternalConsistencyError,
    SymbolicPathUnavailable,
)
from .polyring import Poly, act, as_fraction, divide_by_linear, monomials
from .rootsys import PositiveRoot, RootSystemData

logger = logging.getLogger(__name__)


def _require_symbolic(rs: RootSystemData) -> None:
    if not rs.symbolic_capable:
        raise SymbolicPathUnavailable(
            f"{rs.label or rs.kind} has roots without a rational direction; "
            f"use the numeric evaluation path"
        )


def _check_poly(rs: RootSystemData, p: Poly) -> None:
    if p.dim != rs.dim:
        raise DomainError(f"polynomial has {p.dim} x-variables, root system has dimension {rs.dim}")


def reflection_quotient(root: PositiveRoot, p: Poly) -> Poly:
    """(p - sigma_alpha p) / <l, x> for the rational direction l of the root"""
    return divide_by_linear(p - act(root.exact_reflection, p), root.direction)


def dunkl_apply(rs: RootSystemData, j: int, p: Poly) -> Poly:
    """D_j p = d_j p + sum over R+ of kappa(alpha) alpha_j (p - sigma_alpha p)/<alpha, x>

    j is 1-based. Since alpha_j/<alpha,x> = l_j/<l,x>, only exact arithmetic is used.
    """
    _require_symbolic(rs)
    _check_poly(rs, p)
    if not 1 <= j <= rs.dim:
        raise DomainError(f"Dunkl operator index {j} out of range 1..{rs.dim}")
    result = p.diff(j - 1)
    for root in rs.positive:
        if root.kappa == 0 or root.direction[j - 1] == 0:
            continue
        result = result + reflection_quotient(root, p) * (root.kappa * root.direction[j - 1])
    return result


def dunkl_gradient(rs: RootSystemData, u: Poly) -> List[Poly]:
    """(D_1 u, ..., D_d u) followed by d_y u when u depends on y"""
    out = [dunkl_apply(rs, j, u) for j in range(1, rs.dim + 1)]
    if u.has_y:
        out.append(u.diff(u.nvars - 1))
    return out


def directional_dunkl(rs: RootSystemData, u: Poly, normal: Sequence[Any]) -> Poly:
    """D_n u = sum_j n_j D_j u + n_y d_y u for a rational direction n in R^(d+1)"""
    n = [as_fraction(v) for v in normal]
    if len(n) != u.nvars:
        raise DomainError(f"normal has {len(n)} entries, expected {u.nvars}")
    total = Poly.zero(u.nvars, u.has_y)
    for comp, part in zip(n, dunkl_gradient(rs, u)):
        if comp:
            total = total + part * comp
    return total


def _explicit_laplacian(rs: RootSystemData, u: Poly) -> Poly:
    # Delta u + 2 sum kappa(alpha) delta_alpha u, with
    # delta_alpha u = <grad u, alpha>/<alpha,x> - (u - sigma u)/<alpha,x>^2
    total = Poly.zero(u.nvars, u.has_y)
    for i in range(u.nvars):
        total = total + u.diff(i).diff(i)
    for root in rs.positive:
        if root.kappa == 0:
            continue
        along = Poly.zero(u.nvars, u.has_y)
        for j, l in enumerate(root.direction):
            if l:
                along = along + u.diff(j) * l
        q = reflection_quotient(root, u)
        delta = divide_by_linear(along - q / root.scale_sq, root.direction)
        total = total + delta * (2 * root.kappa)
    return total


def dunkl_laplacian(rs: RootSystemData, u: Poly) -> Poly:
    """Delta_kappa u, computed as d_y^2 u + sum_j D_j^2 u and by the explicit form; both must agree"""
    _require_symbolic(rs)
    _check_poly(rs, u)
    via_operators = Poly.zero(u.nvars, u.has_y)
    if u.has_y:
        via_operators = u.diff(u.nvars - 1).diff(u.nvars - 1)
    for j in range(1, rs.dim + 1):
        via_operators = via_operators + dunkl_apply(rs, j, dunkl_apply(rs, j, u))
    explicit = _explicit_laplacian(rs, u)
    if via_operators != explicit:
        raise InternalConsistencyError(
            f"the two forms of the kappa-Laplacian disagree on {u}: "
            f"{via_operators} vs {explicit}"
        )
    return via_operators


def is_harmonic(rs: RootSystemData, u: Poly) -> bool:
    return dunkl_laplacian(rs, u).is_zero()


def _laplacian_matrix(rs: RootSystemData, n: int) -> Tuple[List[Tuple[int, ...]], sympy.Matrix]:
    nvars = rs.dim + 1
    basis = monomials(nvars, n)
    image_basis = monomials(nvars, n - 2) if n >= 2 else []
    row_of = {e: i for i, e in enumerate(image_basis)}
    mat = sympy.zeros(len(image_basis), len(basis))
    for col, exps in enumerate(basis):
        lap = dunkl_laplacian(rs, Poly({exps: 1}, nvars, True))
        for e, c in lap.items():
            mat[row_of[e], col] = sympy.Rational(c.numerator, c.denominator)
    return basis, mat


def harmonic_basis(rs: RootSystemData, n: int) -> List[Poly]:
    """Basis of the homogeneous degree-n kappa-harmonic polynomials in (x, y)

    Solves Delta_kappa p = 0 exactly over the rationals on the degree-n monomials.
    """
    if n < 0:
        raise DomainError("degree must be nonnegative")
    _require_symbolic(rs)
    nvars = rs.dim + 1
    if n < 2:
        return [Poly({e: 1}, nvars, True) for e in monomials(nvars, n)]
    basis, mat = _laplacian_matrix(rs, n)
    out = []
    for vec in mat.nullspace():
        terms = {}
        for e, c in zip(basis, vec):
            if c != 0:
                terms[e] = Fraction(int(c.p), int(c.q))
        p = Poly(terms, nvars, True)
        lead = p.terms[max(p.terms, key=lambda e: e)]
        out.append(p / lead)
    for p in out:
        if not is_harmonic(rs, p):
            raise InternalConsistencyError(f"harmonic basis element {p} is not kappa-harmonic")
    logger.debug(f"harmonic_basis: degree {n} has dimension {len(out)} for {rs.label}")
    return out


@dataclass
class RankReport:
    degree: int
    monomials: int
    rank: int
    nullity: int
    image_dimension: int

    @property
    def consistent(self) -> bool:
        return self.rank + self.nullity == self.monomials

    @property
    def surjective(self) -> bool:
        return self.rank == self.image_dimension


def harmonicity_rank_report(rs: RootSystemData, n: int) -> RankReport:
    """Rank-nullity of Delta_kappa from degree-n to degree-(n-2) polynomials in (x, y)"""
    nvars = rs.dim + 1
    if n < 2:
        count = len(monomials(nvars, n))
        return RankReport(n, count, 0, count, 0)
    basis, mat = _laplacian_matrix(rs, n)
    rank = mat.rank()
    return RankReport(
        degree=n,
        monomials=len(basis),
        rank=rank,
        nullity=len(mat.nullspace()),
        image_dimension=mat.rows,
    )


@dataclass
class SquareIdentityReport:
    """Both sides of Delta_kappa(u^2) = 2|grad u|^2 + 2 sum kappa ((u - sigma u)/<alpha,x>)^2"""

    u: Poly
    lhs: Poly
    rhs: Poly
    difference: Poly

    @property
    def holds(self) -> bool:
        return self.difference.is_zero()


def square_identity_check(rs: RootSystemData, u: Poly, strict: bool = True) -> SquareIdentityReport:
    if not is_harmonic(rs, u):
        raise DomainError(f"{u} is not kappa-harmonic")
    lhs = dunkl_laplacian(rs, u * u)
    rhs = Poly.zero(u.nvars, u.has_y)
    for g in u.gradient():
        rhs = rhs + g * g * 2
    for root in rs.positive:
        if root.kappa == 0:
            continue
        q = reflection_quotient(root, u)
        # (u - sigma u)/<alpha,x> = q/s with s^2 = 2/<l,l>
        rhs = rhs + q * q * (2 * root.kappa / root.scale_sq)
    report = SquareIdentityReport(u=u, lhs=lhs, rhs=rhs, difference=lhs - rhs)
    if strict and not report.holds:
        raise CheckFailure(
            f"square identity fails for {u}",
            details={"lhs": str(lhs), "rhs": str(rhs), "difference": str(report.difference)},
        )
    return report


def orbit_family(rs: RootSystemData, u: Poly) -> List[Poly]:
    """(sigma u) for sigma in G, in the canonical group order"""
    _require_symbolic(rs)
    return [act(g, u) for g in rs.exact_group]


@dataclass
class SubharmonicReport:
    minimum: float
    values: List[float]
    accepted: List[Tuple[float, ...]]
    rejected: List[Tuple[Tuple[float, ...], str]] = field(default_factory=list)

    def passed(self, tol: float) -> bool:
        return bool(self.values) and self.minimum >= -tol


def _exact_values(polys: Sequence[Poly], point: Sequence[Fraction]) -> Fraction:
    # |F|^2 at a rational point
    total = Fraction(0)
    for p in polys:
        v = p(*point)
        total += v * v
    return total


def subharmonic_probe(
    rs: RootSystemData,
    F: Sequence[Poly],
    points: Sequence[Sequence[float]],
    h_fd: float = 1e-4,
) -> SubharmonicReport:
    """Minimum of Delta_kappa |F| over sample points (x1..xd, y)

    The smooth part uses central differences of |F|^2 (evaluated exactly) with step
    h_fd times the local scale; reflection terms use exact evaluations at sigma(x).
    """
    if not F:
        raise DomainError("F must have at least one component")
    for p in F:
        _check_poly(rs, p)
        if not is_harmonic(rs, p):
            raise DomainError(f"component {p} is not kappa-harmonic")
    nvars = F[0].nvars
    values: List[float] = []
    accepted: List[Tuple[float, ...]] = []
    rejected: List[Tuple[Tuple[float, ...], str]] = []
    for raw in points:
        z = [Fraction(float(v)) for v in raw]
        if len(z) != nvars:
            raise DomainError(f"sample point {tuple(raw)} has the wrong dimension")
        S0 = _exact_values(F, z)
        g0 = float(S0) ** 0.5
        if g0 < 1e-10:
            rejected.append((tuple(float(v) for v in raw), "|F| below 1e-10"))
            continue
        zx = np.array([float(v) for v in z[: rs.dim]])
        if any(r.kappa and abs(float(zx @ r.numeric)) < 1e-8 for r in rs.positive):
            rejected.append((tuple(float(v) for v in raw), "on a reflection hyperplane"))
            continue
        scale = max(1.0, max(abs(float(v)) for v in z))
        h = Fraction(h_fd * scale)
        grad_S: List[float] = []
        lap_S = Fraction(0)
        for i in range(nvars):
            up = list(z)
            dn = list(z)
            up[i] += h
            dn[i] -= h
            Sp, Sm = _exact_values(F, up), _exact_values(F, dn)
            grad_S.append(float((Sp - Sm) / (2 * h)))
            lap_S += (Sp - 2 * S0 + Sm) / (h * h)
        grad_norm_sq = sum(v * v for v in grad_S)
        # Delta sqrt(S) = Delta S/(2 sqrt S) - |grad S|^2/(4 S^(3/2))
        value = float(lap_S) / (2 * g0) - grad_norm_sq / (4 * g0 ** 3)
        grad_g = np.array(grad_S[: rs.dim]) / (2 * g0)
        for root in rs.positive:
            if root.kappa == 0:
                continue
            pairing = float(zx @ root.numeric)
            reflected = list(z)
            sx = root.exact_reflection
            for a in range(rs.dim):
                reflected[a] = sum((sx[a][b] * z[b] for b in range(rs.dim)), Fraction(0))
            g_sigma = float(_exact_values(F, reflected)) ** 0.5
            delta = float(grad_g @ root.numeric) / pairing - (g0 - g_sigma) / pairing ** 2
            value += 2 * float(root.kappa) * delta
        values.append(value)
        accepted.append(tuple(float(v) for v in raw))
    minimum = min(values) if values else float("nan")
    logger.debug(f"subharmonic_probe: {len(values)} points, min={minimum!r}, rejected={len(rejected)}")
    return SubharmonicReport(minimum=minimum, values=values, accepted=accepted, rejected=rejected)


class HarmonicField:
    """A kappa-harmonic function u(x, y) on the upper half-space

    Backed by a kappa-harmonic Poly in (x1..xd, y) or by any object exposing
    ``evaluate(t, y)``, ``gradient(t, y)`` and ``square_laplacian(t, y)`` (the
    Poisson-integral backing).
    """

    def __init__(self, rs: RootSystemData, backing: Any, name: Optional[str] = None):
        self.rs = rs
        self.backing = backing
        self.name = name or str(backing)
        if isinstance(backing, Poly):
            if not backing.has_y or backing.dim != rs.dim:
                raise DomainError("polynomial backing must live in (x1..xd, y)")
            if not is_harmonic(rs, backing):
                raise DomainError(f"{backing} is not kappa-harmonic")
            self._gradient = backing.gradient()
            self._square_laplacian = dunkl_laplacian(rs, backing * backing)
        else:
            for attr in ("evaluate", "gradient", "square_laplacian"):
                if not callable(getattr(backing, attr, None)):
                    raise DomainError(f"field backing lacks {attr}()")

    @property
    def is_polynomial(self) -> bool:
        return isinstance(self.backing, Poly)

    @property
    def dim(self) -> int:
        return self.rs.dim

    @staticmethod
    def _stack(t: np.ndarray, y: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        y = np.asarray(y, dtype=float)
        shape = np.broadcast_shapes(t.shape[:-1], y.shape)
        t = np.broadcast_to(t, shape + (t.shape[-1],))
        y = np.broadcast_to(y, shape)
        return np.concatenate([t, y[..., None]], axis=-1)

    def evaluate(self, t: Any, y: Any) -> np.ndarray:
        """u at points t (shape (..., d)) and heights y (broadcastable to t.shape[:-1])"""
        if self.is_polynomial:
            return self.backing.evaluate_array(self._stack(t, y))
        return np.asarray(self.backing.evaluate(np.asarray(t, dtype=float), np.asarray(y, dtype=float)))

    def __call__(self, t: Any, y: Any) -> float:
        return float(self.evaluate(np.atleast_1d(np.asarray(t, dtype=float)), np.asarray(y, dtype=float)))

    def gradient(self, t: Any, y: Any) -> np.ndarray:
        """Full gradient (d_x1..d_xd, d_y), shape (..., d+1)"""
        if self.is_polynomial:
            pts = self._stack(t, y)
            return np.stack([g.evaluate_array(pts) for g in self._gradient], axis=-1)
        return np.asarray(self.backing.gradient(np.asarray(t, dtype=float), np.asarray(y, dtype=float)))

    def square_laplacian(self, t: Any, y: Any) -> np.ndarray:
        """Delta_kappa(u^2); exact polynomial evaluation for Poly backing"""
        if self.is_polynomial:
            return self._square_laplacian.evaluate_array(self._stack(t, y))
        return np.asarray(
            self.backing.square_laplacian(np.asarray(t, dtype=float), np.asarray(y, dtype=float))
        )

    def __repr__(self) -> str:
        return f"HarmonicField({self.name}, {self.rs.label})"


__all__ = [
    "HarmonicField",
    "RankReport",
    "SquareIdentityReport",
    "SubharmonicReport",
    "directional_dunkl",
    "dunkl_apply",
    "dunkl_gradient",
    "dunkl_laplacian",
    "harmonic_basis",
    "harmonicity_rank_report",
    "is_harmonic",
    "orbit_family",
    "reflection_quotient",
    "square_identity_check",
    "subharmonic_probe",
]

"""
Non-tangential probes near the boundary: cone suprema, limit and boundedness verdicts,
the Fatou equivalence table, Green-formula residuals and interior estimates
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from .area import AreaBudget, ConeSpec, FINITE, INDETERMINATE, area_integral
from .dunklops import HarmonicField, directional_dunkl, dunkl_laplacian
from .errors import DomainError, NumericalFailure, RefusedInputError
from .polyring import Poly
from .poisson import BoundaryDatum, PoissonBacked
from .quadrature import gauss_legendre, tensor_rule, weighted_panels
from .rootsys import z2d

logger = logging.getLogger(__name__)


@dataclass
class LevelStat:
    y: float
    sup_abs: float
    u_min: float
    u_max: float
    u_mean: float
    samples: int
    poisoned: bool = False


@dataclass
class ConeSupremumTable:
    cone: ConeSpec
    seed: int
    levels: List[LevelStat]

    @property
    def sups(self) -> List[float]:
        return [lv.sup_abs for lv in self.levels]


@dataclass
class NTProbeReport:
    """Verdicts of one non-tangential probe; limit_exists implies bounded"""

    x: Tuple[float, ...]
    a: float
    h: float
    levels: List[float]
    sups: List[float]
    bounded: bool
    limit_exists: bool
    limit_value: Optional[float]
    seed: int
    S_value: Optional[float] = None
    S_verdict: Optional[str] = None

    def row(self) -> Dict[str, Any]:
        return {
            "x": list(self.x),
            "a": self.a,
            "h": self.h,
            "bounded": self.bounded,
            "limit_exists": self.limit_exists,
            "limit_value": self.limit_value,
            "S_value": self.S_value,
            "S_verdict": self.S_verdict,
            "seed": self.seed,
        }


def _slice_offsets(dim: int, n: int, seed: int) -> np.ndarray:
    """Quasi-uniform points of the open unit ball, first n of a scrambled Sobol sequence"""
    m = max(1, int(math.ceil(math.log2(max(n, 2)))))
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    cube = 2.0 * sampler.random_base2(m + (1 if dim > 1 else 0)) - 1.0
    if dim > 1:
        cube = cube[np.linalg.norm(cube, axis=1) < 1.0]
    pts = cube[:n]
    return np.vstack([np.zeros((1, dim)), pts])


def _level_stat(u: HarmonicField, cone: ConeSpec, y: float, offsets: np.ndarray) -> LevelStat:
    t = np.asarray(cone.vertex)[None, :] + cone.aperture * y * offsets
    try:
        vals = np.asarray(u.evaluate(t, np.full(len(t), y)), dtype=float)
    except NumericalFailure as e:
        logger.warning(f"cone level y={y:.3g} poisoned: {e}")
        return LevelStat(y=y, sup_abs=math.nan, u_min=math.nan, u_max=math.nan, u_mean=math.nan,
                         samples=len(t), poisoned=True)
    if not np.all(np.isfinite(vals)):
        return LevelStat(y=y, sup_abs=math.nan, u_min=math.nan, u_max=math.nan, u_mean=math.nan,
                         samples=len(t), poisoned=True)
    return LevelStat(
        y=y, sup_abs=float(np.max(np.abs(vals))), u_min=float(vals.min()), u_max=float(vals.max()),
        u_mean=float(vals.mean()), samples=len(t),
    )


def cone_supremum(
    u: HarmonicField,
    cone: ConeSpec,
    n_slice: int = 16,
    levels: int = 14,
    seed: int = 0,
    refine_tol: float = 0.05,
    max_doublings: int = 3,
) -> ConeSupremumTable:
    """sup |u| over slices of the cone at y_k = h 2^-k, k = 0..levels

    Each slice sample is doubled until every level's sup moves by less than refine_tol.
    """
    if cone.dim != u.dim:
        raise DomainError(f"cone lives in dimension {cone.dim}, field in {u.dim}")
    ys = [cone.height * 2.0 ** (-k) for k in range(levels + 1)]
    # y = h itself lies on the lid of the open cone; sample just below it
    ys[0] = cone.height * (1.0 - 1e-9)
    n = n_slice
    table = [_level_stat(u, cone, y, _slice_offsets(cone.dim, n, seed)) for y in ys]
    for _ in range(max_doublings):
        n *= 2
        offsets = _slice_offsets(cone.dim, n, seed)
        refined = [_level_stat(u, cone, y, offsets) for y in ys]
        stable = all(
            old.poisoned or new.poisoned
            or abs(new.sup_abs - old.sup_abs) <= refine_tol * max(abs(new.sup_abs), 1e-300)
            for old, new in zip(table, refined)
        )
        table = refined
        if stable:
            break
    else:
        logger.warning(f"cone_supremum: slice sampling at x={cone.vertex} did not settle at n={n}")
    return ConeSupremumTable(cone=cone, seed=seed, levels=table)


def nt_limit_probe(
    u: HarmonicField,
    x: Any,
    a: float,
    h: float,
    n_slice: int = 16,
    levels: int = 14,
    tol_nt: float = 1e-3,
    bound_ratio: float = 2.0,
    window: int = 3,
    seed: int = 0,
    refine_tol: float = 0.05,
) -> NTProbeReport:
    """Boundedness and Cauchy-limit verdicts along Gamma_a^h(x)

    bounded: sup at the last level <= bound_ratio * sup over the preceding window + tol_nt.
    limit: bounded and the oscillation over the last ``window`` levels is below tol_nt.
    refine_tol is the slice-doubling tolerance handed to cone_supremum.
    """
    if window < 1:
        raise DomainError(f"window must be at least 1, got {window}")
    cone = ConeSpec(tuple(np.atleast_1d(np.asarray(x, dtype=float))), a, h)
    table = cone_supremum(u, cone, n_slice=n_slice, levels=levels, seed=seed, refine_tol=refine_tol)
    tail = table.levels[-window:]
    before = table.levels[-2 * window:-window] or table.levels[:1]
    poisoned = any(lv.poisoned for lv in tail + before)
    if poisoned:
        bounded, limit = False, False
    else:
        last = tail[-1].sup_abs
        reference = max(lv.sup_abs for lv in before)
        bounded = last <= bound_ratio * reference + tol_nt and all(
            lv.sup_abs <= bound_ratio * reference + tol_nt for lv in tail
        )
        oscillation = max(lv.u_max for lv in tail) - min(lv.u_min for lv in tail)
        limit = bounded and oscillation < tol_nt
    report = NTProbeReport(
        x=cone.vertex, a=a, h=h, levels=[lv.y for lv in table.levels], sups=table.sups,
        bounded=bool(bounded), limit_exists=bool(limit),
        limit_value=tail[-1].u_mean if limit else None, seed=seed,
    )
    logger.debug(f"nt_limit_probe x={cone.vertex}: bounded={report.bounded} limit={report.limit_value}")
    return report


@dataclass
class FatouTable:
    rows: List[NTProbeReport]
    agree: List[Optional[bool]]
    a: float
    h: float
    seed: int

    @property
    def decided(self) -> int:
        return sum(1 for v in self.agree if v is not None)

    @property
    def agreements(self) -> int:
        return sum(1 for v in self.agree if v)

    @property
    def agreement_rate(self) -> float:
        return self.agreements / self.decided if self.decided else 0.0

    @property
    def disagreements(self) -> List[Tuple[float, ...]]:
        return [row.x for row, ok in zip(self.rows, self.agree) if ok is False]

    def summary(self) -> Dict[str, Any]:
        return {
            "points": len(self.rows),
            "decided": self.decided,
            "agreements": self.agreements,
            "agreement_rate": self.agreement_rate,
            "indeterminate": len(self.rows) - self.decided,
            "disagreements": [list(x) for x in self.disagreements],
        }


def check_invariant_grid(grid: Sequence[Any], dim: int, atol: float = 1e-12) -> np.ndarray:
    """The grid as an (n, d) array; rejects grids not closed under coordinate sign flips"""
    pts = np.asarray(grid, dtype=float).reshape(-1, dim) if len(grid) else np.empty((0, dim))
    if len(pts) == 0:
        raise DomainError("empty grid")
    for j in range(dim):
        flipped = pts.copy()
        flipped[:, j] = -flipped[:, j]
        for p in flipped:
            if not np.any(np.all(np.abs(pts - p) <= atol, axis=1)):
                raise DomainError(f"grid is not invariant under reflections: {p.tolist()} missing")
    return pts


def _agreement(report: NTProbeReport) -> Optional[bool]:
    if report.S_verdict == INDETERMINATE:
        return None
    s_finite = report.S_verdict == FINITE
    return report.limit_exists == report.bounded == s_finite


def fatou_table(
    u: HarmonicField,
    grid: Sequence[Any],
    a: float,
    h: float,
    n_slice: int = 16,
    levels: int = 14,
    tol_nt: float = 1e-3,
    seed: int = 0,
    budget: Optional[AreaBudget] = None,
    runner: Optional[Any] = None,
    bound_ratio: float = 2.0,
    window: int = 3,
    refine_tol: float = 0.05,
) -> FatouTable:
    """Limit, boundedness and area-finiteness verdicts per grid point

    ``runner`` maps a list of zero-argument callables to their results in order; the
    default runs them sequentially.
    """
    if u.rs.coordinate_lambdas is None:
        raise DomainError("the area column needs a Z_2^d multiplicity")
    pts = check_invariant_grid(grid, u.dim)

    def probe(point: np.ndarray):
        def job() -> NTProbeReport:
            report = nt_limit_probe(
                u, point, a, h, n_slice=n_slice, levels=levels, tol_nt=tol_nt, bound_ratio=bound_ratio,
                window=window, seed=seed, refine_tol=refine_tol,
            )
            area = area_integral(u, point, a, h, budget=budget)
            report.S_value = area.value
            report.S_verdict = area.verdict
            return report
        return job

    jobs = [probe(p) for p in pts]
    rows = runner(jobs) if runner is not None else [job() for job in jobs]
    table = FatouTable(rows=list(rows), agree=[_agreement(r) for r in rows], a=a, h=h, seed=seed)
    logger.info(
        f"fatou_table: {table.agreements}/{table.decided} three-way agreements "
        f"({len(rows) - table.decided} indeterminate)"
    )
    return table


@dataclass
class GreenReport:
    volume: float
    flux: float
    flux_dunkl: float
    scale: float

    @property
    def residual(self) -> float:
        return abs(self.volume - self.flux) / self.scale

    @property
    def residual_dunkl(self) -> float:
        return abs(self.volume - self.flux_dunkl) / self.scale


def green_residual(
    lambdas: Sequence[float],
    u: Poly,
    v: Poly,
    R: float,
    y0: float,
    y1: float,
    n: Optional[int] = None,
) -> GreenReport:
    """Both Green forms on the G-invariant box [-R, R]^d x [y0, y1] with weight W_kappa

    Integrands are polynomials times the coordinate weight, so the panel rules are exact up
    to rounding once n exceeds half the degree.
    """
    lams = tuple(float(v_) for v_ in lambdas)
    d = len(lams)
    if not (R > 0 and 0 < y0 < y1):
        raise DomainError(f"box needs R > 0 and 0 < y0 < y1, got R={R}, y0={y0}, y1={y1}")
    for p in (u, v):
        if not p.has_y or p.dim != d:
            raise DomainError("Green residual takes polynomials in (x1..xd, y)")
    rs = z2d(lams)
    degree = max(u.degree(), 0) + max(v.degree(), 0) + 2
    n = n or max(8, degree // 2 + 2)
    scale_w = 2.0 ** sum(lams)
    x_rules = [weighted_panels([-R, 0.0, R], lam, n) for lam in lams]
    y_rule = gauss_legendre(n, y0, y1)

    lap_u, lap_v = dunkl_laplacian(rs, u), dunkl_laplacian(rs, v)
    volume_rule = tensor_rule(x_rules + [y_rule])
    pts = volume_rule.nodes
    vol_terms = v.evaluate_array(pts) * lap_u.evaluate_array(pts) - u.evaluate_array(pts) * lap_v.evaluate_array(pts)
    volume = scale_w * float(volume_rule.apply(vol_terms))
    magnitude = scale_w * float(volume_rule.apply(np.abs(vol_terms)))

    flux = 0.0
    flux_dunkl = 0.0
    nvars = d + 1
    faces = [(j, s) for j in range(nvars) for s in (-1, 1)]
    for j, s in faces:
        normal = [0] * nvars
        normal[j] = s
        du = u.diff(j) * s
        dv = v.diff(j) * s
        Du = directional_dunkl(rs, u, normal)
        Dv = directional_dunkl(rs, v, normal)
        others = [x_rules[i] if i < d else y_rule for i in range(nvars) if i != j]
        face_rule = tensor_rule(others) if len(others) > 1 else others[0]
        free = face_rule.nodes.reshape(-1, nvars - 1)
        fixed = (R if s > 0 else -R) if j < d else (y1 if s > 0 else y0)
        pts = np.insert(free, j, fixed, axis=1)
        # the face weight |t_j|^(2 lambda_j) is constant on x-faces
        face_w = abs(fixed) ** (2.0 * lams[j]) if j < d else 1.0
        uu, vv = u.evaluate_array(pts), v.evaluate_array(pts)
        plain = vv * du.evaluate_array(pts) - uu * dv.evaluate_array(pts)
        dunkl = vv * Du.evaluate_array(pts) - uu * Dv.evaluate_array(pts)
        flux += scale_w * face_w * float(face_rule.apply(plain))
        flux_dunkl += scale_w * face_w * float(face_rule.apply(dunkl))
        magnitude += scale_w * face_w * float(face_rule.apply(np.abs(plain)))
    report = GreenReport(volume=volume, flux=flux, flux_dunkl=flux_dunkl, scale=max(1.0, magnitude))
    logger.debug(
        f"green_residual: volume={volume!r} flux={flux!r} flux_D={flux_dunkl!r} scale={report.scale:.3g}"
    )
    return report


@dataclass
class GradientBoundReport:
    maximum: float
    refined_maximum: float
    wide_sup: float
    samples: int

    @property
    def drift(self) -> float:
        return abs(self.refined_maximum - self.maximum) / max(self.refined_maximum, 1e-300)


def _cone_points(cone: ConeSpec, levels: int, n_slice: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    offsets = _slice_offsets(cone.dim, n_slice, seed)
    ts, ys = [], []
    for k in range(levels + 1):
        y = cone.height * 2.0 ** (-k) * (1.0 - 1e-9)
        ts.append(np.asarray(cone.vertex)[None, :] + cone.aperture * y * offsets)
        ys.append(np.full(len(offsets), y))
    return np.vstack(ts), np.concatenate(ys)


def gradient_bound_probe(
    u: HarmonicField,
    x0: Any,
    a: float,
    h: float,
    b: float,
    eta: float,
    levels: int = 8,
    n_slice: int = 8,
    seed: int = 0,
    sup_tol: float = 1e-9,
) -> GradientBoundReport:
    """max of y |grad u| on Gamma_a^h(x0) for u bounded by 1 on the reflected wider cones"""
    if not (0 < a < b and 0 < h < eta):
        raise DomainError(f"need a < b and h < eta, got a={a}, b={b}, h={h}, eta={eta}")
    xv = np.atleast_1d(np.asarray(x0, dtype=float))
    wide_sup = 0.0
    signs = np.array(list(np.ndindex(*([2] * len(xv))))) * -2.0 + 1.0
    for sign in np.unique(signs * xv[None, :], axis=0):
        t, y = _cone_points(ConeSpec(tuple(sign), b, eta), levels, n_slice, seed)
        wide_sup = max(wide_sup, float(np.max(np.abs(u.evaluate(t, y)))))
    if wide_sup > 1.0 + sup_tol:
        raise RefusedInputError(f"sup |u| = {wide_sup:.6g} exceeds 1 on the wider cones")

    def maximum(n: int) -> Tuple[float, int]:
        t, y = _cone_points(ConeSpec(tuple(xv), a, h), levels, n, seed)
        grad = np.asarray(u.gradient(t, y), dtype=float)
        return float(np.max(y * np.linalg.norm(grad, axis=-1))), len(y)

    coarse, samples = maximum(n_slice)
    fine, _ = maximum(2 * n_slice)
    report = GradientBoundReport(maximum=coarse, refined_maximum=fine, wide_sup=wide_sup, samples=samples)
    logger.info(f"gradient_bound_probe x0={xv.tolist()}: max y|grad u| = {fine:.6g} (drift {report.drift:.2%})")
    return report


@dataclass
class MaximumPrincipleReport:
    interior_max: float
    boundary_max: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.interior_max <= self.boundary_max + self.tolerance


def maximum_principle_check(
    u: HarmonicField, R: float, y0: float, y1: float, n: int = 12, tolerance: float = 1e-6
) -> MaximumPrincipleReport:
    """max |u| on an interior grid of [-R, R]^d x [y0, y1] against the max on its faces"""
    if not (R > 0 and 0 < y0 < y1):
        raise DomainError(f"box needs R > 0 and 0 < y0 < y1, got R={R}, y0={y0}, y1={y1}")
    d = u.dim
    axes = [np.linspace(-R, R, n)] * d + [np.linspace(y0, y1, n)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d + 1)
    lo = np.array([-R] * d + [y0])
    hi = np.array([R] * d + [y1])
    on_face = np.any(np.isclose(grid, lo) | np.isclose(grid, hi), axis=1)
    values = np.abs(np.asarray(u.evaluate(grid[:, :d], grid[:, d]), dtype=float))
    report = MaximumPrincipleReport(
        interior_max=float(values[~on_face].max()), boundary_max=float(values[on_face].max()),
        tolerance=tolerance,
    )
    logger.debug(f"maximum_principle_check: interior {report.interior_max:.6g} boundary {report.boundary_max:.6g}")
    return report


@dataclass
class BarrierReport:
    minimum: float
    invariance_gap: float
    samples: int

    @property
    def positive(self) -> bool:
        return self.minimum > 0


def barrier_probe(
    lambdas: Sequence[float],
    half_widths: Sequence[float],
    a: float,
    h: float = 1.0,
    levels: int = 10,
    n_face: int = 5,
    n_panel: int = 16,
) -> BarrierReport:
    """H(t, y) = P chi_{E^c}(t, y) + y on the lateral boundary of the region over E

    E is the symmetric box prod [-c_j, c_j]; lateral points lie at distance a y from E
    across one face. P chi_{E^c} = 1 - P chi_E by the kernel normalization.
    """
    lams = tuple(float(v) for v in lambdas)
    c = np.asarray(half_widths, dtype=float)
    if len(c) != len(lams) or np.any(c <= 0):
        raise DomainError("E needs one positive half-width per coordinate")
    extension = PoissonBacked(lams, BoundaryDatum.indicator_box(-c, c), n_panel=n_panel)

    def barrier(t: np.ndarray, y: float) -> float:
        return 1.0 - extension.value(t, y) + y

    values, gaps = [], []
    for k in range(levels + 1):
        y = h * 2.0 ** (-k)
        for j in range(len(lams)):
            for inner in np.linspace(-1.0, 1.0, n_face) if len(lams) > 1 else [0.0]:
                t = c * inner
                t[j] = c[j] + a * y
                value = barrier(t, y)
                mirror = -t
                gaps.append(abs(value - barrier(mirror, y)))
                values.append(value)
    report = BarrierReport(minimum=float(min(values)), invariance_gap=float(max(gaps)), samples=len(values))
    logger.info(f"barrier_probe: min H = {report.minimum:.6g} over {report.samples} lateral points")
    return report


__all__ = [
    "BarrierReport",
    "ConeSupremumTable",
    "FatouTable",
    "GradientBoundReport",
    "GreenReport",
    "LevelStat",
    "MaximumPrincipleReport",
    "NTProbeReport",
    "barrier_probe",
    "check_invariant_grid",
    "cone_supremum",
    "fatou_table",
    "gradient_bound_probe",
    "green_residual",
    "maximum_principle_check",
    "nt_limit_probe",
]

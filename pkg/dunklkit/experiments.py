"""
Config-driven experiments: the three-way Fatou table, kernel-bound sweeps and area sweeps

Grid work is fanned out through run_parallel; rows come back in grid order so artifacts do
not depend on the worker count.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from .area import CONSTANT_CONVENTION, sandwich_residual
from .boundary import fatou_table
from .config import ExperimentConfig, FieldSpec
from .dunklops import HarmonicField
from .errors import DomainError
from .harness.suite_sdk import REPORT_SCHEMA_VERSION, run_parallel
from .poisson import PoissonBacked, ball_comparability_report, kernel_bound_ratio
from .polyring import parse_poly
from .rootsys import RootSystemData

logger = logging.getLogger(__name__)

FATOU_COLUMNS = ["x", "a", "h", "bounded", "limit_exists", "limit_value", "S_value", "S_verdict", "seed"]
KERNEL_BOUND_COLUMNS = ["x", "t", "y", "kernel", "lower", "upper"]
AREA_SWEEP_COLUMNS = ["x", "a", "h", "S_value", "S_verdict", "S_psi_a", "S_psi_2a", "ordered"]


@dataclass
class ExperimentResult:
    """Rows and summary of one experiment run"""
    experiment: str
    name: str
    seed: int
    columns: List[str]
    rows: List[Dict[str, Any]]
    summary: Dict[str, Any]
    passed: bool
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "experiment": self.experiment,
            "name": self.name,
            "seed": self.seed,
            "passed": self.passed,
            "columns": self.columns,
            "summary": self.summary,
            "rows": self.rows,
            "metadata": self.metadata,
        }


def build_field(spec: FieldSpec, rs: RootSystemData, config: ExperimentConfig) -> HarmonicField:
    """The kappa-harmonic field described by the config"""
    if spec.kind == "polynomial":
        return HarmonicField(rs, parse_poly(spec.polynomial, rs.dim), name=spec.polynomial)
    lambdas = rs.coordinate_lambdas
    if lambdas is None:
        raise DomainError("Poisson-backed fields need a Z_2^d multiplicity")
    backing = PoissonBacked(
        lambdas, spec.datum.build(rs.dim),
        n_panel=config.quadrature.n_panel, n_jacobi=config.quadrature.n_jacobi,
        fd_ratio=config.tolerances.fd_ratio,
    )
    return HarmonicField(rs, backing, name=backing.datum.description or spec.datum.kind)


def _runner(threads: int) -> Callable[[List[Callable[[], Any]]], List[Any]]:
    return lambda jobs: run_parallel(jobs, threads)


def _fatou(config: ExperimentConfig, threads: int) -> ExperimentResult:
    rs = config.root_system.build()
    u = build_field(config.field, rs, config)
    table = fatou_table(
        u, config.grid.points, config.cone.a, config.cone.h,
        n_slice=config.quadrature.n_slice, levels=config.quadrature.nt_levels,
        tol_nt=config.tolerances.tol_nt, seed=config.seed, budget=config.area_budget(),
        runner=_runner(threads), bound_ratio=config.tolerances.nt_bound_ratio,
        window=config.tolerances.nt_window, refine_tol=config.tolerances.nt_refinement,
    )
    summary = table.summary()
    passed = table.agreement_rate >= config.tolerances.agreement
    summary["required_agreement"] = config.tolerances.agreement
    return ExperimentResult(
        experiment="fatou", name=config.name, seed=config.seed, columns=FATOU_COLUMNS,
        rows=[row.row() for row in table.rows], summary=summary, passed=passed,
        metadata={"field": u.name, "root_system": rs.label, "convention": CONSTANT_CONVENTION},
    )


def _kernel_bounds(config: ExperimentConfig, threads: int) -> ExperimentResult:
    rs = config.root_system.build()
    lambdas = rs.coordinate_lambdas
    if lambdas is None or rs.dim != 1:
        raise DomainError("kernel_bounds sweeps a Z_2^1 grid")
    g = config.grid
    grid = [([x], [t], y) for x, t, y in itertools.product(g.x, g.t, g.y) if x != t]
    if not grid:
        raise DomainError("empty grid: every (x, t) pair has x = t")
    by_x = [[p for p in grid if p[0][0] == x] for x in dict.fromkeys(g.x)]
    by_x = [chunk for chunk in by_x if chunk]

    def job(chunk):
        return lambda: kernel_bound_ratio(lambdas, chunk, n=config.quadrature.n_jacobi, keep_rows=True)

    reports = run_parallel([job(chunk) for chunk in by_x], threads)
    rows = [row for report in reports for row in report.rows]
    lower = [r["lower"] for r in rows]
    upper = [r["upper"] for r in rows]
    ball_min, ball_max = ball_comparability_report(lambdas, grid)
    values = lower + upper
    finite_positive = bool(np.all(np.isfinite(values)) and min(values) > 0)
    summary = {
        "points": len(rows),
        "lower": [min(lower), max(lower)],
        "upper": [min(upper), max(upper)],
        "finite_positive": finite_positive,
        "ball_ratio": [ball_min, ball_max],
    }
    return ExperimentResult(
        experiment="kernel_bounds", name=config.name, seed=config.seed, columns=KERNEL_BOUND_COLUMNS,
        rows=rows, summary=summary, passed=finite_positive, metadata={"root_system": rs.label},
    )


def _area_sweep(config: ExperimentConfig, threads: int) -> ExperimentResult:
    rs = config.root_system.build()
    u = build_field(config.field, rs, config)
    budget = config.area_budget()
    h = config.cone.h

    def job(point: List[float], a: float):
        def run() -> Dict[str, Any]:
            triple = sandwich_residual(
                u, point, a, h, tolerance=config.tolerances.sandwich, budget=budget, strict=False
            )
            return {
                "x": list(point), "a": a, "h": h,
                "S_value": triple.middle.value, "S_verdict": triple.middle.verdict,
                "S_psi_a": triple.lower.value, "S_psi_2a": triple.upper.value,
                "ordered": triple.ordered,
            }
        return run

    jobs = [job(p, a) for p in config.grid.points for a in config.grid.apertures]
    rows = run_parallel(jobs, threads)
    ordered = sum(1 for r in rows if r["ordered"])
    summary = {"points": len(rows), "ordered": ordered}
    return ExperimentResult(
        experiment="area_sweep", name=config.name, seed=config.seed, columns=AREA_SWEEP_COLUMNS,
        rows=rows, summary=summary, passed=ordered == len(rows),
        metadata={"field": u.name, "root_system": rs.label, "convention": CONSTANT_CONVENTION},
    )


EXPERIMENTS: Dict[str, Callable[[ExperimentConfig, int], ExperimentResult]] = {
    "fatou": _fatou,
    "kernel_bounds": _kernel_bounds,
    "area_sweep": _area_sweep,
}


def run_experiment(config: ExperimentConfig, threads: int = 1, seed: Optional[int] = None) -> ExperimentResult:
    if seed is not None:
        config = config.model_copy(update={"seed": seed})
    try:
        logger.info(f"Running {config.experiment} experiment '{config.name}' with {threads} thread(s)")
        result = EXPERIMENTS[config.experiment](config, threads)
        logger.info(f"Experiment '{config.name}' finished: passed={result.passed} {result.summary}")
        return result
    except Exception as e:
        logger.error(f"Experiment '{config.name}' failed: {e}")
        raise


__all__ = [
    "AREA_SWEEP_COLUMNS",
    "EXPERIMENTS",
    "ExperimentResult",
    "FATOU_COLUMNS",
    "KERNEL_BOUND_COLUMNS",
    "build_field",
    "run_experiment",
]

"""
Boundary behaviour: Green identities, non-tangential probes, the three-way table,
the maximum principle, the barrier and the interior gradient bound
"""

from typing import Any, Dict, List, Optional

from ..boundary import (
    barrier_probe,
    fatou_table,
    gradient_bound_probe,
    green_residual,
    maximum_principle_check,
    nt_limit_probe,
)
from ..dunklops import HarmonicField
from ..harness.suite_sdk import BaseSuite, CheckTask, SuiteCapabilities, SuiteContext, require
from ..poisson import BoundaryDatum, PoissonBacked, kernel_field
from ..polyring import as_fraction, parse_poly
from ..rootsys import z2d

GREEN_PAIRS = [
    ("y^2", "1"),
    ("x1*y", "y"),
    ("x1^2", "y^2"),
    ("x1^3*y", "x1*y^2"),
    ("x1^2*y - y^3", "x1^4 + y"),
]


class BoundarySuite(BaseSuite):
    def __init__(self, context: Optional[SuiteContext] = None):
        super().__init__(
            SuiteCapabilities(name="boundary", description="boundary behaviour of kappa-harmonic functions"),
            context,
        )

    def build_tasks(self) -> List[CheckTask]:
        tasks = [
            CheckTask(
                id=f"green-{k}", name="green", anchor="Green formula on a G-invariant domain (d_n and D_n forms)",
                params={"u": u, "v": v},
            )
            for k, (u, v) in enumerate(GREEN_PAIRS, start=1)
        ]
        tasks += [
            CheckTask(id="nt-limit-xy", name="nt_limit", anchor="non-tangential limit of x y"),
            CheckTask(id="maximum-principle", name="maximum_principle", anchor="maximum principle"),
            CheckTask(
                id="fatou-kernel-field", name="fatou", anchor="non-tangential limit, boundedness and S u finite agree",
                params={"grid": [-0.5, 0.0, 0.5], "amplitude": 0.05},
            ),
            CheckTask(
                id="fatou-indicator-jump", name="fatou_jump",
                anchor="at a jump the cone stays bounded while the limit and S u finite fail",
                params={"grid": [-1.0, -0.5, 0.5, 1.0], "jumps": [-1.0, 1.0]},
            ),
            CheckTask(id="barrier", name="barrier", anchor="barrier H = P chi_{E^c} + y"),
            CheckTask(id="gradient-bound", name="gradient_bound", anchor="y |grad u| <= c in Gamma_a^h(x0)"),
        ]
        return tasks

    @property
    def nt_settings(self) -> Dict[str, Any]:
        """Sampling budget and thresholds handed to nt_limit_probe and fatou_table"""
        return {
            "n_slice": self.budget.n_slice,
            "levels": self.budget.nt_levels,
            "tol_nt": self.tol.tol_nt,
            "bound_ratio": self.tol.nt_bound_ratio,
            "window": self.tol.nt_window,
            "refine_tol": self.tol.nt_refinement,
            "seed": self.context.seed,
        }

    def check_green(self, u: str, v: str) -> Dict[str, Any]:
        lams = [0.5]
        report = green_residual(lams, parse_poly(u, 1), parse_poly(v, 1), R=1.0, y0=0.5, y1=1.5)
        tol = self.tol.green
        require(
            report.residual < tol and report.residual_dunkl < tol,
            f"Green residual too large for ({u}, {v})",
            residual=report.residual, residual_dunkl=report.residual_dunkl,
        )
        return {
            "u": u, "v": v, "volume": report.volume, "flux": report.flux,
            "residual": report.residual, "residual_dunkl": report.residual_dunkl,
        }

    def check_nt_limit(self) -> Dict[str, Any]:
        u = HarmonicField(z2d([0.5]), parse_poly("x1*y", 1), name="x1*y")
        report = nt_limit_probe(u, [0.5], 1.0, 1.0, **self.nt_settings)
        require(report.bounded and report.limit_exists, "x y has no non-tangential limit", **report.row())
        require(abs(report.limit_value) < self.tol.tol_nt, "limit of x y is not 0", limit=report.limit_value)
        return report.row()

    def check_maximum_principle(self) -> Dict[str, Any]:
        lam = self.lambdas[0]
        rs = z2d([lam])
        poly = parse_poly(f"x1^2 - ({1 + 2 * as_fraction(lam)})*y^2", 1)
        u = HarmonicField(rs, poly, name="x^2 - (1 + 2 lambda) y^2")
        report = maximum_principle_check(u, 1.0, 0.1, 1.0, tolerance=self.tol.maximum_principle)
        require(report.passed, "interior maximum exceeds the boundary maximum",
                interior=report.interior_max, boundary=report.boundary_max)
        return {"interior_max": report.interior_max, "boundary_max": report.boundary_max}

    def check_fatou(self, grid: List[float], amplitude: float) -> Dict[str, Any]:
        rs = z2d([0.5])
        u = HarmonicField(rs, kernel_field([0.5], amplitude), name="P_y(x)")
        table = fatou_table(u, [[g] for g in grid], 1.0, 1.0, budget=self.area_budget, **self.nt_settings)
        summary = table.summary()
        require(
            table.decided == len(grid) and table.agreement_rate >= self.tol.agreement,
            "three-way verdicts disagree", **summary,
        )
        return {**summary, "rows": [row.row() for row in table.rows]}

    def check_fatou_jump(self, grid: List[float], jumps: List[float]) -> Dict[str, Any]:
        field = PoissonBacked([0.5], BoundaryDatum.indicator_box([-1.0], [1.0]), n_panel=self.budget.n_panel)
        u = HarmonicField(z2d([0.5]), field, name="P(chi_[-1,1])")
        table = fatou_table(u, [[g] for g in grid], 1.0, 1.0, budget=self.area_budget, **self.nt_settings)
        summary = table.summary()
        require(table.decided == len(grid), "area verdict left indeterminate", **summary)
        require(
            sorted(x[0] for x in table.disagreements) == sorted(jumps),
            "disagreements are not exactly at the jumps", **summary,
        )
        for row in table.rows:
            if row.x[0] in jumps:
                require(
                    row.bounded and not row.limit_exists, "jump row is not bounded without a limit", **row.row()
                )
        return {**summary, "rows": [row.row() for row in table.rows]}

    def check_barrier(self) -> Dict[str, Any]:
        report = barrier_probe([0.5], [1.0], 1.0, n_panel=self.budget.n_panel)
        require(report.positive, "barrier is not positive on the lateral boundary", minimum=report.minimum)
        require(report.invariance_gap < self.tol.normalization, "barrier is not G-invariant",
                gap=report.invariance_gap)
        return {"minimum": report.minimum, "invariance_gap": report.invariance_gap, "samples": report.samples}

    def check_gradient_bound(self) -> Dict[str, Any]:
        field = PoissonBacked([0.5], BoundaryDatum.gaussian([0.0], 0.5, amplitude=0.9), n_panel=self.budget.n_panel)
        u = HarmonicField(z2d([0.5]), field, name="P(0.9 gaussian)")
        report = gradient_bound_probe(u, [0.5], 0.5, 0.5, 1.0, 1.0, seed=self.context.seed)
        require(report.drift < self.tol.refinement, "gradient bound moves under sample doubling",
                coarse=report.maximum, fine=report.refined_maximum)
        return {"maximum": report.refined_maximum, "wide_sup": report.wide_sup, "drift": report.drift}


__all__ = ["BoundarySuite", "GREEN_PAIRS"]

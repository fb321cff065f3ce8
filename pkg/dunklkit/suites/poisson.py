"""
kappa-Poisson kernel: normalizations, contraction, harmonicity and two-sided bounds
"""

import itertools
from typing import Any, Dict, List, Optional

import numpy as np

from ..harness.suite_sdk import BaseSuite, CheckTask, SuiteCapabilities, SuiteContext, require
from ..poisson import BoundaryDatum, PoissonBacked, kernel_bound_ratio, kernel_mass, translated_kernel_mass

MASS_PAIRS = [
    ([0.5], [0.0], 1.0),
    ([0.5], [0.3], 0.5),
    ([0.5], [-1.2], 0.2),
    ([0.5], [2.0], 1.5),
    ([1.0], [0.7], 0.1),
    ([0.0], [0.4], 0.3),
    ([1.5], [-0.5], 0.8),
    ([0.5, 0.5], [0.3, -0.6], 0.5),
    ([0.5, 1.0], [0.8, 0.2], 1.0),
    ([0.0, 0.5], [-0.4, 0.9], 0.7),
]


class PoissonSuite(BaseSuite):
    """Normalizations and qualitative properties of the kernel and of Poisson integrals"""

    def __init__(self, context: Optional[SuiteContext] = None):
        super().__init__(
            SuiteCapabilities(name="poisson", description="Poisson kernel and Poisson integrals"),
            context,
        )

    def build_tasks(self) -> List[CheckTask]:
        return [
            CheckTask(
                id="kernel-mass", name="kernel_mass", anchor="c_kappa int P_y dw_kappa = 1",
                params={"sweep": [0.0, 0.5, 1.0]},
            ),
            CheckTask(
                id="translated-kernel-mass", name="translated_mass",
                anchor="c_kappa int (tau_x P_y)(-t) dw_kappa(t) = 1",
            ),
            CheckTask(id="contraction", name="contraction", anchor="|Pf| <= ||f||_inf"),
            CheckTask(id="invariance", name="invariance", anchor="Pf is G-invariant for G-invariant f"),
            CheckTask(id="harmonicity", name="harmonicity", anchor="Delta_kappa Pf = 0"),
            CheckTask(id="kernel-bounds", name="kernel_bounds", anchor="two-sided estimate of (tau_x P_y)(-t)"),
        ]

    def check_kernel_mass(self, sweep: List[float]) -> Dict[str, Any]:
        rows = []
        for lam in sweep:
            for d in (1, 2):
                lams = [lam] * d
                value = kernel_mass(lams, 1.0)
                require(
                    abs(value - 1.0) < self.tol.kernel_mass,
                    f"kernel mass {value!r} for lambdas {lams}", lambdas=lams, value=value,
                )
                rows.append({"lambdas": lams, "mass": value})
        value = kernel_mass(self.lambdas, 0.7)
        require(abs(value - 1.0) < self.tol.kernel_mass, f"kernel mass {value!r}", lambdas=list(self.lambdas))
        rows.append({"lambdas": list(self.lambdas), "mass": value})
        return {"rows": rows}

    def check_translated_mass(self) -> Dict[str, Any]:
        rows = []
        for lams, x, y in MASS_PAIRS:
            value = translated_kernel_mass(lams, x, y, n_panel=self.budget.n_panel)
            require(
                abs(value - 1.0) < self.tol.normalization,
                f"translated kernel mass {value!r} at x={x}, y={y}", lambdas=lams,
            )
            rows.append({"lambdas": lams, "x": x, "y": y, "mass": value})
        return {"rows": rows}

    def _indicator_field(self) -> PoissonBacked:
        d = len(self.lambdas)
        return PoissonBacked(
            self.lambdas, BoundaryDatum.indicator_box([-1.0] * d, [1.0] * d), n_panel=self.budget.n_panel
        )

    def _sample_points(self, count: int) -> List[Any]:
        rng = np.random.default_rng(self.context.seed)
        d = len(self.lambdas)
        return [(rng.uniform(-2.0, 2.0, d), float(rng.uniform(0.05, 1.5))) for _ in range(count)]

    def check_contraction(self) -> Dict[str, Any]:
        field = self._indicator_field()
        values = [field.value(x, y) for x, y in self._sample_points(12)]
        low, high = min(values), max(values)
        slack = self.tol.normalization
        require(low >= -slack and high <= 1.0 + slack, "Poisson integral leaves [0, 1]", min=low, max=high)
        return {"min": low, "max": high}

    def check_invariance(self) -> Dict[str, Any]:
        field = self._indicator_field()
        d = len(self.lambdas)
        worst = 0.0
        for x, y in self._sample_points(4):
            base = field.value(x, y)
            for signs in itertools.product((1.0, -1.0), repeat=d):
                worst = max(worst, abs(base - field.value(np.asarray(signs) * x, y)))
        require(worst < self.tol.normalization, "Pf changes under a reflection", gap=worst)
        return {"max_gap": worst}

    def check_harmonicity(self) -> Dict[str, Any]:
        field = PoissonBacked(
            [0.5], BoundaryDatum.gaussian([0.3], 0.5), n_panel=self.budget.n_panel, fd_ratio=self.tol.fd_ratio
        )
        rows = []
        for x, y in [([0.4], 0.5), ([-0.8], 0.3), ([1.3], 1.0)]:
            residual = field.harmonicity_residual(x, y)
            require(residual < self.tol.tol_harm, f"Delta_kappa Pf = {residual:.3g} at x={x}, y={y}")
            rows.append({"x": x, "y": y, "residual": residual})
        return {"rows": rows}

    def check_kernel_bounds(self) -> Dict[str, Any]:
        axis = [-1.5, -0.4, 0.3, 1.1]
        grid = [
            ([x], [t], y)
            for x, t, y in itertools.product(axis, axis, [0.05, 0.3, 1.0])
            if x != t
        ]
        report = kernel_bound_ratio([0.5], grid, n=self.budget.n_jacobi)
        require(report.finite_positive, "kernel bound ratios are not finite and positive")
        return {
            "points": report.points,
            "lower": [report.min_lower, report.max_lower],
            "upper": [report.min_upper, report.max_upper],
        }


__all__ = ["PoissonSuite"]

"""
Generalized spherical means: the mean-value property and the Darboux-type identity
"""

from typing import Any, Dict, List, Optional

import numpy as np

from ..dunklops import harmonic_basis
from ..harness.suite_sdk import BaseSuite, CheckTask, SuiteCapabilities, SuiteContext, require
from ..means import darboux_residual, mean_value_residual, spherical_mean_field
from ..polyring import parse_poly
from ..rootsys import z2d


class MeansSuite(BaseSuite):
    def __init__(self, context: Optional[SuiteContext] = None):
        super().__init__(
            SuiteCapabilities(name="means", description="generalized spherical means"),
            context,
        )

    def build_tasks(self) -> List[CheckTask]:
        return [
            CheckTask(
                id="mean-value", name="mean_value", anchor="M_u(x, r) = u(x) for kappa-harmonic u",
                params={"triples": 20},
            ),
            CheckTask(
                id="mean-of-y-squared", name="mean_gap",
                anchor="M_{y^2}((x, y), r) - y^2 = r^2/(2|kappa| + d + 1)",
            ),
            CheckTask(id="darboux", name="darboux", anchor="Darboux-type identity for M_f"),
        ]

    def check_mean_value(self, triples: int) -> Dict[str, Any]:
        rng = np.random.default_rng(self.context.seed)
        fields = []
        for lams in ([0.5], [0.5, 1.0]):
            rs = z2d(lams)
            for n in range(5):
                fields.extend((lams, u) for u in harmonic_basis(rs, n))
        picks = rng.choice(len(fields), size=triples, replace=len(fields) < triples)
        worst = 0.0
        for index in picks:
            lams, u = fields[int(index)]
            x = rng.uniform(-1.0, 1.0, len(lams))
            y = float(rng.uniform(0.5, 1.5))
            r = float(rng.uniform(0.05, 0.9)) * y
            center = float(u.evaluate_array(np.concatenate([x, [y]])[None, :])[0])
            residual = mean_value_residual(lams, u, x, y, r, self.budget.n_sphere, self.budget.n_jacobi)
            scaled = residual / (1.0 + abs(center))
            worst = max(worst, scaled)
            require(scaled < self.tol.tol_mv, f"mean-value property fails for {u}", residual=residual)
        return {"triples": triples, "max_scaled_residual": worst}

    def check_mean_gap(self) -> Dict[str, Any]:
        lams = list(self.lambdas)
        d = len(lams)
        u = parse_poly("y^2", d, has_y=True)
        expected_factor = 1.0 / (2.0 * sum(lams) + d + 1.0)
        worst = 0.0
        for y, r in [(1.0, 0.5), (2.0, 1.5), (0.7, 0.1)]:
            x = np.full(d, 0.3)
            gap = spherical_mean_field(lams, u, x, y, r, self.budget.n_sphere, self.budget.n_jacobi) - y * y
            worst = max(worst, abs(gap - r * r * expected_factor))
        require(worst < self.tol.tol_mv, "mean of y^2 misses r^2/(2|kappa| + d + 1)", error=worst)
        return {"max_error": worst}

    def check_darboux(self) -> Dict[str, Any]:
        rows = []
        for lams, text, x in [([0.5], "x1^4 + x1^2", [0.6]), ([0.5, 1.0], "x1^2*x2^2 - x2^3", [0.4, -0.3])]:
            f = parse_poly(text, len(lams), has_y=False)
            for r in (0.3, 1.0):
                residual = darboux_residual(lams, f, x, r, self.budget.n_sphere, self.budget.n_jacobi)
                require(residual < self.tol.tol_mv, f"Darboux identity fails for {text}", residual=residual, r=r)
                rows.append({"f": text, "r": r, "residual": residual})
        return {"rows": rows}


__all__ = ["MeansSuite"]

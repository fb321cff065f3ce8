"""
Area integrals: the closed-form value, the sandwich ordering and the cutoff
"""

import math
from typing import Any, Dict, List, Optional

import numpy as np

from ..area import (
    CONSTANT_CONVENTION,
    FINITE,
    area_integral,
    cone_integral_classical,
    cutoff_support_probe,
    make_cutoff,
    sandwich_residual,
)
from ..dunklops import HarmonicField, harmonic_basis
from ..harness.suite_sdk import BaseSuite, CheckTask, SuiteCapabilities, SuiteContext, require
from ..poisson import BoundaryDatum, PoissonBacked
from ..polyring import parse_poly
from ..rootsys import z2d

CURATED_FIELDS = ["y", "x1*y", "harmonic degree 2", "harmonic degree 3", "poisson gaussian"]


def curated_field(name: str, lambdas=(0.5,), n_panel: int = 24) -> HarmonicField:
    """The d = 1 fields of the sandwich check"""
    rs = z2d(lambdas)
    if name in ("y", "x1*y"):
        return HarmonicField(rs, parse_poly(name, 1), name=name)
    if name.startswith("harmonic degree"):
        degree = int(name.rsplit(" ", 1)[1])
        return HarmonicField(rs, harmonic_basis(rs, degree)[0], name=name)
    datum = BoundaryDatum.gaussian([0.3], 0.5)
    return HarmonicField(rs, PoissonBacked(lambdas, datum, n_panel=n_panel), name=name)


class AreaSuite(BaseSuite):
    def __init__(self, context: Optional[SuiteContext] = None):
        super().__init__(
            SuiteCapabilities(name="area", description="area integrals and the sandwich"),
            context,
        )

    def build_tasks(self) -> List[CheckTask]:
        tasks = [
            CheckTask(id="area-of-y", name="closed_form", anchor="S_{1,1} y = 1 for lambda = 1/2"),
            CheckTask(id="area-of-constant", name="constant", anchor="S u = 0 for constant u"),
        ]
        tasks += [
            CheckTask(
                id=f"sandwich-{name.replace(' ', '-').replace('*', '')}", name="sandwich",
                anchor="S^psi_{a,h} <= S_{a,h} <= S^psi_{2a,h}",
                params={"field": name, "x": 0.4},
            )
            for name in CURATED_FIELDS
        ]
        tasks += [
            CheckTask(id="cutoff-profile", name="cutoff", anchor="psi = 1 on |x| <= 1/2, 0 on |x| >= 1"),
            CheckTask(
                id="cutoff-support", name="cutoff_support",
                anchor="supp tau_{-x/ay} psi(./ay) lies in the reflected cones",
            ),
            CheckTask(
                id="classical-cone", name="classical_cone", anchor="S at kappa = 0 is the classical cone integral",
            ),
        ]
        return tasks

    def check_closed_form(self) -> Dict[str, Any]:
        u = curated_field("y")
        result = area_integral(u, [0.0], 1.0, 1.0, budget=self.area_budget)
        require(result.verdict == FINITE, f"S y is {result.verdict}", estimates=result.estimates)
        error = abs(result.value - 1.0)
        require(error < self.tol.delta_rel, f"S y = {result.value!r}, expected 1", convention=CONSTANT_CONVENTION)
        return {"value": result.value, "error": error, "convention": CONSTANT_CONVENTION}

    def check_constant(self) -> Dict[str, Any]:
        u = HarmonicField(z2d(self.lambdas), parse_poly("1", len(self.lambdas)), name="1")
        result = area_integral(u, [0.2] * len(self.lambdas), 1.0, 1.0, budget=self.area_budget)
        require(result.value == 0.0 and result.verdict == FINITE, f"S 1 = {result.value!r}")
        return {"value": result.value, "verdict": result.verdict}

    def check_sandwich(self, field: str, x: float) -> Dict[str, Any]:
        u = curated_field(field, n_panel=self.budget.n_panel)
        triple = sandwich_residual(
            u, [x], 1.0, 1.0, tolerance=self.tol.sandwich, budget=self.area_budget, strict=False
        )
        require(triple.ordered, f"sandwich ordering fails for {field}", **triple.to_dict())
        return {"field": field, "x": x, **triple.to_dict()}

    def check_cutoff(self) -> Dict[str, Any]:
        psi = make_cutoff()
        values = {"0.3": float(psi(0.3)), "0.75": float(psi(0.75)), "1.2": float(psi(1.2))}
        require(psi.check(), "cutoff profile is not a monotone bridge from 1 to 0")
        require(values["0.3"] == 1.0 and values["1.2"] == 0.0, "cutoff values off", **values)
        return {"values": values}

    def check_cutoff_support(self) -> Dict[str, Any]:
        x, a = [0.5], 1.0
        points = [([t], y) for y in (0.05, 0.1, 0.2) for t in (0.5 + 1.5 * y, -0.5 - 1.2 * y, 2.0)]
        worst = cutoff_support_probe([0.5], x, a, points, n_jacobi=self.budget.n_jacobi)
        require(worst == 0.0, "translated cutoff is nonzero outside the reflected cones", value=worst)
        return {"points": len(points), "max_abs": worst}

    def check_classical_cone(self) -> Dict[str, Any]:
        u = HarmonicField(z2d([0]), parse_poly("x1*y", 1), name="x1*y")
        result = area_integral(u, [0.3], 1.0, 1.0, budget=self.area_budget)

        def integrand(t: np.ndarray, y: float) -> np.ndarray:
            return 2.0 * (t[:, 0] ** 2 + y * y)

        direct = cone_integral_classical(
            [0.0], integrand, [0.3], 1.0, 1.0, delta=result.delta, levels=self.budget.levels,
        )
        error = abs(result.value - math.sqrt(direct))
        require(error < self.tol.tol_mv * (1.0 + result.value), "S differs from the classical cone integral",
                area=result.value, classical=math.sqrt(direct))
        return {"S": result.value, "classical": math.sqrt(direct)}


__all__ = ["AreaSuite", "CURATED_FIELDS", "curated_field"]

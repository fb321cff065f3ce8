"""
Exact identities of the Dunkl operators over the rationals
"""

import itertools
from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..dunklops import (
    dunkl_apply,
    harmonic_basis,
    harmonicity_rank_report,
    orbit_family,
    square_identity_check,
    subharmonic_probe,
)
from ..harness.suite_sdk import BaseSuite, CheckTask, SuiteCapabilities, SuiteContext, require
from ..polyring import Poly, monomials, parse_poly
from ..rootsys import build_root_system, z2d

SYSTEMS: Dict[str, Dict[str, Any]] = {
    "Z2^3": {"kind": "Z2d", "lambdas": [Fraction(1, 2), 1, 2]},
    "A2": {"kind": "A", "rank": 2, "kappa": 1},
    "B2": {"kind": "B", "d": 2, "kappa0": Fraction(1, 2), "kappa1": Fraction(3, 2)},
    "Z2^2": {"kind": "Z2d", "lambdas": [Fraction(1, 2), 1]},
}

EXPECTED_ORDERS = {"Z2^3": 8, "B2": 8, "A2": 6}


def _system(label: str):
    return build_root_system(**SYSTEMS[label])


class SymbolicSuite(BaseSuite):
    """Commutativity, the square identity, group orders and rank-nullity, all exact"""

    def __init__(self, context: Optional[SuiteContext] = None):
        super().__init__(
            SuiteCapabilities(name="symbolic", description="exact polynomial identities"),
            context,
        )

    def build_tasks(self) -> List[CheckTask]:
        tasks = [
            CheckTask(
                id=f"commutativity-{label}", name="commutativity", anchor="commutativity D_iD_j",
                params={"label": label, "max_degree": 8},
            )
            for label in ("Z2^3", "A2", "B2")
        ]
        tasks += [
            CheckTask(
                id=f"square-identity-{label}", name="square_identity",
                anchor="Delta_kappa(u^2) = 2|grad u|^2 + 2 sum kappa ((u - sigma u)/<alpha,x>)^2",
                params={"label": label, "max_degree": 6},
            )
            for label in ("Z2^2", "B2")
        ]
        tasks.append(CheckTask(id="group-orders", name="group_orders", anchor="finite reflection group G"))
        tasks.append(CheckTask(
            id="dunkl-of-x", name="dunkl_of_x", anchor="D x = 1 + 2 lambda",
            params={"lambdas": ["0", "1/2", "1", "5/2"]},
        ))
        tasks.append(CheckTask(
            id="rank-nullity-B2", name="rank_nullity", anchor="Delta_kappa maps P_n onto P_(n-2)",
            params={"label": "B2", "max_degree": 5},
        ))
        tasks.append(CheckTask(
            id="orbit-subharmonic", name="subharmonic", anchor="Delta_kappa |F| >= 0 where |F| > 0",
            params={"components": ["x1*y", "x1^2 - 2*y^2"], "orbit_of": "x1*y + x1^2 - 2*y^2"},
        ))
        return tasks

    def check_commutativity(self, label: str, max_degree: int) -> Dict[str, Any]:
        rs = _system(label)
        d = rs.dim
        checked = 0
        for degree in range(max_degree + 1):
            for exps in monomials(d, degree):
                p = Poly({exps: 1}, d)
                for i, j in itertools.combinations(range(1, d + 1), 2):
                    lhs = dunkl_apply(rs, i, dunkl_apply(rs, j, p))
                    rhs = dunkl_apply(rs, j, dunkl_apply(rs, i, p))
                    require(lhs == rhs, f"D_{i}D_{j} != D_{j}D_{i} on {p}", system=label, difference=str(lhs - rhs))
                    checked += 1
        return {"system": rs.label, "max_degree": max_degree, "pairs_checked": checked}

    def check_square_identity(self, label: str, max_degree: int) -> Dict[str, Any]:
        rs = _system(label)
        counts = []
        for n in range(max_degree + 1):
            basis = harmonic_basis(rs, n)
            for u in basis:
                report = square_identity_check(rs, u, strict=False)
                require(report.holds, f"square identity fails for {u}", difference=str(report.difference))
            counts.append(len(basis))
        return {"system": rs.label, "basis_sizes": counts}

    def check_group_orders(self) -> Dict[str, Any]:
        orders = {label: _system(label).order for label in EXPECTED_ORDERS}
        require(orders == EXPECTED_ORDERS, "group orders differ", orders=orders, expected=EXPECTED_ORDERS)
        return {"orders": orders}

    def check_dunkl_of_x(self, lambdas: List[str]) -> Dict[str, Any]:
        values = {}
        for text in lambdas:
            lam = Fraction(text)
            rs = build_root_system("Z2d", lambdas=[lam])
            image = dunkl_apply(rs, 1, Poly.variable(0, 1))
            expected = Poly.constant(1 + 2 * lam, 1)
            require(image == expected, f"D x = {image} for lambda = {lam}", expected=str(expected))
            values[text] = str(image)
        return {"images": values}

    def check_rank_nullity(self, label: str, max_degree: int) -> Dict[str, Any]:
        rs = _system(label)
        rows = []
        for n in range(2, max_degree + 1):
            report = harmonicity_rank_report(rs, n)
            require(
                report.consistent and report.surjective,
                f"rank-nullity fails in degree {n}",
                rank=report.rank, nullity=report.nullity, monomials=report.monomials,
            )
            rows.append({"degree": n, "rank": report.rank, "nullity": report.nullity})
        return {"system": rs.label, "degrees": rows}

    def check_subharmonic(self, components: List[str], orbit_of: str) -> Dict[str, Any]:
        rs = z2d([Fraction(1, 2)])
        points = [(x, y) for x in (-0.5, 0.3, 0.7, 1.2) for y in (0.2, 0.6, 1.1)]
        families = {
            "components": [parse_poly(text, 1) for text in components],
            "orbit": orbit_family(rs, parse_poly(orbit_of, 1)),
        }
        minima = {}
        for key, F in families.items():
            report = subharmonic_probe(rs, F, points, h_fd=self.tol.h_fd)
            require(
                report.passed(self.tol.tol_fd), f"Delta_kappa |F| is negative for the {key} family",
                minimum=report.minimum, rejected=len(report.rejected),
            )
            minima[key] = report.minimum
        return {"minima": minima, "points": len(points)}


__all__ = ["SymbolicSuite"]

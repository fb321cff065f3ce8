"""
Generalized translation, the intertwining measure and the Dunkl kernel
"""

from typing import Any, Dict, List, Optional

import numpy as np

from ..harness.suite_sdk import BaseSuite, CheckTask, SuiteCapabilities, SuiteContext, require
from ..intertwine import (
    TranslationEvaluator,
    density_bound_probe,
    intertwine_apply,
    kernel_eigen_residual,
    translation_laplacian_residual,
)
from ..polyring import parse_poly


def _gaussian(points: np.ndarray) -> np.ndarray:
    return np.exp(-np.sum(points * points, axis=-1))


def _gaussian_profile(r: np.ndarray) -> np.ndarray:
    return np.exp(-r * r)


class TranslationSuite(BaseSuite):
    """Cross-validates the product and radial translation formulas against closed forms"""

    def __init__(self, context: Optional[SuiteContext] = None):
        super().__init__(
            SuiteCapabilities(name="translation", description="generalized translation and intertwining"),
            context,
        )

    def build_tasks(self) -> List[CheckTask]:
        return [
            CheckTask(
                id="translate-square", name="translate_square",
                anchor="tau_x |t|^2 = sum_j x_j^2 + t_j^2 + 2 x_j t_j/(2 lambda_j + 1)",
            ),
            CheckTask(
                id="point-vs-radial", name="point_vs_radial",
                anchor="radial translation formula", params={"samples": 50},
            ),
            CheckTask(id="classical-shift", name="classical_shift", anchor="tau_x f(t) = f(x + t) for kappa = 0"),
            CheckTask(
                id="intertwining-first-moment", name="first_moment",
                anchor="int theta dm_lambda = 1/(2 lambda + 1)",
                params={"lambdas": [0.0, 0.25, 0.5, 1.0, 2.0]},
            ),
            CheckTask(id="kernel-eigenfunction", name="kernel_eigen", anchor="D_j E(., z) = z_j E(., z)"),
            CheckTask(
                id="translation-laplacian", name="translation_laplacian",
                anchor="tau_x commutes with Delta_lambda",
            ),
            CheckTask(id="density-bound", name="density_bound", anchor="mu_x{<x,xi> > |x|^2 - delta^2} density bound"),
        ]

    def check_translate_square(self) -> Dict[str, Any]:
        lams = np.array(self.lambdas)
        ev = TranslationEvaluator(lams, self.budget.n_jacobi)
        rng = np.random.default_rng(self.context.seed)
        worst = 0.0
        for _ in range(10):
            x = rng.uniform(-1.5, 1.5, len(lams))
            t = rng.uniform(-1.5, 1.5, (4, len(lams)))
            got = ev.translate_point(x, lambda p: np.sum(p * p, axis=-1), t)
            expected = np.sum(x * x + t * t + 2.0 * x * t / (2.0 * lams + 1.0), axis=1)
            worst = max(worst, float(np.max(np.abs(got - expected))))
        require(worst < self.tol.tol_mv, "translated |t|^2 misses the closed form", error=worst)
        return {"lambdas": list(self.lambdas), "max_error": worst}

    def check_point_vs_radial(self, samples: int) -> Dict[str, Any]:
        rng = np.random.default_rng(self.context.seed)
        worst = 0.0
        for k in range(samples):
            d = 1 + k % 2
            lams = rng.choice([0.25, 0.5, 1.0, 1.5], size=d)
            ev = TranslationEvaluator(lams, self.budget.n_jacobi)
            x = rng.uniform(-1.0, 1.0, d)
            t = rng.uniform(-1.0, 1.0, (1, d))
            point = float(ev.translate_point(x, _gaussian, t)[0])
            radial = float(ev.translate_radial(x, _gaussian_profile, t)[0])
            worst = max(worst, abs(point - radial))
        require(worst < self.tol.translation, "product and radial translations disagree", error=worst)
        return {"samples": samples, "max_error": worst}

    def check_classical_shift(self) -> Dict[str, Any]:
        ev = TranslationEvaluator([0.0, 0.0], self.budget.n_jacobi)
        rng = np.random.default_rng(self.context.seed)

        def f(p: np.ndarray) -> np.ndarray:
            return np.sin(p[..., 0]) * np.exp(0.3 * p[..., 1]) + p[..., 0] ** 3

        x = rng.uniform(-1.0, 1.0, 2)
        t = rng.uniform(-1.0, 1.0, (20, 2))
        error = float(np.max(np.abs(ev.translate_point(x, f, t) - f(x + t))))
        require(error < self.tol.shift, "kappa = 0 translation is not the shift", error=error)
        return {"max_error": error}

    def check_first_moment(self, lambdas: List[float]) -> Dict[str, Any]:
        rows = {}
        for lam in lambdas:
            value = intertwine_apply([lam], lambda p: p[..., 0], [1.0], self.budget.n_jacobi)
            expected = 1.0 / (2.0 * lam + 1.0)
            require(
                abs(value - expected) < self.tol.tol_mv,
                f"first moment of m_lambda is {value!r} for lambda = {lam}", expected=expected,
            )
            rows[str(lam)] = value
        return {"moments": rows}

    def check_kernel_eigen(self) -> Dict[str, Any]:
        rng = np.random.default_rng(self.context.seed)
        d = len(self.lambdas)
        worst = 0.0
        for _ in range(5):
            x = rng.uniform(0.2, 1.0, d) * rng.choice([-1.0, 1.0], d)
            z = rng.uniform(-1.0, 1.0, d)
            worst = max(worst, kernel_eigen_residual(self.lambdas, x, z, n=self.budget.n_jacobi))
        require(worst < self.tol.tol_fd, "E(., z) is not a joint eigenfunction", residual=worst)
        return {"max_residual": worst}

    def check_translation_laplacian(self) -> Dict[str, Any]:
        f = parse_poly("x1^4 - 3*x1^2 + x1", 1, has_y=False)
        residual = translation_laplacian_residual([0.5], f, [0.7], [0.4], n=self.budget.n_jacobi)
        require(residual < self.tol.tol_harm, "translation does not commute with Delta_lambda", residual=residual)
        return {"residual": residual}

    def check_density_bound(self) -> Dict[str, Any]:
        report = density_bound_probe([0.5], [[0.5], [1.0], [2.0]], [0.05, 0.2, 0.5], n=self.budget.n_jacobi)
        finite = np.isfinite([report.min_ratio, report.max_ratio]).all() and report.min_ratio > 0
        require(bool(finite), "density ratios are not finite and positive", min=report.min_ratio, max=report.max_ratio)
        return {"min_ratio": report.min_ratio, "max_ratio": report.max_ratio}


__all__ = ["TranslationSuite"]

import math

import numpy as np
import pytest
from scipy.integrate import quad

from dunklkit.errors import DomainError, KernelOverflowError, PoisonedIntegralError
from dunklkit.intertwine import (
    TranslationEvaluator,
    cap_measure,
    density_bound_probe,
    dunkl_kernel_eval,
    dunkl_laplacian_numeric,
    intertwine_apply,
    kernel_eigen_residual,
    measure_tail,
    translate_point,
    translate_radial,
    translation_laplacian_residual,
)
from dunklkit.polyring import parse_poly
from dunklkit.quadrature import jacobi_constant


def squared_norm(p):
    return np.sum(p * p, axis=-1)


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 2.5])
def test_intertwiner_on_low_degrees(lam):
    assert intertwine_apply([lam], lambda p: p[..., 0], [1.0]) == pytest.approx(1.0 / (2 * lam + 1))
    assert intertwine_apply([lam], lambda p: np.ones(p.shape[:-1]), [0.7]) == pytest.approx(1.0)
    assert intertwine_apply([lam], lambda p: p[..., 0] ** 2, [2.0]) == pytest.approx(4.0 / (2 * lam + 1))


def test_measure_representation():
    ev = TranslationEvaluator([0.5, 1.0], n=16)
    rep = ev.measure([0.4, -2.0])
    assert rep.points.shape == (256, 2)
    assert rep.mass == pytest.approx(1.0)
    assert rep.support_box == [(-0.4, 0.4), (-2.0, 2.0)]
    assert np.all(np.abs(rep.points[:, 1]) <= 2.0)


def test_kernel_values():
    assert dunkl_kernel_eval([0.0], [1.5], [0.4]) == pytest.approx(math.exp(0.6))
    assert dunkl_kernel_eval([0.5, 1.0], [0.3, -0.7], [0.0, 0.0]) == pytest.approx(1.0)
    # E(x, z) = E(z, x)
    assert dunkl_kernel_eval([0.5], [0.8], [1.3]) == pytest.approx(dunkl_kernel_eval([0.5], [1.3], [0.8]))


def test_kernel_eigenfunction():
    assert kernel_eigen_residual([0.5], [0.7], [0.9]) < 1e-6
    assert kernel_eigen_residual([0.5, 1.5], [0.7, -0.4], [0.9, 1.2]) < 1e-6
    with pytest.raises(DomainError):
        kernel_eigen_residual([0.5], [0.0], [1.0])


def test_kernel_overflow():
    with pytest.raises(KernelOverflowError):
        dunkl_kernel_eval([0.5], [100.0], [10.0])


def test_translation_of_squared_norm():
    lams = [0.5, 1.0]
    x = np.array([0.3, -0.8])
    t = np.array([[0.5, 0.2], [-1.0, 0.4], [0.0, 0.0]])
    expected = [
        sum(x[j] ** 2 + s[j] ** 2 + 2 * x[j] * s[j] / (2 * lams[j] + 1) for j in range(2)) for s in t
    ]
    assert np.allclose(translate_point(lams, x, squared_norm, t), expected)


def test_translation_at_origin_recovers_function():
    def f(p):
        return p[..., 0] ** 3 + p[..., 0] * p[..., 1] - p[..., 1] ** 2

    x = [0.6, -1.1]
    value = translate_point([0.5, 2.0], x, f, np.zeros((1, 2)))[0]
    assert value == pytest.approx(0.6 ** 3 + 0.6 * -1.1 - 1.1 ** 2)


def test_translation_is_symmetric():
    def f(p):
        return p[..., 0] ** 3 - 2 * p[..., 0] * p[..., 1] ** 2 + p[..., 1]

    lams = [0.5, 1.0]
    x, t = np.array([0.4, -0.9]), np.array([1.2, 0.3])
    left = translate_point(lams, x, f, t[None, :])[0]
    right = translate_point(lams, t, f, x[None, :])[0]
    assert left == pytest.approx(right, rel=1e-10)


def test_radial_and_pointwise_translation_agree():
    lams = [0.5, 1.0]
    x = [0.3, -0.5]
    t = np.array([[0.2, 0.9], [-1.0, 0.1]])
    pointwise = translate_point(lams, x, lambda p: np.exp(-squared_norm(p)), t)
    radial = translate_radial(lams, x, lambda r: np.exp(-r * r), t)
    assert np.allclose(pointwise, radial, rtol=1e-10)


def test_classical_coordinates_shift():
    f = lambda p: np.sin(p[..., 0])  # noqa: E731
    assert translate_point([0.0], [0.4], f, [0.3])[0] == pytest.approx(math.sin(0.7))


def test_non_finite_integrand_poisons():
    with pytest.raises(PoisonedIntegralError):
        translate_point([0.5], [0.3], lambda p: np.where(p[..., 0] < 0, np.nan, 1.0), [0.2])


def test_target_shape_checked():
    with pytest.raises(DomainError):
        translate_point([0.5, 0.5], [0.1, 0.2], squared_norm, np.zeros((2, 3)))


def test_measure_tail():
    assert measure_tail(0.5, 0.0) == pytest.approx(0.5 + 1.0 / math.pi)
    assert measure_tail(0.7, 1.0) == 0.0
    assert measure_tail(0.7, -1.0) == 1.0
    lam, c = 1.5, 0.3
    density = lambda s: jacobi_constant(lam) * (1 + s) * (1 - s * s) ** (lam - 1)  # noqa: E731
    assert measure_tail(lam, c) == pytest.approx(quad(density, c, 1.0)[0], rel=1e-10)


def test_cap_measure_limits():
    assert cap_measure([0.5], [1.0], 2.0) == pytest.approx(1.0)
    assert cap_measure([0.5], [0.0], 0.1) == pytest.approx(1.0)
    small = cap_measure([0.5, 1.0], [1.0, 1.0], 0.1)
    large = cap_measure([0.5, 1.0], [1.0, 1.0], 0.5)
    assert 0.0 < small < large <= 1.0


def test_density_bound_is_comparable():
    report = density_bound_probe([0.5], [[0.1], [1.0], [3.0]], [0.05, 0.3, 1.0])
    assert len(report.entries) == 9
    assert report.min_ratio > 0
    assert report.max_ratio / report.min_ratio < 10


def test_numeric_laplacian_of_square():
    for lam in (0.0, 0.5, 1.5):
        value = dunkl_laplacian_numeric([lam], squared_norm, [0.7])
        assert value == pytest.approx(2 + 4 * lam, rel=1e-6)


def test_translation_commutes_with_laplacian():
    f = parse_poly("x1^3 + x1*x2^2 - x2", 2, has_y=False)
    assert translation_laplacian_residual([0.5, 1.0], f, [0.4, -0.3], [0.7, 0.5]) < 1e-4
    with pytest.raises(DomainError):
        translation_laplacian_residual([0.5], parse_poly("x1*y", 1), [0.4], [0.7])

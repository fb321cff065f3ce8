import numpy as np
import pytest

from dunklkit.dunklops import HarmonicField
from dunklkit.errors import DomainError
from dunklkit.means import (
    SphericalMeanEvaluator,
    darboux_residual,
    mean_value_residual,
    spherical_mean,
    spherical_mean_field,
)
from dunklkit.polyring import parse_poly
from dunklkit.rootsys import sphere_weight_mass, z2d


def squared_norm(p):
    return np.sum(p * p, axis=-1)


@pytest.mark.parametrize("lambdas", [[0.5], [0.5, 1.0], [0.0, 0.25]])
def test_mean_of_squared_norm(lambdas):
    x = np.linspace(0.2, 0.8, len(lambdas))
    for r in (0.0, 0.4, 1.3):
        assert spherical_mean(lambdas, squared_norm, x, r) == pytest.approx(x @ x + r * r)


def test_mean_of_constant_and_at_zero_radius():
    ev = SphericalMeanEvaluator([0.5, 1.0])
    assert ev.mean(lambda p: np.ones(p.shape[:-1]), [0.3, 0.1], 0.8) == pytest.approx(1.0)

    def f(p):
        return p[..., 0] ** 3 + p[..., 1]

    assert ev.mean(f, [0.3, 0.1], 0.0) == pytest.approx(0.3 ** 3 + 0.1)


def test_batched_means_match_single_radius():
    ev = SphericalMeanEvaluator([0.5])

    def f(p):
        return p[..., 0] ** 4 - p[..., 0]

    radii = [0.1, 0.5, 1.2]
    batched = ev.means(f, [0.4], radii)
    assert np.allclose(batched, [ev.mean(f, [0.4], r) for r in radii])


def test_normalization():
    ev = SphericalMeanEvaluator([0.5, 1.0])
    assert ev.normalization == pytest.approx(1.0 / sphere_weight_mass([0.5, 1.0]))
    with pytest.raises(DomainError):
        ev.mean(squared_norm, [0.0, 0.0], -1.0)


@pytest.mark.parametrize("lam", [0.5, 1.0])
def test_mean_value_property(lam):
    u = parse_poly(f"x1^2 - {1 + 2 * lam:g}*y^2", 1)
    assert mean_value_residual([lam], u, [0.3], 1.0, 0.5) < 1e-9
    field = HarmonicField(z2d([lam]), parse_poly("x1*y", 1))
    assert mean_value_residual([lam], field, [-0.4], 1.2, 0.9) < 1e-9


def test_mean_value_requires_ball_in_half_space():
    u = parse_poly("x1*y", 1)
    with pytest.raises(DomainError):
        mean_value_residual([0.5], u, [0.0], 1.0, 1.0)
    with pytest.raises(DomainError):
        mean_value_residual([0.5], u, [0.0], 0.0, 0.1)


@pytest.mark.parametrize("lambdas", [[0.5], [0.5, 1.0]])
def test_mean_of_y_squared(lambdas):
    d = len(lambdas)
    u = parse_poly("y^2", d)
    y, r = 2.0, 1.5
    gap = spherical_mean_field(lambdas, u, np.full(d, 0.3), y, r) - y * y
    assert gap == pytest.approx(r * r / (2 * sum(lambdas) + d + 1), rel=1e-9)


def test_darboux_identity():
    f = parse_poly("x1^4 + x1^2", 1, has_y=False)
    for r in (0.3, 1.0):
        assert darboux_residual([0.5], f, [0.6], r) < 1e-7
    g = parse_poly("x1^2*x2^2 - x2^3", 2, has_y=False)
    assert darboux_residual([0.5, 1.0], g, [0.4, -0.3], 1.0) < 1e-7


def test_darboux_rejects_fields_in_y():
    with pytest.raises(DomainError):
        darboux_residual([0.5], parse_poly("x1*y", 1), [0.3], 0.5)

import math

import numpy as np
import pytest

from dunklkit.errors import DomainError, RefusedInputError
from dunklkit.intertwine import translate_radial
from dunklkit.poisson import (
    BoundaryDatum,
    PoissonBacked,
    ball_comparability_report,
    distance_to_orbit,
    gaussian_constant,
    kernel_bound_ratio,
    kernel_constant,
    kernel_field,
    kernel_mass,
    poisson_integral,
    poisson_kernel,
    semigroup_gap,
    translated_kernel,
    translated_kernel_mass,
    translated_poisson,
)
from dunklkit.quadrature import generalized_hermite_rule


def test_kernel_at_origin():
    assert poisson_kernel([0.5], [0.0], 1.0) == pytest.approx(1.0)
    # classical half-plane kernel y / (pi (x^2 + y^2)) after the c_kappa normalization
    value = gaussian_constant([0.0]) * poisson_kernel([0.0], [0.4], 0.7)
    assert value == pytest.approx(0.7 / (math.pi * (0.16 + 0.49)))


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.5])
def test_gaussian_normalization(lam):
    assert gaussian_constant([lam]) * generalized_hermite_rule(lam).mass * 2.0 ** lam == pytest.approx(1.0)
    assert gaussian_constant([0.0]) == pytest.approx(1.0 / math.sqrt(2 * math.pi))


@pytest.mark.parametrize("lambdas", [[0.0], [0.5], [1.0], [0.5, 1.0], [0.0, 0.5]])
def test_kernel_mass(lambdas):
    assert kernel_mass(lambdas, 1.0) == pytest.approx(1.0, abs=1e-8)
    assert kernel_mass(lambdas, 0.3) == pytest.approx(1.0, abs=1e-8)


def test_kernel_height_must_be_positive():
    with pytest.raises(DomainError):
        poisson_kernel([0.5], [0.0], 0.0)
    with pytest.raises(DomainError):
        kernel_constant([-0.5])


def test_translated_kernel_at_origin_is_the_kernel():
    t = np.array([-1.0, 0.0, 0.4, 2.0])
    values = translated_kernel([0.5], [0.0], 0.6, t)
    assert np.allclose(values, [poisson_kernel([0.5], [s], 0.6) for s in t])


def test_classical_translation_is_a_shift():
    t = np.array([-1.0, 0.2, 1.5])
    values = translated_kernel([0.0], [0.3], 0.5, t)
    assert np.allclose(values, [poisson_kernel([0.0], [0.3 - s], 0.5) for s in t])


def test_translated_kernel_matches_radial_translation():
    lams, x, y, t = [0.5], [0.4], 0.6, 0.9
    a = 0.5 + 1.0
    c = kernel_constant(lams)
    profile = lambda r: c * y / (y * y + r * r) ** a  # noqa: E731
    expected = translate_radial(lams, x, profile, [-t])[0]
    assert translated_poisson(lams, x, y, [t]) == pytest.approx(expected, rel=1e-8)


def test_translated_kernel_symmetry_and_sign():
    lams = [0.5, 1.0]
    x, t = np.array([0.3, -0.7]), np.array([[1.1, 0.4], [-0.2, -0.9], [0.0, 1.3]])
    forward = translated_kernel(lams, x, 0.4, t)
    assert np.all(forward > 0)
    backward = [translated_poisson(lams, s, 0.4, x) for s in t]
    assert np.allclose(forward, backward, rtol=1e-10)
    flipped = translated_kernel(lams, -x, 0.4, -t)
    assert np.allclose(forward, flipped, rtol=1e-12)


@pytest.mark.parametrize("lambdas, x, y", [([0.5], [2.0], 1.5), ([1.0], [0.7], 0.1), ([0.5, 0.5], [0.3, -0.6], 0.5)])
def test_translated_kernel_mass(lambdas, x, y):
    assert translated_kernel_mass(lambdas, x, y) == pytest.approx(1.0, abs=1e-6)


def test_poisson_integral_of_constant():
    assert poisson_integral([0.5], BoundaryDatum.constant(1.0), [0.3], 0.8) == pytest.approx(1.0, abs=1e-6)


def test_indicator_extension_is_bounded_and_invariant():
    field = PoissonBacked([0.5], BoundaryDatum.indicator_box([-1.0], [1.0]))
    inside = field.value([0.2], 0.1)
    outside = field.value([3.0], 0.1)
    assert 0.5 < inside <= 1.0 + 1e-6
    assert 0.0 <= outside < 0.1
    assert field.value([-0.2], 0.1) == pytest.approx(inside, abs=1e-8)


def test_gaussian_extension_is_harmonic():
    field = PoissonBacked([0.5], BoundaryDatum.gaussian([0.3], 0.5))
    for x, y in [([0.4], 0.5), ([1.3], 1.0)]:
        assert field.harmonicity_residual(x, y) < 1e-4
    with pytest.raises(DomainError):
        field.harmonicity_residual([0.0], 0.5)


def test_undeclared_datum_is_refused():
    datum = BoundaryDatum.from_function(lambda t: np.cos(t[..., 0]), 1)
    with pytest.raises(RefusedInputError):
        PoissonBacked([0.5], datum)
    assert PoissonBacked([0.5], BoundaryDatum.from_function(lambda t: np.sin(t[..., 0]), 1, box=[(-1.0, 1.0)])).dim == 1


def test_datum_dimension_must_match():
    with pytest.raises(DomainError):
        PoissonBacked([0.5, 0.5], BoundaryDatum.constant(1.0, 1))


def test_datum_invariance_and_tabulated_values():
    assert BoundaryDatum.gaussian([0.0], 0.4).is_invariant()
    assert not BoundaryDatum.gaussian([0.5], 0.4).is_invariant()
    tab = BoundaryDatum.tabulated([[0.0, 1.0, 2.0]], [0.0, 2.0, 0.0])
    assert tab(np.array([[0.5], [1.5], [5.0]])) == pytest.approx([1.0, 1.0, 0.0])
    assert tab.sup_norm == 2.0
    with pytest.raises(DomainError):
        BoundaryDatum.indicator_box([1.0], [0.0])


def test_kernel_field():
    field = kernel_field([0.5], amplitude=0.05)
    assert field.value([0.4], 0.7) == pytest.approx(0.05 * poisson_kernel([0.5], [0.4], 0.7))
    grad = field.gradient(np.array([[0.4]]), np.array([0.7]))
    assert grad.shape == (1, 2)


def test_distance_to_orbit():
    assert distance_to_orbit([1.0], [-1.0]) == 0.0
    assert distance_to_orbit([1.0, 2.0], [-1.0, 3.0]) == pytest.approx(1.0)


def test_kernel_bound_ratio():
    grid = [([x], [t], y) for x in (-0.4, 1.1) for t in (0.3, -1.5) for y in (0.05, 1.0)]
    report = kernel_bound_ratio([0.5], grid, keep_rows=True)
    assert report.points == len(grid)
    assert report.finite_positive
    assert len(report.rows) == len(grid)
    with pytest.raises(DomainError):
        kernel_bound_ratio([0.5], [([0.5], [0.5], 1.0)])


def test_ball_comparability():
    low, high = ball_comparability_report([0.5], [([0.3], [1.2], 0.5), ([-1.0], [0.4], 0.1)])
    assert 0 < low <= high


@pytest.mark.slow
def test_semigroup_property():
    datum = BoundaryDatum.gaussian([0.0], 0.5)
    assert semigroup_gap([0.5], datum, 0.4, 0.3, 0.5) < 1e-4

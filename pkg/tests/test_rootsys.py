from fractions import Fraction

import numpy as np
import pytest
import sympy

from dunklkit.errors import DomainError, RootSystemValidationError
from dunklkit.rootsys import (
    ball_comparator,
    ball_measure,
    build_root_system,
    custom,
    generate_group,
    sphere_weight_mass,
    type_a,
    type_b,
    weight_array,
    weight_eval,
    z2d,
)


@pytest.mark.parametrize(
    "rs_factory, order",
    [
        (lambda: z2d([Fraction(1, 2), 1, 2]), 8),
        (lambda: type_b(2, Fraction(1, 2), Fraction(3, 2)), 8),
        (lambda: type_a(2, 1), 6),
        (lambda: z2d([0]), 2),
    ],
)
def test_group_orders(rs_factory, order):
    assert rs_factory().order == order


def test_identity_comes_first(b2):
    assert np.allclose(b2.group[0], np.eye(2))
    assert b2.exact_group is not None


def test_roots_are_normalized(b2, a2):
    for rs in (b2, a2):
        assert np.allclose(np.sum(rs.roots_numeric ** 2, axis=1), 2.0)


def test_orbits_and_total_multiplicity(b2):
    assert len(b2.orbits) == 2
    assert b2.multiplicity.total == Fraction(1, 2) * 2 + Fraction(3, 2) * 2


def test_weight_is_exact_for_integer_multiplicity():
    rs = z2d([1])
    assert weight_eval(rs, [2]) == 8
    assert isinstance(weight_eval(rs, [Fraction(1, 2)]), Fraction)


def test_weight_float_path_matches_array(z2_pair):
    x = np.array([0.3, -1.2])
    assert weight_eval(z2_pair, [0.3, -1.2]) == pytest.approx(float(weight_array(z2_pair, x)))
    expected = (2 * 0.3 ** 2) ** 0.5 * (2 * 1.2 ** 2) ** 1
    assert float(weight_array(z2_pair, x)) == pytest.approx(expected)


def test_ball_measure_closed_forms():
    assert ball_measure(z2d([1]), [0.0], 1.0) == pytest.approx(4.0 / 3.0, rel=1e-12)
    assert ball_measure(z2d([0]), [0.0], 1.0) == pytest.approx(2.0, rel=1e-12)


def test_ball_measure_is_comparable_to_comparator(z2_pair):
    ratios = []
    for x in ([0.0, 0.0], [0.5, -0.2], [1.5, 1.0]):
        for r in (0.1, 0.5, 2.0):
            ratios.append(ball_measure(z2_pair, x, r) / ball_comparator(z2_pair, x, r))
    assert min(ratios) > 0
    assert max(ratios) / min(ratios) < 100


def test_sphere_weight_mass_in_one_dimension():
    # the zero-sphere {-1, 1} with W = |sqrt(2) t|^(2 lambda)
    assert sphere_weight_mass([0.5]) == pytest.approx(2.0 * 2.0 ** 0.5)
    assert sphere_weight_mass([0.0]) == pytest.approx(2.0)


def test_custom_rescales_roots():
    rs = custom([[1, -1], [-1, 1]], 1)
    assert rs.order == 2
    assert np.allclose(rs.roots_numeric[0], [1.0, -1.0])
    scaled = custom([[3, 0], [-3, 0]], Fraction(1, 2))
    assert np.allclose(sorted(scaled.roots_numeric[:, 0]), [-np.sqrt(2), np.sqrt(2)])


def test_non_reduced_system_is_rejected():
    with pytest.raises(RootSystemValidationError) as info:
        custom([[1, 0], [2, 0], [-1, 0], [-2, 0]], 1)
    assert info.value.pair is not None


def test_system_not_closed_under_reflections():
    with pytest.raises(RootSystemValidationError):
        custom([[1, 0], [-1, 0], [1, 1], [-1, -1]], 1)


def test_negative_multiplicity_is_a_domain_error():
    with pytest.raises(DomainError):
        z2d([-0.5])
    with pytest.raises(DomainError):
        type_b(2, 1, -1)


def test_build_root_system_dispatch():
    assert build_root_system("A", rank=1, kappa=1).order == 2
    with pytest.raises(DomainError):
        build_root_system("E8")
    with pytest.raises(DomainError):
        build_root_system("B", d=2)


def test_numeric_group_for_irrational_directions():
    angle = sympy.pi / 3
    roots = [
        [sympy.cos(k * angle), sympy.sin(k * angle)] for k in range(6)
    ]
    group = generate_group(roots)
    assert isinstance(group[0], np.ndarray)
    assert len(group) == 6

from fractions import Fraction

import numpy as np
import pytest

from dunklkit.dunklops import (
    HarmonicField,
    directional_dunkl,
    dunkl_apply,
    dunkl_gradient,
    dunkl_laplacian,
    harmonic_basis,
    harmonicity_rank_report,
    is_harmonic,
    orbit_family,
    square_identity_check,
    subharmonic_probe,
)
from dunklkit.errors import DomainError
from dunklkit.polyring import Poly, parse_poly
from dunklkit.rootsys import z2d

LAMBDAS = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2)]


@pytest.mark.parametrize("lam", LAMBDAS)
def test_dunkl_of_coordinate(lam):
    rs = z2d([lam])
    assert dunkl_apply(rs, 1, Poly.variable(0, 1)) == Poly.constant(1 + 2 * lam, 1)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_laplacian_of_square(lam):
    rs = z2d([lam])
    x_squared = parse_poly("x1^2", 1, has_y=False)
    assert dunkl_laplacian(rs, x_squared) == 2 + 4 * lam


@pytest.mark.parametrize("lam", LAMBDAS)
def test_harmonic_quadratic(lam):
    rs = z2d([lam])
    u = parse_poly(f"x1^2 - ({1 + 2 * lam})*y^2", 1)
    assert is_harmonic(rs, u)
    assert not is_harmonic(rs, parse_poly("x1^2 - y^2", 1)) or lam == 0


def test_operators_commute(z2_pair, a2, b2):
    cases = [
        (z2_pair, parse_poly("x1^3*x2 + x1*x2^2 - x2^3", 2, has_y=False)),
        (b2, parse_poly("x1^4 + x1^2*x2 - 3*x2^3*x1", 2, has_y=False)),
        (a2, parse_poly("x1^2*x3 - x2*x3^2 + x1*x2*x3", 3, has_y=False)),
    ]
    for rs, p in cases:
        for i in range(1, rs.dim + 1):
            for j in range(i + 1, rs.dim + 1):
                left = dunkl_apply(rs, i, dunkl_apply(rs, j, p))
                right = dunkl_apply(rs, j, dunkl_apply(rs, i, p))
                assert left == right


def test_laplacian_forms_agree_on_b2(b2):
    # dunkl_laplacian raises when its two evaluations disagree
    u = parse_poly("x1^3*y - x2^2*y^2 + x1*x2", 2)
    lap = dunkl_laplacian(b2, u)
    assert lap.nvars == u.nvars


def test_gradient_and_directional_derivative(z2_half):
    u = parse_poly("x1^2*y", 1)
    grad = dunkl_gradient(z2_half, u)
    assert grad[0] == parse_poly("2*x1*y", 1)
    assert grad[1] == parse_poly("x1^2", 1)
    assert directional_dunkl(z2_half, u, [0, 1]) == grad[1]
    assert directional_dunkl(z2_half, u, [1, 1]) == grad[0] + grad[1]


def test_index_out_of_range(z2_half):
    with pytest.raises(DomainError):
        dunkl_apply(z2_half, 2, Poly.variable(0, 1))
    with pytest.raises(DomainError):
        dunkl_apply(z2_half, 1, parse_poly("x1*x2", 2, has_y=False))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_harmonic_space_dimension(z2_half, n):
    basis = harmonic_basis(z2_half, n)
    assert len(basis) == 2
    assert all(is_harmonic(z2_half, p) and p.degree() == n for p in basis)
    report = harmonicity_rank_report(z2_half, n)
    assert report.consistent
    assert report.surjective
    assert report.nullity == 2


def test_square_identity(z2_half, b2):
    report = square_identity_check(z2_half, parse_poly("x1*y", 1))
    assert report.holds
    for p in harmonic_basis(b2, 3):
        assert square_identity_check(b2, p).holds


def test_square_identity_needs_harmonic_input(z2_half):
    with pytest.raises(DomainError):
        square_identity_check(z2_half, parse_poly("x1^2", 1))


def test_orbit_family_has_group_size(b2):
    u = parse_poly("x1*y + x2^2", 2)
    family = orbit_family(b2, u)
    assert len(family) == b2.order
    assert family[0] == u


def test_norm_of_harmonic_pair_is_subharmonic(z2_half):
    F = [parse_poly("x1*y", 1), parse_poly("x1^2 - 2*y^2", 1)]
    points = [(x, y) for x in (-0.5, 0.3, 0.7, 1.2) for y in (0.2, 0.6, 1.1)]
    report = subharmonic_probe(z2_half, F, points)
    assert len(report.accepted) == len(points)
    assert report.minimum >= -1e-6
    assert report.passed(1e-6)


def test_subharmonic_probe_rejects_hyperplane_and_zeros(z2_half):
    F = [parse_poly("x1*y", 1)]
    report = subharmonic_probe(z2_half, F, [(0.0, 1.0), (0.5, 0.0), (0.5, 0.5)])
    assert [reason for _, reason in report.rejected] == ["|F| below 1e-10", "|F| below 1e-10"]
    assert report.accepted == [(0.5, 0.5)]


def test_harmonic_field_evaluation(z2_half):
    u = HarmonicField(z2_half, parse_poly("x1^2 - 2*y^2", 1))
    assert u([0.5], 1.0) == pytest.approx(0.25 - 2.0)
    grad = u.gradient(np.array([[0.5]]), np.array([1.0]))
    assert np.allclose(grad, [[1.0, -4.0]])
    t = np.array([[0.5], [-0.3]])
    assert u.evaluate(t, np.array([1.0, 2.0])).shape == (2,)


def test_harmonic_field_rejects_non_harmonic(z2_half):
    with pytest.raises(DomainError):
        HarmonicField(z2_half, parse_poly("x1^2", 1))
    with pytest.raises(DomainError):
        HarmonicField(z2_half, object())

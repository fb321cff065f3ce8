
import numpy as np
import pytest

from dunklkit.area import ConeSpec, INFINITE
from dunklkit.boundary import (
    barrier_probe,
    check_invariant_grid,
    cone_supremum,
    fatou_table,
    gradient_bound_probe,
    green_residual,
    maximum_principle_check,
    nt_limit_probe,
)
from dunklkit.dunklops import HarmonicField
from dunklkit.errors import DomainError, RefusedInputError
from dunklkit.poisson import BoundaryDatum, PoissonBacked, kernel_field
from dunklkit.polyring import parse_poly
from dunklkit.rootsys import z2d

GREEN_CASES = [
    ([0.5], "y^2", "1"),
    ([0.5], "x1*y", "y"),
    ([0.5], "x1^3*y", "x1*y^2"),
    ([1.0], "x1^2*y - y^3", "x1^4 + y"),
    ([0.5, 1.0], "x1*x2*y", "x2^2 + y"),
]


@pytest.mark.parametrize("lambdas, u, v", GREEN_CASES)
def test_green_identities(lambdas, u, v):
    d = len(lambdas)
    report = green_residual(lambdas, parse_poly(u, d), parse_poly(v, d), R=1.0, y0=0.5, y1=1.5)
    assert report.residual < 1e-8
    assert report.residual_dunkl < 1e-8


def test_green_volume_equals_flux_for_y_squared():
    report = green_residual([0.5], parse_poly("y^2", 1), parse_poly("1", 1), R=1.0, y0=0.5, y1=1.5)
    assert report.volume == pytest.approx(report.flux, rel=1e-12)
    assert report.volume > 0


def test_green_validation():
    with pytest.raises(DomainError):
        green_residual([0.5], parse_poly("y", 1), parse_poly("y", 1), R=1.0, y0=1.5, y1=0.5)
    with pytest.raises(DomainError):
        green_residual([0.5], parse_poly("x1", 1, has_y=False), parse_poly("y", 1), R=1.0, y0=0.5, y1=1.5)


@pytest.mark.parametrize("lam, coefficient", [(0.5, "2"), (1.5, "4")])
def test_maximum_principle(lam, coefficient):
    rs = z2d([lam])
    u = HarmonicField(rs, parse_poly(f"x1^2 - {coefficient}*y^2", 1))
    report = maximum_principle_check(u, 1.0, 0.1, 1.0)
    assert report.passed


def test_invariant_grid():
    pts = check_invariant_grid([-0.5, 0.0, 0.5], 1)
    assert pts.shape == (3, 1)
    with pytest.raises(DomainError):
        check_invariant_grid([0.5], 1)
    with pytest.raises(DomainError, match="empty grid"):
        check_invariant_grid([], 1)


def test_cone_supremum_levels():
    u = HarmonicField(z2d([0.5]), parse_poly("x1*y", 1))
    table = cone_supremum(u, ConeSpec((0.5,), 1.0, 1.0), levels=6)
    assert len(table.sups) == 7
    assert table.sups[-1] < table.sups[0]
    with pytest.raises(DomainError):
        cone_supremum(u, ConeSpec((0.5, 0.5), 1.0, 1.0))


def test_nt_limit_of_polynomial():
    u = HarmonicField(z2d([0.5]), parse_poly("x1*y", 1))
    report = nt_limit_probe(u, [0.5], 1.0, 1.0)
    assert report.bounded and report.limit_exists
    assert abs(report.limit_value) < 1e-3
    assert report.row()["seed"] == 0


def test_nt_probe_of_kernel_at_origin_is_unbounded():
    u = HarmonicField(z2d([0.5]), kernel_field([0.5], 0.05))
    report = nt_limit_probe(u, [0.0], 1.0, 1.0)
    assert not report.bounded
    assert not report.limit_exists


def test_nt_thresholds_are_parameters():
    u = HarmonicField(z2d([0.5]), parse_poly("x1*y", 1))
    assert nt_limit_probe(u, [0.5], 1.0, 1.0, levels=8).bounded
    strict = nt_limit_probe(u, [0.5], 1.0, 1.0, levels=8, tol_nt=0.0, bound_ratio=0.0)
    assert not strict.bounded
    assert not strict.limit_exists
    assert nt_limit_probe(u, [0.5], 1.0, 1.0, levels=8, window=1, refine_tol=0.5).limit_exists
    with pytest.raises(DomainError):
        nt_limit_probe(u, [0.5], 1.0, 1.0, window=0)


def _indicator():
    return HarmonicField(z2d([0.5]), PoissonBacked([0.5], BoundaryDatum.indicator_box([-1.0], [1.0])))


@pytest.mark.parametrize(
    "make_field, x, expected",
    [
        (lambda: HarmonicField(z2d([0.5]), kernel_field([0.5], 0.05)), 0.0, (False, False)),
        (lambda: HarmonicField(z2d([0.5]), kernel_field([0.5], 0.05)), 0.5, (True, True)),
        pytest.param(_indicator, 0.5, (True, True), marks=pytest.mark.slow),
    ],
)
def test_nt_verdicts_do_not_depend_on_aperture(make_field, x, expected):
    u = make_field()
    verdicts = [
        (report.bounded, report.limit_exists)
        for report in (nt_limit_probe(u, [x], a, 1.0) for a in (1.0, 0.5))
    ]
    assert verdicts == [expected, expected]


def test_gradient_bound_for_linear_field():
    u = HarmonicField(z2d([0.5]), parse_poly("y", 1))
    report = gradient_bound_probe(u, [0.5], 0.5, 0.5, 1.0, 1.0)
    assert report.refined_maximum == pytest.approx(0.5, rel=1e-6)
    assert report.wide_sup <= 1.0
    assert report.drift == pytest.approx(0.0, abs=1e-12)


def test_gradient_bound_refuses_large_fields():
    u = HarmonicField(z2d([0.5]), parse_poly("5*y", 1))
    with pytest.raises(RefusedInputError):
        gradient_bound_probe(u, [0.5], 0.5, 0.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        gradient_bound_probe(u, [0.5], 1.0, 0.5, 0.5, 1.0)


def test_barrier_is_positive_and_invariant():
    report = barrier_probe([0.5], [1.0], 1.0, levels=6)
    assert report.positive
    assert report.invariance_gap < 1e-6


@pytest.mark.slow
def test_fatou_table_for_point_mass_extension():
    u = HarmonicField(z2d([0.5]), kernel_field([0.5], 0.05))
    table = fatou_table(u, [-0.5, 0.0, 0.5], 1.0, 1.0)
    assert table.decided == 3
    assert table.agreement_rate == 1.0
    center = table.rows[1]
    assert center.S_verdict == INFINITE
    assert not center.bounded
    assert np.isinf(center.S_value)


@pytest.mark.slow
def test_fatou_table_at_the_jump_of_an_indicator():
    table = fatou_table(_indicator(), [-1.0, -0.5, 0.5, 1.0], 1.0, 1.0)
    jumps = [table.rows[0], table.rows[3]]
    for row in jumps:
        assert row.bounded
        assert not row.limit_exists
        assert row.S_verdict == INFINITE
    assert table.agree == [False, True, True, False]
    assert sorted(table.disagreements) == [(-1.0,), (1.0,)]
    for row in (table.rows[1], table.rows[2]):
        assert row.limit_value == pytest.approx(1.0, abs=1e-3)

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dunklkit.errors import DomainError, InternalConsistencyError, SymbolicPathUnavailable
from dunklkit.polyring import (
    Poly,
    act,
    as_fraction,
    divide_by_linear,
    divided_reflection_difference,
    from_sympy,
    monomials,
    parse_poly,
    reflection_matrix,
)

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=7)
exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exponents, coefficients, max_size=5).map(lambda t: Poly(t, 2))
points = st.tuples(coefficients, coefficients)


@settings(max_examples=50, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Poly.zero(2)


@settings(max_examples=50, deadline=None)
@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(p, q, point):
    assert (p * q)(*point) == p(*point) * q(*point)
    assert (p + q)(*point) == p(*point) + q(*point)


@settings(max_examples=30, deadline=None)
@given(polys, points)
def test_reflection_action_matches_composition(p, point):
    sigma = reflection_matrix([1, -1])
    image = [
        sum((sigma[i][j] * point[j] for j in range(2)), Fraction(0)) for i in range(2)
    ]
    assert act(sigma, p)(*point) == p(*image)
    assert act(sigma, act(sigma, p)) == p


@settings(max_examples=30, deadline=None)
@given(polys)
def test_divided_difference_is_exact(p):
    q = divided_reflection_difference([1, 1], p)
    x = Poly.linear_form([1, 1], 2)
    assert q * x == p - act(reflection_matrix([1, 1]), p)


def test_parse_and_print():
    p = parse_poly("x1^2 - 3*y^2 + 1/2*x1*y", 1)
    assert p.nvars == 2 and p.has_y
    assert p.coefficient((2, 0)) == 1
    assert p.coefficient((1, 1)) == Fraction(1, 2)
    assert p.coefficient((0, 2)) == -3
    assert parse_poly(str(p), 1) == p
    assert from_sympy(p.to_sympy(), 1) == p


def test_parse_errors():
    with pytest.raises(DomainError):
        parse_poly("x1 + z", 1)
    with pytest.raises(DomainError):
        parse_poly("1/x1", 1)
    with pytest.raises(DomainError):
        parse_poly("x1 +* y", 1)


def test_exact_and_float_evaluation():
    p = parse_poly("x1^2 + y", 1)
    assert p(Fraction(1, 2), 1) == Fraction(5, 4)
    assert isinstance(p(0.5, 1.0), float)
    assert p(0.5, 1.0) == pytest.approx(1.25)
    grid = np.array([[0.5, 1.0], [2.0, -1.0]])
    assert np.allclose(p.evaluate_array(grid), [1.25, 3.0])


def test_degree_and_homogeneity():
    p = parse_poly("x1^3*y - x1*y^3", 1)
    assert p.degree() == 4
    assert p.is_homogeneous()
    assert Poly.zero(2).degree() == -1
    assert not (p + 1).is_homogeneous()


def test_monomials_are_graded():
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(monomials(3, 3)) == 10


def test_divide_by_linear_rejects_remainder():
    p = parse_poly("x1^2 + 1", 1, has_y=False)
    with pytest.raises(InternalConsistencyError):
        divide_by_linear(p, [1])


@settings(max_examples=40, deadline=None)
@given(polys)
def test_divide_by_linear_recovers_factor(q):
    form = Poly.linear_form([Fraction(1), Fraction(-2)], 2)
    assert divide_by_linear(q * form, [1, -2]) == q


def test_divide_by_linear_keeps_y_variable():
    p = parse_poly("x1*y^2 - x2*y^2 + x1^2 - x2^2", 2)
    quotient = divide_by_linear(p, [1, -1])
    assert quotient == parse_poly("y^2 + x1 + x2", 2)
    assert quotient.has_y
    assert divide_by_linear(p.like({}), [0, 3]).is_zero()


def test_difference_along_sqrt2_root():
    p = parse_poly("x1", 1, has_y=False)
    assert divided_reflection_difference([sympy.sqrt(2)], p) == 2


def test_as_fraction():
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(sympy.Rational(2, 3)) == Fraction(2, 3)
    with pytest.raises(SymbolicPathUnavailable):
        as_fraction(sympy.sqrt(2))


def test_mixed_variable_sets_are_rejected():
    with pytest.raises(DomainError):
        parse_poly("x1", 1) + parse_poly("x1", 1, has_y=False)
    with pytest.raises(DomainError):
        Poly.variable(0, 1, has_y=True)

"""
Exact sparse multivariate polynomials over the rationals

Polynomials live in the variables x1..xd and, optionally, a trailing y. They carry
the reflection-group action and the exact division by a linear form that keeps
Dunkl operators polynomial-exact.
"""

import itertools
import logging
from fractions import Fraction
from numbers import Rational
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from .errors import DomainError, InternalConsistencyError, SymbolicPathUnavailable

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]
ExactMatrix = Tuple[Tuple[Fraction, ...], ...]


def as_fraction(value: Any) -> Fraction:
    """Convert an exact scalar (int, Fraction, sympy Rational, decimal string) to Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        # decimal literal semantics: 0.5 -> 1/2, 0.1 -> 1/10
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Basic):
        value = sympy.nsimplify(value) if value.is_Float else value
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
        raise SymbolicPathUnavailable(f"value {value} is not rational")
    raise SymbolicPathUnavailable(f"cannot use {value!r} as an exact coefficient")


def monomials(nvars: int, degree: int) -> List[Exponent]:
    """All exponent tuples of the given total degree, in graded-lex (descending) order"""
    out = [
        exps
        for exps in itertools.product(range(degree + 1), repeat=nvars)
        if sum(exps) == degree
    ]
    out.sort(reverse=True)
    return out


class Poly:
    """Immutable sparse polynomial with Fraction coefficients"""

    __slots__ = ("_terms", "_nvars", "_has_y", "_hash")

    def __init__(self, terms: Mapping[Exponent, Any], nvars: int, has_y: bool = False):
        if nvars < 1:
            raise DomainError("a polynomial needs at least one variable")
        if has_y and nvars < 2:
            raise DomainError("a polynomial in (x, y) needs at least two variables")
        clean: Dict[Exponent, Fraction] = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise DomainError(f"bad exponent {exps} for {nvars} variables")
            c = as_fraction(coeff)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean
        self._nvars = nvars
        self._has_y = has_y
        self._hash: Optional[int] = None

    # construction helpers

    @classmethod
    def zero(cls, nvars: int, has_y: bool = False) -> "Poly":
        return cls({}, nvars, has_y)

    @classmethod
    def constant(cls, value: Any, nvars: int, has_y: bool = False) -> "Poly":
        return cls({(0,) * nvars: value}, nvars, has_y)

    @classmethod
    def variable(cls, index: int, nvars: int, has_y: bool = False) -> "Poly":
        """The variable with 0-based position `index` (y is position nvars-1 when has_y)"""
        if not 0 <= index < nvars:
            raise DomainError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls({tuple(exps): 1}, nvars, has_y)

    @classmethod
    def linear_form(cls, coeffs: Sequence[Any], nvars: int, has_y: bool = False) -> "Poly":
        """sum_j coeffs[j] * x_{j+1} over the x-variables"""
        terms = {}
        for j, c in enumerate(coeffs):
            exps = [0] * nvars
            exps[j] = 1
            terms[tuple(exps)] = c
        return cls(terms, nvars, has_y)

    def like(self, terms: Mapping[Exponent, Any]) -> "Poly":
        return Poly(terms, self._nvars, self._has_y)

    # basic properties

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def has_y(self) -> bool:
        return self._has_y

    @property
    def dim(self) -> int:
        """Number of x-variables"""
        return self._nvars - 1 if self._has_y else self._nvars

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[Exponent, Fraction]]:
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial"""
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    # arithmetic

    def _coerce(self, other: Any) -> "Poly":
        if isinstance(other, Poly):
            if other._nvars != self._nvars or other._has_y != self._has_y:
                raise DomainError("polynomials live in different variable sets")
            return other
        return Poly.constant(other, self._nvars, self._has_y)

    def __add__(self, other: Any) -> "Poly":
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return self.like(terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return self.like({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "Poly":
        if not isinstance(other, Poly):
            c = as_fraction(other)
            return self.like({e: c * v for e, v in self._terms.items()})
        other = self._coerce(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return self.like(terms)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "Poly":
        c = as_fraction(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise DomainError("polynomial powers must be nonnegative integers")
        result = Poly.constant(1, self._nvars, self._has_y)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, Poly):
            return (
                self._nvars == other._nvars
                and self._has_y == other._has_y
                and self._terms == other._terms
            )
        try:
            return self == Poly.constant(other, self._nvars, self._has_y)
        except Exception:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, self._has_y, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # calculus

    def diff(self, index: int) -> "Poly":
        """Partial derivative in the variable at 0-based position `index`"""
        terms = {}
        for e, c in self._terms.items():
            if e[index]:
                new = list(e)
                new[index] -= 1
                terms[tuple(new)] = c * e[index]
        return self.like(terms)

    def gradient(self) -> List["Poly"]:
        """Full gradient over all variables (x1..xd, then y when present)"""
        return [self.diff(i) for i in range(self._nvars)]

    # evaluation

    def evaluate_array(self, points: np.ndarray) -> np.ndarray:
        """Floating-point evaluation on an array of shape (..., nvars)"""
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self._nvars:
            raise DomainError(f"points have {pts.shape[-1]} coordinates, expected {self._nvars}")
        if not self._terms:
            return np.zeros(pts.shape[:-1])
        exps = np.array(list(self._terms.keys()), dtype=float)
        coeffs = np.array([float(c) for c in self._terms.values()])
        powers = np.prod(np.power(pts[..., None, :], exps), axis=-1)
        return np.sum(powers * coeffs, axis=-1)

    def __call__(self, *point: Any) -> Union[Fraction, float]:
        return eval_poly(self, point)

    # conversions

    def symbols(self) -> List[sympy.Symbol]:
        names = [f"x{j + 1}" for j in range(self.dim)]
        if self._has_y:
            names.append("y")
        return list(sympy.symbols(names, real=True))

    def to_sympy(self) -> sympy.Expr:
        syms = self.symbols()
        expr = sympy.Integer(0)
        for e, c in self._terms.items():
            mono = sympy.Rational(c.numerator, c.denominator)
            for s, k in zip(syms, e):
                mono *= s ** k
            expr += mono
        return expr

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = [f"x{j + 1}" for j in range(self.dim)] + (["y"] if self._has_y else [])
        order = sorted(self._terms, key=lambda e: (sum(e), e), reverse=True)
        pieces = []
        for e in order:
            c = self._terms[e]
            factors = [
                name if k == 1 else f"{name}^{k}" for name, k in zip(names, e) if k
            ]
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                text = body if mag == 1 else f"{mag}*{body}"
            else:
                text = str(mag)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, text))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self}, nvars={self._nvars}, has_y={self._has_y})"


def eval_poly(p: Poly, point: Sequence[Any]) -> Union[Fraction, float]:
    """Evaluate exactly, then round: a Fraction for rational points, else a float"""
    if len(point) != p.nvars:
        raise DomainError(f"point has {len(point)} coordinates, polynomial has {p.nvars}")
    exact_input = all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in point)
    coords = [Fraction(v) if isinstance(v, (int, Fraction)) else Fraction(float(v)) for v in point]
    # Horner in the first variable, recursing on the rest
    value = _horner(p.terms, coords)
    return value if exact_input else float(value)


def _horner(terms: Mapping[Exponent, Fraction], coords: Sequence[Fraction]) -> Fraction:
    if not terms:
        return Fraction(0)
    if len(coords) == 0:
        return sum(terms.values(), Fraction(0))
    groups: Dict[int, Dict[Exponent, Fraction]] = {}
    for e, c in terms.items():
        groups.setdefault(e[0], {})[e[1:]] = c
    top = max(groups)
    acc = Fraction(0)
    for k in range(top, -1, -1):
        acc = acc * coords[0] + _horner(groups.get(k, {}), coords[1:])
    return acc


def _exact_matrix(sigma: Any) -> ExactMatrix:
    try:
        rows = [[as_fraction(v) for v in row] for row in np.asarray(sigma, dtype=object)]
    except SymbolicPathUnavailable as e:
        raise SymbolicPathUnavailable(
            f"reflection matrix has irrational entries ({e}); use the numeric evaluation path"
        ) from e
    return tuple(tuple(r) for r in rows)


def act(sigma: Any, p: Poly) -> Poly:
    """(sigma p)(x, y) = p(sigma(x), y), exactly"""
    mat = _exact_matrix(sigma)
    d = p.dim
    if len(mat) != d or any(len(r) != d for r in mat):
        raise DomainError(f"matrix shape does not match the {d} x-variables")
    images = [Poly.linear_form(mat[i], p.nvars, p.has_y) for i in range(d)]
    power_cache: Dict[Tuple[int, int], Poly] = {}

    def power(i: int, k: int) -> Poly:
        key = (i, k)
        if key not in power_cache:
            power_cache[key] = images[i] ** k
        return power_cache[key]

    result = Poly.zero(p.nvars, p.has_y)
    for e, c in p.items():
        tail = [0] * p.nvars
        if p.has_y:
            tail[-1] = e[-1]
        term = Poly({tuple(tail): c}, p.nvars, p.has_y)
        for i in range(d):
            if e[i]:
                term = term * power(i, e[i])
        result = result + term
    return result


def rational_direction(alpha: Sequence[Any]) -> Tuple[Fraction, ...]:
    """The rational vector l with alpha = s*l, s > 0, scaled so its first nonzero entry is ±1"""
    entries = [sympy.nsimplify(sympy.sympify(v)) for v in alpha]
    pivot = next((v for v in entries if v != 0), None)
    if pivot is None:
        raise DomainError("the zero vector is not a root")
    scale = sympy.Abs(pivot)
    out = []
    for v in entries:
        ratio = sympy.simplify(v / scale)
        if not ratio.is_Rational:
            raise SymbolicPathUnavailable(
                f"root {tuple(alpha)} has no rational direction; use the numeric evaluation path"
            )
        out.append(Fraction(int(ratio.p), int(ratio.q)))
    return tuple(out)


def reflection_matrix(direction: Sequence[Any]) -> ExactMatrix:
    """Exact matrix of x -> x - 2<l,x>/<l,l> l"""
    l = [as_fraction(v) for v in direction]
    norm = sum(v * v for v in l)
    if not norm:
        raise DomainError("cannot reflect in the zero vector")
    d = len(l)
    return tuple(
        tuple((1 if i == j else 0) - 2 * l[i] * l[j] / norm for j in range(d))
        for i in range(d)
    )


def divide_by_linear(p: Poly, direction: Sequence[Any]) -> Poly:
    """Exact quotient p / <l, x>; a nonzero remainder is an internal-consistency failure"""
    l = [as_fraction(v) for v in direction]
    if not any(l):
        raise DomainError("cannot divide by the zero linear form")
    gens = p.symbols()
    numerator = sympy.Poly(p.to_sympy(), *gens, domain=sympy.QQ)
    denominator = sympy.Poly(
        Poly.linear_form(l, p.nvars, p.has_y).to_sympy(), *gens, domain=sympy.QQ
    )
    try:
        quotient = numerator.exquo(denominator)
    except ExactQuotientFailed as e:
        _, remainder = numerator.div(denominator)
        raise InternalConsistencyError(
            f"{p} is not divisible by the linear form {tuple(l)}; "
            f"remainder {remainder.as_expr()}"
        ) from e
    return p.like(
        {
            tuple(int(k) for k in mono): Fraction(int(c.p), int(c.q))
            for mono, c in quotient.terms()
            if c
        }
    )


def divided_reflection_difference(alpha: Sequence[Any], p: Poly) -> Poly:
    """(p - sigma_alpha p) / <l, x>, with l the rational direction of alpha

    For alpha with rational entries l = alpha, so the quotient is the literal
    (p - sigma_alpha p)/<alpha, x>. For alpha = sqrt(2) e_j it is (p - sigma_j p)/x_j.
    """
    direction = rational_direction(alpha)
    reflected = act(reflection_matrix(direction), p)
    return divide_by_linear(p - reflected, direction)


def parse_poly(text: str, dim: int, has_y: bool = True) -> Poly:
    """Parse polynomial text such as ``x1^2 - 3*y^2`` or ``1/2*x1*x2 + y``

    Grammar: sums and differences of products of rational literals and the variables
    x1..x<dim> (and y when has_y), with ``^`` or ``**`` for nonnegative integer powers
    and parentheses for grouping.
    """
    names = [f"x{j + 1}" for j in range(dim)] + (["y"] if has_y else [])
    syms = sympy.symbols(names, real=True)
    local = {name: s for name, s in zip(names, syms)}
    try:
        expr = parse_expr(
            text,
            local_dict=local,
            transformations=standard_transformations + (convert_xor,),
            evaluate=True,
        )
    except Exception as e:
        raise DomainError(f"cannot parse polynomial {text!r}: {e}") from e
    extra = expr.free_symbols - set(syms)
    if extra:
        raise DomainError(f"unknown variables {sorted(str(s) for s in extra)} in {text!r}")
    try:
        sp = sympy.Poly(expr, *syms, domain="QQ")
    except sympy.PolynomialError as e:
        raise DomainError(f"{text!r} is not a polynomial: {e}") from e
    terms = {
        tuple(int(k) for k in mono): Fraction(int(c.p), int(c.q)) for mono, c in sp.terms()
    }
    return Poly(terms, len(names), has_y)


def from_sympy(expr: sympy.Expr, dim: int, has_y: bool = True) -> Poly:
    """Inverse of Poly.to_sympy for expressions in x1..xd (and y)"""
    return parse_poly(str(expr), dim, has_y)


__all__ = [
    "Poly",
    "act",
    "as_fraction",
    "divide_by_linear",
    "divided_reflection_difference",
    "eval_poly",
    "from_sympy",
    "monomials",
    "parse_poly",
    "rational_direction",
    "reflection_matrix",
]

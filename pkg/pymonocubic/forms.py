# -----------------------------------------------------------------------------
# binary cubic forms: twisted GL2 action, covariants, index forms of cubic
# rings, bounded unit representation search
# -----------------------------------------------------------------------------
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

import sympy
from sympy import Matrix, Poly, expand

from pymonocubic.core.errors import DomainError
from pymonocubic.core.logger import Logger
from pymonocubic.exactmath import (CubeFreeClass, RationalLike, rational_cube_root, rational_roots, to_fraction,
                                   to_sympy)
from pymonocubic.mordell import MordellCurve, MordellPoint, on_curve, to_standard

X, Y = sympy.symbols('X Y')

Vector3 = Tuple[Fraction, Fraction, Fraction]


def _frac_fields(obj, names: Sequence[str]):
    for name in names:
        object.__setattr__(obj, name, to_fraction(getattr(obj, name)))


@dataclass(frozen=True)
class BinaryQuadraticForm:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        _frac_fields(self, ('a', 'b', 'c'))

    @property
    def coeffs(self) -> Tuple[Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c

    def evaluate(self, x: RationalLike, y: RationalLike) -> Fraction:
        x, y = to_fraction(x), to_fraction(y)
        return self.a * x * x + self.b * x * y + self.c * y * y

    def to_expr(self) -> sympy.Expr:
        a, b, c = (to_sympy(v) for v in self.coeffs)
        return a * X**2 + b * X * Y + c * Y**2

    @classmethod
    def from_expr(cls, expr: sympy.Expr) -> BinaryQuadraticForm:
        poly = Poly(expand(expr), X, Y)
        return cls(*(to_fraction(poly.coeff_monomial(mono)) for mono in (X**2, X * Y, Y**2)))


@dataclass(frozen=True)
class BinaryCubicForm:
    """aX^3 + bX^2Y + cXY^2 + dY^3 over the rationals."""
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        _frac_fields(self, ('a', 'b', 'c', 'd'))

    @property
    def coeffs(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c, self.d

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.coeffs)

    @property
    def is_nondegenerate(self) -> bool:
        return disc_form(self) != 0

    @classmethod
    def homogenize(cls, monic: Sequence[RationalLike]) -> BinaryCubicForm:
        """Homogenization of X^3 + p X^2 + q X + r given as (p, q, r)."""
        p, q, r = monic
        return cls(1, p, q, r)

    def evaluate(self, x: RationalLike, y: RationalLike) -> Fraction:
        x, y = to_fraction(x), to_fraction(y)
        return self.a * x**3 + self.b * x * x * y + self.c * x * y * y + self.d * y**3

    def dehomogenized_roots(self) -> List[Fraction]:
        """Rational roots of f(t, 1)."""
        return rational_roots(self.coeffs)

    def to_expr(self) -> sympy.Expr:
        a, b, c, d = (to_sympy(v) for v in self.coeffs)
        return a * X**3 + b * X**2 * Y + c * X * Y**2 + d * Y**3

    @classmethod
    def from_expr(cls, expr: sympy.Expr) -> BinaryCubicForm:
        expr = expand(expr)
        if expr == 0:
            return cls(0, 0, 0, 0)
        poly = Poly(expr, X, Y)
        return cls(*(to_fraction(poly.coeff_monomial(mono)) for mono in (X**3, X**2 * Y, X * Y**2, Y**3)))

    def __str__(self):
        terms = []
        for coeff, mono in zip(self.coeffs, ('X^3', 'X^2Y', 'XY^2', 'Y^3')):
            if coeff:
                terms.append(f'{coeff}{mono}' if coeff != 1 else mono)
        return ' + '.join(terms).replace('+ -', '- ') or '0'


@dataclass(frozen=True)
class GL2Matrix:
    g11: Fraction
    g12: Fraction
    g21: Fraction
    g22: Fraction

    def __post_init__(self):
        _frac_fields(self, ('g11', 'g12', 'g21', 'g22'))

    @classmethod
    def identity(cls) -> GL2Matrix:
        return cls(1, 0, 0, 1)

    @classmethod
    def diag(cls, d1: RationalLike, d2: RationalLike) -> GL2Matrix:
        return cls(d1, 0, 0, d2)

    @property
    def det(self) -> Fraction:
        return self.g11 * self.g22 - self.g12 * self.g21

    def __matmul__(self, other: GL2Matrix) -> GL2Matrix:
        return GL2Matrix(
            self.g11 * other.g11 + self.g12 * other.g21,
            self.g11 * other.g12 + self.g12 * other.g22,
            self.g21 * other.g11 + self.g22 * other.g21,
            self.g21 * other.g12 + self.g22 * other.g22,
        )


@dataclass(frozen=True)
class CubicRingData:
    """Structure constants of a normal basis {1, w2, w3}:
    w2*w3 = n, w2^2 = m - b*w2 + a*w3, w3^2 = l - d*w2 + c*w3."""
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    l: Fraction
    m: Fraction
    n: Fraction

    def __post_init__(self):
        _frac_fields(self, ('a', 'b', 'c', 'd', 'l', 'm', 'n'))

    @classmethod
    def of_form(cls, f: BinaryCubicForm) -> CubicRingData:
        a, b, c, d = f.coeffs
        return cls(a, b, c, d, l=-b * d, m=-a * c, n=-a * d)

    @classmethod
    def from_basis(cls, minpoly: Sequence[RationalLike], w2: Sequence[RationalLike],
                   w3: Sequence[RationalLike]) -> CubicRingData:
        """Structure constants of {1, w2, w3} in Q[t]/(t^3 + p t^2 + q t + r),
        minpoly = (p, q, r); w2, w3 are coordinates in (1, t, t^2). The basis is
        first shifted by rationals so that w2*w3 is rational."""
        minpoly = tuple(to_fraction(v) for v in minpoly)
        w2 = tuple(to_fraction(v) for v in w2)
        w3 = tuple(to_fraction(v) for v in w3)

        _, p, q = _coordinates(w2, w3, _poly_mul(minpoly, w2, w3))
        w2 = (w2[0] - q, w2[1], w2[2])
        w3 = (w3[0] - p, w3[1], w3[2])

        n, n2, n3 = _coordinates(w2, w3, _poly_mul(minpoly, w2, w3))
        if n2 or n3:
            raise DomainError('Basis normalization failed: w2*w3 is not rational')
        m, minus_b, a = _coordinates(w2, w3, _poly_mul(minpoly, w2, w2))
        l, minus_d, c = _coordinates(w2, w3, _poly_mul(minpoly, w3, w3))
        return cls(a=a, b=-minus_b, c=c, d=-minus_d, l=l, m=m, n=n)

    def multiply(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector3:
        """Product of two elements given in coordinates (1, w2, w3)."""
        u0, u2, u3 = (to_fraction(t) for t in u)
        v0, v2, v3 = (to_fraction(t) for t in v)
        c0 = u0 * v0
        c2 = u0 * v2 + u2 * v0
        c3 = u0 * v3 + u3 * v0
        # w2*w2
        k = u2 * v2
        c0 += k * self.m
        c2 -= k * self.b
        c3 += k * self.a
        # w3*w3
        k = u3 * v3
        c0 += k * self.l
        c2 -= k * self.d
        c3 += k * self.c
        # w2*w3 + w3*w2
        c0 += (u2 * v3 + u3 * v2) * self.n
        return c0, c2, c3

    def is_associative(self) -> bool:
        basis = [(Fraction(0), Fraction(1), Fraction(0)), (Fraction(0), Fraction(0), Fraction(1))]
        for e1 in basis:
            for e2 in basis:
                for e3 in basis:
                    if self.multiply(self.multiply(e1, e2), e3) != self.multiply(e1, self.multiply(e2, e3)):
                        return False
        return True


def _poly_mul(minpoly: Sequence, u: Sequence, v: Sequence) -> tuple:
    # product in Q[t]/(t^3 + p t^2 + q t + r), coordinates (1, t, t^2);
    # entries may be Fractions or sympy expressions
    p, q, r = minpoly
    prod = [0] * 5
    for i in range(3):
        for j in range(3):
            prod[i + j] += u[i] * v[j]
    for deg in (4, 3):
        top = prod[deg]
        prod[deg] = 0
        prod[deg - 1] -= top * p
        prod[deg - 2] -= top * q
        prod[deg - 3] -= top * r
    return prod[0], prod[1], prod[2]


def _coordinates(w2: Vector3, w3: Vector3, target: Vector3) -> Vector3:
    # coordinates of target in the basis {1, w2, w3}
    basis = Matrix([[1, 0, 0], [to_sympy(w2[0]), to_sympy(w2[1]), to_sympy(w2[2])],
                    [to_sympy(w3[0]), to_sympy(w3[1]), to_sympy(w3[2])]]).T
    if basis.det() == 0:
        raise DomainError('{1, w2, w3} is not a basis')
    coords = basis.inv() * Matrix([to_sympy(t) for t in target])
    return tuple(to_fraction(v) for v in coords)


def disc_form(f: BinaryCubicForm) -> Fraction:
    a, b, c, d = f.coeffs
    return b*b*c*c + 18*a*b*c*d - 4*a*c**3 - 4*d*b**3 - 27*a*a*d*d


def act(gamma: GL2Matrix, f: BinaryCubicForm) -> BinaryCubicForm:
    """gamma * f (X, Y) = det(gamma)^-1 f((X, Y) . gamma)"""
    det = gamma.det
    if det == 0:
        raise DomainError('Singular matrix cannot act on forms')
    g11, g12, g21, g22 = (to_sympy(v) for v in (gamma.g11, gamma.g12, gamma.g21, gamma.g22))
    substituted = f.to_expr().subs({X: g11 * X + g21 * Y, Y: g12 * X + g22 * Y}, simultaneous=True)
    return BinaryCubicForm.from_expr(substituted / to_sympy(det))


def covariants(f: BinaryCubicForm) -> Tuple[BinaryQuadraticForm, BinaryCubicForm]:
    expr = f.to_expr()
    fx, fy = sympy.diff(expr, X), sympy.diff(expr, Y)
    h = expand((sympy.diff(fx, X) * sympy.diff(fy, Y) - sympy.diff(fx, Y) ** 2) / 4)
    g = expand(fx * sympy.diff(h, Y) - fy * sympy.diff(h, X))
    hessian = BinaryQuadraticForm.from_expr(h) if h != 0 else BinaryQuadraticForm(0, 0, 0)
    return hessian, BinaryCubicForm.from_expr(g)


def syzygy_holds(f: BinaryCubicForm) -> bool:
    h, g = covariants(f)
    identity = g.to_expr() ** 2 + 27 * to_sympy(disc_form(f)) * f.to_expr() ** 2 + 4 * h.to_expr() ** 3
    return expand(identity) == 0


def covering_map(f: BinaryCubicForm, x: RationalLike, y: RationalLike, z: RationalLike) -> Tuple[Fraction, Fraction]:
    """Image of a point of f(x, y) = z^3 on Y^2 = 4X^3 - 27 disc(f)."""
    z = to_fraction(z)
    if z == 0:
        raise DomainError('z must be nonzero')
    if f.evaluate(x, y) != z**3:
        raise DomainError(f'({x}, {y}, {z}) does not satisfy f(x, y) = z^3')
    h, g = covariants(f)
    return -h.evaluate(x, y) / z**2, g.evaluate(x, y) / z**3


def index_form_from_ring(r: CubicRingData) -> BinaryCubicForm:
    if not r.is_associative():
        raise DomainError(f'Structure constants are not associative: {r}')
    return BinaryCubicForm(r.a, r.b, r.c, r.d)


def index_form_of_basis(minpoly: Sequence[RationalLike], w2: Sequence[RationalLike],
                        w3: Sequence[RationalLike]) -> BinaryCubicForm:
    """Index form read off directly: for g = x*w2 + y*w3, I(x, y) = x*c3 - y*c2
    where c2, c3 are the w2, w3 coordinates of g^2."""
    minpoly = tuple(to_sympy(v) for v in minpoly)
    w2 = tuple(to_sympy(v) for v in w2)
    w3 = tuple(to_sympy(v) for v in w3)
    gen = tuple(X * s + Y * t for s, t in zip(w2, w3))
    square = _poly_mul(minpoly, gen, gen)

    basis = Matrix([[1, 0, 0], list(w2), list(w3)]).T
    if basis.det() == 0:
        raise DomainError('{1, w2, w3} is not a basis')
    _, c2, c3 = basis.inv() * Matrix(square)
    return BinaryCubicForm.from_expr(X * c3 - Y * c2)


def represents_unit(f: BinaryCubicForm, bound: int) -> Tuple[int, int]|None:
    """Smallest (x, y) with max(|x|, |y|) <= bound and f(x, y) = +-1.

    Since f(-x, -y) = -f(x, y), witnesses come in pairs; each is taken with its first
    nonzero coordinate positive before the lexicographic minimum is chosen.
    """
    if bound < 1:
        raise DomainError('Search bound must be positive')
    if not f.is_integral:
        raise DomainError(f'Unit search needs integer coefficients: {f}')

    solutions = []
    for y in range(-bound, bound + 1):
        for target in (1, -1):
            # a x^3 + b y x^2 + c y^2 x + d y^3 - target = 0
            coeffs = [f.a, f.b * y, f.c * y * y, f.d * y**3 - target]
            if not any(coeffs[:3]):
                if coeffs[3] == 0:
                    solutions.extend((x, y) for x in range(-bound, bound + 1))
                continue
            for root in rational_roots(coeffs):
                if root.denominator == 1 and abs(root.numerator) <= bound:
                    solutions.append((root.numerator, y))

    Logger.get_instance().debug(f'Unit search for {f} up to {bound}: {len(solutions)} solutions')
    return min(_positive_representative(s) for s in solutions) if solutions else None


def _positive_representative(point: Tuple[int, int]) -> Tuple[int, int]:
    x, y = point
    return (-x, -y) if x < 0 or (x == 0 and y < 0) else (x, y)


def reference_form(D: RationalLike) -> BinaryCubicForm:
    """f0 = X^2 Y - (D/4) Y^3, a form of discriminant D."""
    return BinaryCubicForm(0, 1, 0, -to_fraction(D) / 4)


def depressed_form(x0: RationalLike, D: RationalLike) -> BinaryCubicForm:
    """Homogenization of X^3 - (x0^2/3) X + (27D - 2x0^3)/27."""
    x0, D = to_fraction(x0), to_fraction(D)
    return BinaryCubicForm(1, 0, -x0 * x0 / 3, (27 * D - 2 * x0**3) / 27)


@dataclass(frozen=True)
class GammaWitness:
    branch: int
    gamma: GL2Matrix
    form: BinaryCubicForm = field(compare=False)


def gamma_candidates(x0: RationalLike, y0: RationalLike, n: int, m: int) -> List[GammaWitness]:
    """Matrices gamma with gamma * (X^3 - m Y^3) proposed for the point (x0, y0)
    on Y^2 = 4X^3 + 81n^2, one per sign branch whose cube root is rational."""
    x0, y0 = to_fraction(x0), to_fraction(y0)
    if x0 == 0:
        raise DomainError('Kernel point (x0 = 0) has no gamma in this parametrization')
    D = Fraction(-3 * n * n)
    ratio = (y0 - 9 * n) / (y0 + 9 * n)
    core = 2 * x0**3 - 27 * D

    result = []
    for branch in (-1, 1):
        target = ratio if branch == -1 else 1 / ratio
        u = rational_cube_root(target / m)
        if u is None:
            continue
        g11 = u * x0 / 3
        g12 = x0 * x0 / (9 * m * g11)
        g21 = (core - branch * 9 * y0 * n) * g11 / (6 * x0 * x0)
        g22 = (core + branch * 9 * y0 * n) / (54 * m * g11)
        gamma = GL2Matrix(g11, g12, g21, g22)
        if gamma.det == 0:
            continue
        result.append(GammaWitness(branch, gamma, act(gamma, BinaryCubicForm(1, 0, 0, -m))))
    return result


def verify_gamma_equivalence(P: MordellPoint, n: int, m: CubeFreeClass|int) -> bool:
    if P.is_infinity:
        raise DomainError('Point at infinity has no gamma')
    D = -3 * n * n
    if not on_curve(MordellCurve(-27 * D), P):
        raise DomainError(f'{P} is not on E^{-27 * D}')
    P = to_standard(P)
    m_value = m.m if isinstance(m, CubeFreeClass) else int(m)

    target = depressed_form(P.x, D)
    for witness in gamma_candidates(P.x, P.y, n, m_value):
        if witness.form == target:
            Logger.get_instance().debug(f'gamma {witness.gamma} verified on branch {witness.branch:+d}')
            return True
    return False

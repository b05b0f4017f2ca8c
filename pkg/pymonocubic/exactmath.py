# -----------------------------------------------------------------------------
# exact rational arithmetic: signed factorizations, valuations, cube-free
# classes in Q*/(Q*)^3, rational roots
# -----------------------------------------------------------------------------
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from operator import mul
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import sympy
from sympy import Poly, Rational, factorint, integer_nthroot, isprime, multiplicity
from sympy.abc import x as _x

from pymonocubic.core.errors import DomainError

RationalLike = Union[int, Fraction, Rational, str]


def to_fraction(q: RationalLike) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, sympy.Basic):
        if not q.is_Rational:
            raise DomainError(f'Not a rational number: {q}')
        return Fraction(int(q.p), int(q.q))
    return Fraction(q)


def to_sympy(q: RationalLike) -> Rational:
    q = to_fraction(q)
    return Rational(q.numerator, q.denominator)


@dataclass(frozen=True)
class SignedFactorization:
    sign: int
    factors: Tuple[Tuple[int, int], ...]

    def reconstruct(self) -> Fraction:
        value = Fraction(self.sign)
        for p, e in self.factors:
            value *= Fraction(p) ** e
        return value

    def as_dict(self) -> Dict[int, int]:
        return dict(self.factors)

    def exponent(self, p: int) -> int:
        return self.as_dict().get(p, 0)

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]


@dataclass(frozen=True)
class CubeFreeClass:
    """Positive cube-free representative m = h*k^2 of a class in Q*/(Q*)^3."""
    m: int
    h: int
    k: int

    @property
    def conjugate(self) -> int:
        # the other representative of the same field: m^2 / k^3 = h^2 k
        return self.h * self.h * self.k

    @property
    def canonical(self) -> int:
        return min(self.m, self.conjugate)

    @property
    def is_trivial(self) -> bool:
        return self.m == 1

    def exponents(self) -> Dict[int, int]:
        result = {p: 1 for p in factorint(self.h)}
        result.update({p: 2 for p in factorint(self.k)})
        return result


class Residue9(str, enum.Enum):
    PLUS_ONE = '+1'
    MINUS_ONE = '-1'
    OTHER = 'other'

    @property
    def is_unit_class(self) -> bool:
        return self is not Residue9.OTHER


def factor_signed(q: RationalLike) -> SignedFactorization:
    q = to_fraction(q)
    if q == 0:
        raise DomainError('Cannot factor zero')

    exponents: Dict[int, int] = dict(factorint(abs(q.numerator)))
    for p, e in factorint(q.denominator).items():
        exponents[p] = exponents.get(p, 0) - e
    factors = tuple(sorted((p, e) for p, e in exponents.items() if e != 0))
    return SignedFactorization(sign=1 if q > 0 else -1, factors=factors)


def cube_free_class(q: RationalLike|SignedFactorization) -> CubeFreeClass:
    factorization = q if isinstance(q, SignedFactorization) else factor_signed(q)
    return cube_free_class_of_exponents(factorization.factors)


def cube_free_class_of_exponents(exponents: Iterable[Tuple[int, int]]) -> CubeFreeClass:
    """Cube-free class of prod p^e for (p, e) pairs; e is read modulo 3."""
    h, k = 1, 1
    for p, e in exponents:
        r = e % 3
        if r == 1:
            h *= p
        elif r == 2:
            k *= p
    return CubeFreeClass(m=h * k * k, h=h, k=k)


def valuation(q: RationalLike, p: int) -> int:
    if not isprime(p):
        raise DomainError(f'{p} is not a prime')
    q = to_fraction(q)
    if q == 0:
        raise DomainError('Valuation of zero is undefined')
    return multiplicity(p, abs(q.numerator)) - multiplicity(p, q.denominator)


def residue_mod9(m: int) -> Residue9:
    if m % 3 == 0:
        raise DomainError(f'{m} is divisible by 3; its residue class mod 9 is not a unit class')
    r = m % 9
    if r == 1:
        return Residue9.PLUS_ONE
    if r == 8:
        return Residue9.MINUS_ONE
    return Residue9.OTHER


def is_cube_free(m: int) -> bool:
    if m == 0:
        return False
    return all(e < 3 for e in factorint(abs(m)).values())


def is_squarefree(m: int) -> bool:
    return m != 0 and all(e < 2 for e in factorint(abs(m)).values())


def rational_nth_root(q: RationalLike, n: int) -> Fraction|None:
    q = to_fraction(q)
    if q < 0:
        if n % 2 == 0:
            return None
        root = rational_nth_root(-q, n)
        return -root if root is not None else None
    num, num_exact = integer_nthroot(q.numerator, n)
    den, den_exact = integer_nthroot(q.denominator, n)
    if not (num_exact and den_exact):
        return None
    return Fraction(int(num), int(den))


def rational_cube_root(q: RationalLike) -> Fraction|None:
    return rational_nth_root(q, 3)


def rational_sqrt(q: RationalLike) -> Fraction|None:
    return rational_nth_root(q, 2)


def rational_roots(coeffs: Sequence[RationalLike]) -> List[Fraction]:
    """Distinct rational roots of the polynomial with the given coefficients
    (highest degree first), in ascending order."""
    coeffs = [to_fraction(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if len(coeffs) < 2:
        return []
    poly = Poly([to_sympy(c) for c in coeffs], _x, domain='QQ')
    roots = set()
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            c1, c0 = factor.all_coeffs()
            roots.add(to_fraction(-c0 / c1))
    return sorted(roots)


def product(values: Iterable[int]) -> int:
    return reduce(mul, values, 1)

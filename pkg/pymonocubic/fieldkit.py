# -----------------------------------------------------------------------------
# pure cubic field toolkit: integral bases, index forms of the maximal order,
# monogenity certificates, splitting-type consistency checks
# -----------------------------------------------------------------------------
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, Poly, discriminant, primerange
from sympy.abc import x as _x

from pymonocubic.cocycle import DedekindType
from pymonocubic.core.errors import DomainError, InternalError
from pymonocubic.core.logger import Logger
from pymonocubic.exactmath import (RationalLike, cube_free_class, is_cube_free, rational_roots, residue_mod9,
                                   to_fraction, to_sympy)
from pymonocubic.forms import BinaryCubicForm, CubicRingData, index_form_from_ring, represents_unit

Vector3 = Tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class IntegralBasis:
    m: int
    h: int
    k: int
    dedekind_type: DedekindType
    elements: Tuple[Vector3, Vector3, Vector3]
    disc: int

    @property
    def denominator(self) -> int:
        return lcm(*(c.denominator for element in self.elements for c in element))


class MonogenityStatus(str, enum.Enum):
    MONOGENIC = 'monogenic'
    UNDETERMINED = 'undetermined'


@dataclass(frozen=True)
class MonogenityCertificate:
    m: int
    form: BinaryCubicForm
    status: MonogenityStatus
    witness: Optional[Tuple[int, int]] = None
    value: Optional[int] = None


def _type_of(m: int) -> DedekindType:
    if m % 3 == 0 or not residue_mod9(m).is_unit_class:
        return DedekindType.I
    return DedekindType.II


def multiplication_matrix(element: Sequence[RationalLike], m: int) -> Matrix:
    """Matrix of multiplication by a0 + a1 t + a2 t^2 on (1, t, t^2), t^3 = m."""
    a0, a1, a2 = (to_sympy(c) for c in element)
    return Matrix([
        [a0, m * a2, m * a1],
        [a1, a0, m * a2],
        [a2, a1, a0],
    ])


def minimal_polynomial(element: Sequence[RationalLike], m: int) -> List[Fraction]:
    """Characteristic polynomial of the element (a power of its minimal
    polynomial), highest degree first."""
    charpoly = multiplication_matrix(element, m).charpoly(_x)
    return [to_fraction(c) for c in charpoly.all_coeffs()]


def is_algebraic_integer(element: Sequence[RationalLike], m: int) -> bool:
    return all(c.denominator == 1 for c in minimal_polynomial(element, m))


def basis_discriminant(elements: Sequence[Sequence[RationalLike]], m: int) -> Fraction:
    # det of the trace form; Tr(a0 + a1 t + a2 t^2) = 3 a0
    mats = [multiplication_matrix(e, m) for e in elements]
    trace_form = Matrix(3, 3, lambda i, j: (mats[i] * mats[j]).trace())
    return to_fraction(trace_form.det())


def integral_basis(m: int) -> IntegralBasis:
    if m <= 1 or not is_cube_free(m):
        raise DomainError(f'{m} is not a cube-free integer greater than 1')
    c = cube_free_class(m)
    h, k = c.h, c.k
    dedekind_type = _type_of(m)
    one = (Fraction(1), Fraction(0), Fraction(0))
    theta = (Fraction(0), Fraction(1), Fraction(0))

    if dedekind_type is DedekindType.I:
        elements = (one, theta, (Fraction(0), Fraction(0), Fraction(1, k)))
        expected = -27 * (h * k)**2
    else:
        elements = (one, theta, _find_nu(m, k))
        expected = -3 * (h * k)**2

    disc = basis_discriminant(elements, m)
    if disc != expected:
        raise InternalError(f'Integral basis of Q(cbrt({m})) has discriminant {disc}, expected {expected}')
    return IntegralBasis(m, h, k, dedekind_type, elements, int(disc))


def _find_nu(m: int, k: int) -> Vector3:
    # nu = (u + v t + t^2)/(3k); Tr(nu) = u/k forces k | u
    denominator = 3 * k
    for u in range(0, denominator, k):
        for v in range(denominator):
            nu = (Fraction(u, denominator), Fraction(v, denominator), Fraction(1, denominator))
            if is_algebraic_integer(nu, m):
                Logger.get_instance().debug(f'm={m}: integral nu found at (u, v) = ({u}, {v})')
                return nu
    raise InternalError(f'No integral element (u + v t + t^2)/{denominator} found for m={m}')


def index_form_of_field(m: int) -> BinaryCubicForm:
    basis = integral_basis(m)
    _, w2, w3 = basis.elements
    ring = CubicRingData.from_basis((0, 0, -m), w2, w3)
    form = index_form_from_ring(ring)
    if not form.is_integral:
        raise InternalError(f'Index form of Q(cbrt({m})) has non-integral coefficients: {form}')
    return form


def certify_monogenic(m: int, bound: int) -> MonogenityCertificate:
    form = index_form_of_field(m)
    witness = represents_unit(form, bound)
    if witness is None:
        return MonogenityCertificate(m, form, MonogenityStatus.UNDETERMINED)
    value = int(form.evaluate(*witness))
    return MonogenityCertificate(m, form, MonogenityStatus.MONOGENIC, witness, value)


def _factor_shape(poly: Poly, p: int) -> Tuple[int, ...]:
    reduced = Poly(poly.as_expr(), _x, modulus=p)
    _, factors = reduced.factor_list()
    return tuple(sorted(f.degree() for f, mult in factors for _ in range(mult)))


def _irreducible_cubic(coeffs: Sequence[RationalLike]) -> Poly:
    coeffs = [to_fraction(c) for c in coeffs]
    if len(coeffs) != 4 or coeffs[0] != 1 or any(c.denominator != 1 for c in coeffs):
        raise DomainError(f'Expected a monic integer cubic, got {coeffs}')
    if rational_roots(coeffs):
        raise DomainError(f'Cubic with coefficients {[str(c) for c in coeffs]} is reducible')
    return Poly([int(c) for c in coeffs], _x)


def splitting_consistent(f: Sequence[RationalLike], g: Sequence[RationalLike], prime_bound: int) -> bool:
    """False certifies that Q[x]/(f) and Q[x]/(g) are not isomorphic; True is
    only agreement of factorization shapes modulo every good p <= prime_bound."""
    pf, pg = _irreducible_cubic(f), _irreducible_cubic(g)
    bad = int(discriminant(pf)) * int(discriminant(pg))
    for p in primerange(2, prime_bound + 1):
        if bad % p == 0:
            continue
        if _factor_shape(pf, p) != _factor_shape(pg, p):
            Logger.get_instance().debug(f'Splitting shapes differ modulo {p}')
            return False
    return True

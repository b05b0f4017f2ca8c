# -----------------------------------------------------------------------------
# points of E^-27D -> pure cubic fields Q(cbrt(m)) and their F3 exponent
# (lambda) vectors over the prime support of the discriminant
# -----------------------------------------------------------------------------
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Tuple

from sympy import primefactors

from pymonocubic.core.errors import DomainError, DualKernelPoint, InternalError, SupportViolation
from pymonocubic.core.logger import Logger
from pymonocubic.exactmath import (CubeFreeClass, cube_free_class, cube_free_class_of_exponents, is_cube_free,
                                   product, rational_sqrt, residue_mod9)
from pymonocubic.mordell import MordellPoint, dual_curve, on_curve, preimage_by_phi, to_standard


class DedekindType(str, enum.Enum):
    I = 'I'     # m != +-1 mod 9, disc = -27(hk)^2
    II = 'II'   # m == +-1 mod 9, disc = -3(hk)^2


@dataclass(frozen=True)
class AnalysisContext:
    n: int
    D: int
    dedekind_type: DedekindType
    prime_support: Tuple[int, ...]

    @classmethod
    def from_n(cls, n: int) -> AnalysisContext:
        if n < 1:
            raise DomainError(f'n must be a positive integer, got {n}')
        if n % 3 == 0:
            support = tuple(primefactors(n // 3))
            dedekind_type = DedekindType.I
        else:
            support = (3,) + tuple(primefactors(n))
            dedekind_type = DedekindType.II
        return cls(n=n, D=-3 * n * n, dedekind_type=dedekind_type, prime_support=support)

    @classmethod
    def from_discriminant(cls, D: int) -> AnalysisContext:
        D = int(D)
        if D >= 0 or D % 3:
            raise DomainError(f'{D} is not of the form -3n^2')
        root = rational_sqrt(Fraction(-D, 3))
        if root is None:
            raise DomainError(f'{D} is not of the form -3n^2')
        return cls.from_n(int(root))

    @property
    def n_prime(self) -> int|None:
        return self.n // 3 if self.dedekind_type is DedekindType.I else None

    @property
    def dual_curve_k(self) -> int:
        return -27 * self.D


@dataclass(frozen=True)
class LambdaVector:
    entries: Tuple[int, ...]
    support: Tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != len(self.support):
            raise DomainError('Lambda vector and support sizes differ')
        object.__setattr__(self, 'entries', tuple(e % 3 for e in self.entries))

    @classmethod
    def zero(cls, support: Tuple[int, ...]) -> LambdaVector:
        return cls((0,) * len(support), support)

    @classmethod
    def from_class(cls, c: CubeFreeClass, support: Tuple[int, ...]) -> LambdaVector:
        exponents = c.exponents()
        for p in exponents:
            if p not in support:
                raise SupportViolation(p, list(support))
        return cls(tuple(exponents.get(p, 0) for p in support), support)

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    def canonical(self) -> LambdaVector:
        for e in self.entries:
            if e:
                return self if e == 1 else -self
        return self

    def __neg__(self) -> LambdaVector:
        return LambdaVector(tuple(-e for e in self.entries), self.support)

    def __add__(self, other: LambdaVector) -> LambdaVector:
        if self.support != other.support:
            raise DomainError('Lambda vectors over different supports')
        return LambdaVector(tuple(a + b for a, b in zip(self.entries, other.entries)), self.support)

    def scale(self, t: int) -> LambdaVector:
        return LambdaVector(tuple(t * e for e in self.entries), self.support)

    def value(self) -> int:
        return product(p**e for p, e in zip(self.support, self.entries))

    def cube_free_class(self) -> CubeFreeClass:
        return cube_free_class_of_exponents(zip(self.support, self.entries))

    def __str__(self):
        return '(' + ','.join(str(e) for e in self.entries) + ')'


@dataclass(frozen=True)
class FieldDescriptor:
    m: int
    h: int
    k: int
    dedekind_type: DedekindType
    disc: int
    trivially_monogenic: bool = False

    def flagged_trivial(self) -> FieldDescriptor:
        return replace(self, trivially_monogenic=True)


def classify_field(m: int) -> FieldDescriptor:
    if m <= 1 or not is_cube_free(m):
        raise DomainError(f'{m} is not a cube-free integer greater than 1')
    c = cube_free_class(m)
    h, k = (c.h, c.k) if c.m <= c.conjugate else (c.k, c.h)
    canonical = h * k * k

    if canonical % 3 == 0 or not residue_mod9(canonical).is_unit_class:
        return FieldDescriptor(canonical, h, k, DedekindType.I, -27 * (h * k)**2)
    return FieldDescriptor(canonical, h, k, DedekindType.II, -3 * (h * k)**2)


def _affine_on_dual(P: MordellPoint, ctx: AnalysisContext) -> MordellPoint:
    if P.is_infinity:
        raise DomainError('The point at infinity has no field')
    if not on_curve(dual_curve(ctx.D), P):
        raise DomainError(f'Point ({P}) is not on E^{ctx.dual_curve_k}')
    return to_standard(P)


def primitive_ratio(P: MordellPoint, ctx: AnalysisContext) -> Fraction:
    """(y0 - 9n)/(y0 + 9n); cbrt of it generates the field of P."""
    P = _affine_on_dual(P, ctx)
    if P.y == -9 * ctx.n:
        raise DualKernelPoint(ctx.n)
    return (P.y - 9 * ctx.n) / (P.y + 9 * ctx.n)


def point_class(P: MordellPoint, ctx: AnalysisContext) -> CubeFreeClass:
    P = _affine_on_dual(P, ctx)
    if P.x == 0:
        return cube_free_class(ctx.D)
    return cube_free_class(primitive_ratio(P, ctx))


def field_of_point(P: MordellPoint, ctx: AnalysisContext) -> Optional[FieldDescriptor]:
    """Field of P, or None for the trivial class (P in phi_D(E^D(Q)))."""
    c = point_class(P, ctx)
    in_image = preimage_by_phi(ctx.D, P) is not None
    if c.is_trivial != in_image:
        raise InternalError(f'Point ({P}): class {c.m} disagrees with the phi-image test ({in_image})')
    if c.is_trivial:
        return None
    return classify_field(c.m)


def lambda_vector(P: MordellPoint, ctx: AnalysisContext) -> LambdaVector:
    c = point_class(P, ctx)
    if c.is_trivial:
        return LambdaVector.zero(ctx.prime_support)
    return LambdaVector.from_class(c, ctx.prime_support).canonical()


def trivially_monogenic(ctx: AnalysisContext) -> Optional[FieldDescriptor]:
    if ctx.dedekind_type is not DedekindType.I:
        return None
    c = cube_free_class(ctx.n_prime)
    if c.is_trivial:
        return None
    if c.m % 3 and residue_mod9(c.m).is_unit_class:
        return None
    descriptor = classify_field(c.m).flagged_trivial()
    Logger.get_instance().debug(f'n\'={ctx.n_prime}: trivially monogenic field {descriptor.m}')
    return descriptor


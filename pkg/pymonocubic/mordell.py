# -----------------------------------------------------------------------------
# Mordell curves Y^2 = 4X^3 + k: group law, the 3-isogeny phi_D : E^D -> E^-27D
# and its dual, torsion, naive point search
# -----------------------------------------------------------------------------
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from pymonocubic.core.errors import DomainError
from pymonocubic.core.logger import Logger
from pymonocubic.exactmath import (RationalLike, factor_signed, rational_cube_root, rational_roots, rational_sqrt,
                                   to_fraction)
from pymonocubic.util.io import fmt_rational

NAIVE_SEARCH_MAX_DENOMINATOR = 8


class Model(str, enum.Enum):
    FOUR_X3 = '4X3'   # Y^2 = 4X^3 + k
    X3Q = 'X3Q'       # y^2 = x^3 + k/4, with Y = 2y


@dataclass(frozen=True)
class MordellCurve:
    k: Fraction
    model: Model = Model.FOUR_X3

    def __post_init__(self):
        object.__setattr__(self, 'k', to_fraction(self.k))
        object.__setattr__(self, 'model', Model(self.model))
        if self.k == 0:
            raise DomainError('Y^2 = 4X^3 is singular (k = 0)')

    def rhs(self, x: Fraction) -> Fraction:
        if self.model is Model.FOUR_X3:
            return 4 * x**3 + self.k
        return x**3 + self.k / 4

    def __str__(self):
        return f'E^{fmt_rational(self.k)} [{self.model.value}]'


@dataclass(frozen=True)
class MordellPoint:
    x: Optional[Fraction] = None
    y: Optional[Fraction] = None
    model: Model = Model.FOUR_X3

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise DomainError('A point needs both coordinates or none')
        if self.x is not None:
            object.__setattr__(self, 'x', to_fraction(self.x))
            object.__setattr__(self, 'y', to_fraction(self.y))
        object.__setattr__(self, 'model', Model(self.model))

    @classmethod
    def infinity(cls, model: Model = Model.FOUR_X3) -> MordellPoint:
        return cls(None, None, model)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self) -> MordellPoint:
        if self.is_infinity:
            return self
        return MordellPoint(self.x, -self.y, self.model)

    def __str__(self):
        if self.is_infinity:
            return 'infinity'
        return f'{fmt_rational(self.x)},{fmt_rational(self.y)}'


class TorsionStructure(str, enum.Enum):
    TRIVIAL = 'trivial'
    Z2 = 'Z2'
    Z3 = 'Z3'
    Z6 = 'Z6'


@dataclass(frozen=True)
class TorsionInfo:
    structure: TorsionStructure
    kappa: int

    @property
    def delta(self) -> int:
        return 1 if self.structure is TorsionStructure.Z3 else 0

    @property
    def order(self) -> int:
        return {'trivial': 1, 'Z2': 2, 'Z3': 3, 'Z6': 6}[self.structure.value]


def curve(D: RationalLike) -> MordellCurve:
    return MordellCurve(D)


def dual_curve(D: RationalLike) -> MordellCurve:
    return MordellCurve(-27 * to_fraction(D))


def on_curve(c: MordellCurve, P: MordellPoint) -> bool:
    if P.is_infinity:
        return True
    if P.model is not c.model:
        P = convert_model(P)
    return P.y * P.y == c.rhs(P.x)


def convert_model(P: MordellPoint) -> MordellPoint:
    if P.model is Model.X3Q:
        target = Model.FOUR_X3
        return MordellPoint.infinity(target) if P.is_infinity else MordellPoint(P.x, 2 * P.y, target)
    target = Model.X3Q
    return MordellPoint.infinity(target) if P.is_infinity else MordellPoint(P.x, P.y / 2, target)


def to_standard(P: MordellPoint) -> MordellPoint:
    return P if P.model is Model.FOUR_X3 else convert_model(P)


def _require_on(c: MordellCurve, *points: MordellPoint):
    for P in points:
        if not on_curve(c, P):
            raise DomainError(f'Point ({P}) is not on {c}')


def add(c: MordellCurve, P: MordellPoint, Q: MordellPoint) -> MordellPoint:
    _require_on(c, P, Q)
    result = _add_standard(c.k, to_standard(P), to_standard(Q))
    return result if c.model is Model.FOUR_X3 else convert_model(result)


def _add_standard(k: Fraction, P: MordellPoint, Q: MordellPoint) -> MordellPoint:
    # chord-tangent on Y^2 = 4X^3 + k; the line Y = LX + c meets it in x1 + x2 + x3 = L^2/4
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return MordellPoint.infinity()
        slope = 6 * P.x * P.x / P.y
    else:
        slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = slope * slope / 4 - P.x - Q.x
    y3 = slope * (P.x - x3) - P.y
    return MordellPoint(x3, y3)


def _naf(t: int) -> List[int]:
    digits = []
    while t:
        if t & 1:
            digit = 2 - (t % 4)
            t -= digit
        else:
            digit = 0
        digits.append(digit)
        t >>= 1
    return digits


def scalar_mul(c: MordellCurve, t: int, P: MordellPoint) -> MordellPoint:
    _require_on(c, P)
    base = to_standard(P)
    if t < 0:
        t, base = -t, -base

    result = MordellPoint.infinity()
    for digit in reversed(_naf(t)):
        result = _add_standard(c.k, result, result)
        if digit == 1:
            result = _add_standard(c.k, result, base)
        elif digit == -1:
            result = _add_standard(c.k, result, -base)
    return result if c.model is Model.FOUR_X3 else convert_model(result)


def phi(D: RationalLike, Q: MordellPoint) -> MordellPoint:
    """phi_D(x, y) = ((x^3 + D)/x^2, y(x^3 - 2D)/x^3), E^D -> E^-27D."""
    D = to_fraction(D)
    _require_on(curve(D), Q)
    Q = to_standard(Q)
    if Q.is_infinity or Q.x == 0:
        return MordellPoint.infinity()
    x, y = Q.x, Q.y
    return MordellPoint((x**3 + D) / (x * x), y * (x**3 - 2 * D) / x**3)


def phi_hat(D: RationalLike, P: MordellPoint) -> MordellPoint:
    """Dual isogeny E^-27D -> E^D."""
    D = to_fraction(D)
    _require_on(dual_curve(D), P)
    P = to_standard(P)
    if P.is_infinity or P.x == 0:
        return MordellPoint.infinity()
    x, y = P.x, P.y
    return MordellPoint((x**3 - 27 * D) / (9 * x * x), y * (x**3 + 54 * D) / (27 * x**3))


def preimage_by_phi(D: RationalLike, P: MordellPoint) -> MordellPoint|None:
    """A rational Q on E^D with phi_D(Q) = P, or None when P is not in phi_D(E^D(Q))."""
    D = to_fraction(D)
    _require_on(dual_curve(D), P)
    P = to_standard(P)
    if P.is_infinity:
        return MordellPoint.infinity()
    for alpha in rational_roots([1, -P.x, 0, D]):
        candidate = _lift(curve(D), alpha, lambda Q: phi(D, Q) == P)
        if candidate is not None:
            return candidate
    return None


def preimage_by_phi_hat(D: RationalLike, P: MordellPoint) -> MordellPoint|None:
    D = to_fraction(D)
    _require_on(curve(D), P)
    P = to_standard(P)
    if P.is_infinity:
        return MordellPoint.infinity()
    for alpha in rational_roots([1, -9 * P.x, 0, -27 * D]):
        candidate = _lift(dual_curve(D), alpha, lambda Q: phi_hat(D, Q) == P)
        if candidate is not None:
            return candidate
    return None


def _lift(c: MordellCurve, x: Fraction, accepts) -> MordellPoint|None:
    y = rational_sqrt(c.rhs(x))
    if y is None:
        return None
    for candidate in (MordellPoint(x, y), MordellPoint(x, -y)):
        if accepts(candidate):
            return candidate
    return None


def kernel_point(D: RationalLike) -> MordellPoint|None:
    """(0, sqrt(D)) on E^D when D is a square."""
    root = rational_sqrt(to_fraction(D))
    return None if root is None else MordellPoint(0, root)


def dual_kernel_point(D: RationalLike) -> MordellPoint|None:
    """P0 = (0, sqrt(-27D)) on E^-27D when -27D is a square."""
    return kernel_point(-27 * to_fraction(D))


def torsion_class(k: RationalLike) -> TorsionInfo:
    k = to_fraction(k)
    if k == 0:
        raise DomainError('Torsion of a singular curve is undefined')
    kappa0 = k / 4
    kappa_scaled = kappa0 * kappa0.denominator**6
    factorization = factor_signed(kappa_scaled)
    kappa = factorization.sign
    for p, e in factorization.factors:
        kappa *= p ** (e % 6)

    if kappa == 1:
        structure = TorsionStructure.Z6
    elif rational_sqrt(kappa) is not None or kappa == -432:
        structure = TorsionStructure.Z3
    elif rational_cube_root(kappa) is not None:
        structure = TorsionStructure.Z2
    else:
        structure = TorsionStructure.TRIVIAL
    return TorsionInfo(structure, int(kappa))


def naive_search(c: MordellCurve, bound: int) -> List[MordellPoint]:
    """Points with x = u/v^2, |u| <= bound, 1 <= v <= 8, one per +-y pair (y >= 0)."""
    if bound < 1:
        raise DomainError('Search bound must be positive')
    found = set()
    for v in range(1, NAIVE_SEARCH_MAX_DENOMINATOR + 1):
        for u in range(-bound, bound + 1):
            x = Fraction(u, v * v)
            rhs = c.rhs(x)
            if rhs < 0:
                continue
            y = rational_sqrt(rhs)
            if y is not None:
                found.add((x, y))
    points = [MordellPoint(x, y, c.model) for x, y in sorted(found)]
    Logger.get_instance().debug(f'Naive search on {c} up to {bound}: {len(points)} points')
    return points

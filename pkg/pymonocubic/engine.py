# -----------------------------------------------------------------------------
# F3 linear algebra over lambda vectors, quasi-monogenic field enumeration,
# counting bounds, and the independent enumeration through point sums
# -----------------------------------------------------------------------------
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import GF
from sympy.polys.matrices import DomainMatrix

from pymonocubic.cocycle import (AnalysisContext, DedekindType, FieldDescriptor, LambdaVector, classify_field,
                                 field_of_point, lambda_vector, trivially_monogenic)
from pymonocubic.core.errors import DomainError
from pymonocubic.core.logger import Logger
from pymonocubic.exactmath import residue_mod9
from pymonocubic.mordell import (MordellPoint, add, dual_curve, dual_kernel_point, on_curve, scalar_mul, to_standard,
                                 torsion_class)

F3 = GF(3)


@dataclass(frozen=True)
class F3Matrix:
    rows: Tuple[LambdaVector, ...]
    support: Tuple[int, ...]

    @property
    def dims(self) -> Tuple[int, int]:
        return len(self.rows), len(self.support)

    def as_lists(self) -> List[List[int]]:
        return [list(row.entries) for row in self.rows]

    def nonzero_rows(self) -> Tuple[LambdaVector, ...]:
        return tuple(row for row in self.rows if not row.is_zero)


@dataclass(frozen=True)
class GeneratorSet:
    D: int
    points: Tuple[MordellPoint, ...]
    claimed_rank: Optional[int] = None
    includes_dual_kernel: bool = False
    source: str = ''

    @classmethod
    def build(cls, D: int, points: Iterable[MordellPoint], claimed_rank: int|None = None,
              source: str = '') -> GeneratorSet:
        dual = dual_curve(D)
        standard = []
        for P in points:
            if not on_curve(dual, P):
                raise DomainError(f'Generator ({P}) is not on E^{-27 * D}')
            standard.append(to_standard(P))

        p0 = dual_kernel_point(D)
        if p0 is not None:
            standard = [P for P in standard if P != p0 and P != -p0]
            standard.insert(0, p0)
        return cls(D, tuple(standard), claimed_rank, p0 is not None, source)

    @property
    def free_points(self) -> Tuple[MordellPoint, ...]:
        return self.points[1:] if self.includes_dual_kernel else self.points

    @property
    def rank(self) -> int:
        return self.claimed_rank if self.claimed_rank is not None else len(self.free_points)


@dataclass(frozen=True)
class BoundRecord:
    rank: int
    delta: int
    c: int
    N: int
    algebra_count: int
    field_bound: int
    rank_field_bound: int


@dataclass(frozen=True)
class QuasiMonogenicReport:
    ctx: AnalysisContext
    rho: int
    fields: Tuple[FieldDescriptor, ...]
    bounds: Tuple[BoundRecord, ...]
    matrix: F3Matrix
    echelon: F3Matrix
    rank_input: Optional[int] = None

    @property
    def field_bound(self) -> int:
        return self.bounds[0].field_bound if self.bounds else _field_bound(self.rho, self.ctx.dedekind_type)

    @property
    def field_values(self) -> List[int]:
        return [f.m for f in self.fields]


def build_matrix(gens: GeneratorSet, ctx: AnalysisContext) -> F3Matrix:
    if gens.D != ctx.D:
        raise DomainError(f'Generators for D={gens.D} used with context D={ctx.D}')
    rows = tuple(lambda_vector(P, ctx) for P in gens.points)
    Logger.get_instance().debug(f'lambda matrix: {[str(r) for r in rows]} over {list(ctx.prime_support)}')
    return F3Matrix(rows, ctx.prime_support)


def rref3(M: F3Matrix) -> Tuple[F3Matrix, int]:
    n_rows, n_cols = M.dims
    if n_rows == 0 or n_cols == 0:
        return M, 0
    dm = DomainMatrix([[F3(e) for e in row.entries] for row in M.rows], (n_rows, n_cols), F3)
    echelon, pivots = dm.rref()
    rows = tuple(LambdaVector(tuple(int(e) % 3 for e in row), M.support) for row in echelon.to_Matrix().tolist())
    return F3Matrix(rows, M.support), len(pivots)


def row_space(M: F3Matrix) -> List[LambdaVector]:
    """All 3^rho vectors of the row space of M."""
    echelon, rho = rref3(M)
    basis = echelon.nonzero_rows()
    result = []
    for coeffs in itertools.product(range(3), repeat=rho):
        vector = LambdaVector.zero(M.support)
        for t, row in zip(coeffs, basis):
            vector = vector + row.scale(t)
        result.append(vector)
    return result


def _admissible(vector: LambdaVector, dedekind_type: DedekindType) -> bool:
    if dedekind_type is DedekindType.II:
        if vector.entries[0] != 0 or not all(vector.entries[1:]):
            return False
        return residue_mod9(vector.value()).is_unit_class
    if not all(vector.entries):
        return False
    value = vector.value()
    return value % 3 == 0 or not residue_mod9(value).is_unit_class


def _mark_trivial(descriptors: Iterable[FieldDescriptor], ctx: AnalysisContext) -> Tuple[FieldDescriptor, ...]:
    trivial = trivially_monogenic(ctx)
    by_m: Dict[int, FieldDescriptor] = {}
    for d in descriptors:
        if trivial is not None and d.m == trivial.m:
            d = d.flagged_trivial()
        by_m[d.m] = d
    return tuple(by_m[m] for m in sorted(by_m))


def enumerate_quasimonogenic(M: F3Matrix, ctx: AnalysisContext, rank: int|None = None,
                             kernel_orders: Sequence[int] = (1, 3)) -> QuasiMonogenicReport:
    echelon, rho = rref3(M)
    seen = set()
    descriptors = []
    for vector in row_space(M):
        if vector.is_zero:
            continue
        vector = vector.canonical()
        if vector in seen or not _admissible(vector, ctx.dedekind_type):
            continue
        seen.add(vector)
        descriptor = classify_field(vector.cube_free_class().m)
        if descriptor.disc == ctx.D:
            descriptors.append(descriptor)

    fields = _mark_trivial(descriptors, ctx)
    effective_rank = rank if rank is not None else max(rho - 1, 0)
    delta = torsion_class(ctx.D).delta
    records = tuple(bounds(effective_rank, delta, c, rho, ctx.dedekind_type) for c in kernel_orders)
    Logger.get_instance().debug(f'D={ctx.D}: rho={rho}, fields {[f.m for f in fields]}')
    return QuasiMonogenicReport(ctx, rho, fields, records, M, echelon, rank)


def _field_bound(rho: int, dedekind_type: DedekindType) -> int:
    exponent = rho - 1 if dedekind_type is DedekindType.I else rho - 2
    return 2**exponent if exponent >= 0 else 0


def bounds(rank: int, delta: int, c: int, rho: int, dedekind_type: DedekindType) -> BoundRecord:
    if rank < 0 or rho < 0 or delta not in (0, 1) or c not in (1, 3):
        raise DomainError(f'Bound arguments out of range: rank={rank}, delta={delta}, c={c}, rho={rho}')
    N = 3 ** (rank + delta)
    rank_exponent = rank if dedekind_type is DedekindType.I else rank - 1
    return BoundRecord(
        rank=rank,
        delta=delta,
        c=c,
        N=N,
        algebra_count=(c * N - 1) // 2,
        field_bound=_field_bound(rho, dedekind_type),
        rank_field_bound=2**rank_exponent if rank_exponent >= 0 else 0,
    )


def point_combinations(gens: GeneratorSet) -> Iterable[Tuple[Tuple[int, ...], MordellPoint]]:
    """All sums a_0 P_0 + ... + a_r P_r with a_i in {0, 1, 2}."""
    c = dual_curve(gens.D)
    multiples = [(MordellPoint.infinity(), P, scalar_mul(c, 2, P)) for P in gens.points]
    for coeffs in itertools.product(range(3), repeat=len(gens.points)):
        total = MordellPoint.infinity()
        for a, table in zip(coeffs, multiples):
            if a:
                total = add(c, total, table[a])
        yield coeffs, total


def enumerate_by_points(gens: GeneratorSet, ctx: AnalysisContext) -> Tuple[FieldDescriptor, ...]:
    if gens.D != ctx.D:
        raise DomainError(f'Generators for D={gens.D} used with context D={ctx.D}')
    descriptors = []
    for _, P in point_combinations(gens):
        if P.is_infinity:
            continue
        descriptor = field_of_point(P, ctx)
        if descriptor is not None and descriptor.disc == ctx.D:
            descriptors.append(descriptor)
    fields = _mark_trivial(descriptors, ctx)
    Logger.get_instance().debug(f'D={ctx.D}: point route fields {[f.m for f in fields]}')
    return fields


def select_independent(points: Iterable[MordellPoint], ctx: AnalysisContext) -> List[MordellPoint]:
    """Greedy subset whose lambda rows are F3-independent."""
    kept: List[MordellPoint] = []
    rows: List[LambdaVector] = []
    rho = 0
    for P in points:
        row = lambda_vector(P, ctx)
        if row.is_zero:
            continue
        _, new_rho = rref3(F3Matrix(tuple(rows + [row]), ctx.prime_support))
        if new_rho > rho:
            kept.append(P)
            rows.append(row)
            rho = new_rho
    return kept

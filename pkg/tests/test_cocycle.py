import random
from fractions import Fraction

import pytest

from pymonocubic.cocycle import (AnalysisContext, DedekindType, LambdaVector, classify_field, field_of_point,
                                 lambda_vector, point_class, primitive_ratio, trivially_monogenic)
from pymonocubic.core.errors import DomainError, DualKernelPoint, SupportViolation
from pymonocubic.exactmath import cube_free_class
from pymonocubic.mordell import Model, MordellPoint, add, curve, dual_curve, naive_search, phi, scalar_mul


def test_context_of_type_one(ctx90):
    assert ctx90.D == -24300
    assert ctx90.dedekind_type is DedekindType.I
    assert ctx90.prime_support == (2, 3, 5)
    assert ctx90.n_prime == 30
    assert ctx90.dual_curve_k == 656100


def test_context_of_type_two(ctx10):
    assert ctx10.D == -300
    assert ctx10.dedekind_type is DedekindType.II
    assert ctx10.prime_support == (3, 2, 5)
    assert ctx10.n_prime is None


def test_context_from_discriminant():
    assert AnalysisContext.from_discriminant(-300) == AnalysisContext.from_n(10)
    assert AnalysisContext.from_discriminant(-24300).n == 90


@pytest.mark.parametrize('D', [-301, 300, -6, 0])
def test_context_rejects_other_discriminants(D):
    with pytest.raises(DomainError):
        AnalysisContext.from_discriminant(D)


def test_context_rejects_non_positive_n():
    with pytest.raises(DomainError):
        AnalysisContext.from_n(0)


def test_lambda_vector_arithmetic():
    support = (2, 3, 5)
    v = LambdaVector((1, 2, 0), support)
    w = LambdaVector((0, 0, 1), support)
    assert (v + w).entries == (1, 2, 1)
    assert (-v).entries == (2, 1, 0)
    assert v.scale(2) == -v
    assert (-v).canonical() == v
    assert (v + -v).is_zero
    assert LambdaVector((4, -1, 3), support).entries == (1, 2, 0)
    assert v.value() == 18
    assert v.cube_free_class().m == 18
    assert str(v) == '(1,2,0)'


def test_lambda_vector_rejects_mixed_supports():
    with pytest.raises(DomainError):
        LambdaVector((1, 0), (2, 3)) + LambdaVector((1, 0), (3, 2))
    with pytest.raises(DomainError):
        LambdaVector((1,), (2, 3))


def test_lambda_vector_from_class_outside_support():
    with pytest.raises(SupportViolation) as info:
        LambdaVector.from_class(cube_free_class(14), (2, 3, 5))
    assert info.value.prime == 7


@pytest.mark.parametrize('m, canonical, h, k, dedekind_type, disc', [
    (900, 30, 30, 1, DedekindType.I, -24300),
    (30, 30, 30, 1, DedekindType.I, -24300),
    (450, 60, 15, 2, DedekindType.I, -24300),
    (300, 90, 10, 3, DedekindType.I, -24300),
    (150, 150, 6, 5, DedekindType.I, -24300),
    (10, 10, 10, 1, DedekindType.II, -300),
    (100, 10, 10, 1, DedekindType.II, -300),
    (2, 2, 2, 1, DedekindType.I, -108),
])
def test_classify_field(m, canonical, h, k, dedekind_type, disc):
    d = classify_field(m)
    assert (d.m, d.h, d.k, d.dedekind_type, d.disc) == (canonical, h, k, dedekind_type, disc)
    assert not d.trivially_monogenic


@pytest.mark.parametrize('m', [1, 0, 16])
def test_classify_field_domain(m):
    with pytest.raises(DomainError):
        classify_field(m)


def test_quadratic_example_point(ctx10):
    P = MordellPoint(-9, 72)
    assert primitive_ratio(P, ctx10) == Fraction(-1, 9)
    assert point_class(P, ctx10).m == 3
    descriptor = field_of_point(P, ctx10)
    assert descriptor.m == 3
    assert descriptor.disc == -243
    assert lambda_vector(P, ctx10).entries == (1, 0, 0)


def test_dual_kernel_point_rows(ctx10, ctx90):
    assert lambda_vector(MordellPoint(0, 90), ctx10).entries == (1, 2, 2)
    assert lambda_vector(MordellPoint(0, 810), ctx90).entries == (1, 1, 1)
    assert field_of_point(MordellPoint(0, 810), ctx90).m == 30


def test_primitive_ratio_on_negative_kernel_point(ctx10):
    with pytest.raises(DualKernelPoint):
        primitive_ratio(MordellPoint(0, -90), ctx10)
    # the class itself is still defined through D
    assert point_class(MordellPoint(0, -90), ctx10).m == 300


def test_generator_rows_of_cubic_example(ctx90):
    assert lambda_vector(MordellPoint(-54, 81, Model.X3Q), ctx90).entries == (1, 2, 0)
    assert lambda_vector(MordellPoint(-45, 540), ctx90).entries == (0, 0, 1)


def test_points_off_the_dual_curve(ctx10):
    with pytest.raises(DomainError):
        lambda_vector(MordellPoint(1, 1), ctx10)
    with pytest.raises(DomainError):
        point_class(MordellPoint.infinity(), ctx10)


def test_images_of_phi_have_trivial_class():
    for n in range(1, 201, 7):
        ctx = AnalysisContext.from_n(n)
        for Q in naive_search(curve(ctx.D), 15):
            image = phi(ctx.D, Q)
            if image.is_infinity:
                continue
            assert lambda_vector(image, ctx).is_zero
            assert field_of_point(image, ctx) is None


def test_lambda_rows_stay_in_the_support():
    checked = 0
    for n in range(1, 201):
        ctx = AnalysisContext.from_n(n)
        for P in naive_search(dual_curve(ctx.D), 12):
            row = lambda_vector(P, ctx)
            assert row.support == ctx.prime_support
            checked += 1
    assert checked >= 200


def test_lambda_is_a_homomorphism_up_to_sign(gens90, ctx90):
    c = dual_curve(ctx90.D)
    points = [scalar_mul(c, t, P) for P in gens90.points for t in (1, 2)]
    for P in points:
        for Q in points:
            total = add(c, P, Q)
            if total.is_infinity:
                continue
            lp, lq = lambda_vector(P, ctx90), lambda_vector(Q, ctx90)
            allowed = {(lp + lq).canonical(), (lp + -lq).canonical()}
            assert lambda_vector(total, ctx90) in allowed


def _sampled_pairs(rnd: random.Random, per_context: int):
    for n in range(1, 201, 3):
        ctx = AnalysisContext.from_n(n)
        c = dual_curve(ctx.D)
        points = naive_search(c, 30)
        pool = points + [-P for P in points]
        for _ in range(per_context):
            yield ctx, c, rnd.choice(pool), rnd.choice(pool)


@pytest.mark.parametrize('seed', [5, 17])
def test_lambda_of_a_sum_on_searched_points(seed):
    checked = 0
    for ctx, c, P, Q in _sampled_pairs(random.Random(seed), 6):
        total = add(c, P, Q)
        if total.is_infinity:
            continue
        lp, lq = lambda_vector(P, ctx), lambda_vector(Q, ctx)
        allowed = {(lp + lq).canonical(), (lp + -lq).canonical()}
        assert lambda_vector(total, ctx) in allowed, f'n={ctx.n}: ({P}) + ({Q})'
        checked += 1
    assert checked >= 100


def test_field_of_point_ignores_the_sign():
    for ctx, c, P, Q in _sampled_pairs(random.Random(23), 2):
        for R in (P, add(c, P, Q)):
            if not R.is_infinity:
                assert field_of_point(-R, ctx) == field_of_point(R, ctx)
                assert lambda_vector(-R, ctx) == lambda_vector(R, ctx)


def test_trivially_monogenic_field(ctx10, ctx90):
    d = trivially_monogenic(ctx90)
    assert d.m == 30
    assert d.trivially_monogenic
    assert trivially_monogenic(ctx10) is None
    # n' = 10 is 1 mod 9
    assert trivially_monogenic(AnalysisContext.from_n(30)) is None
    assert trivially_monogenic(AnalysisContext.from_n(3)) is None

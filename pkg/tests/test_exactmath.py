import random
from fractions import Fraction

import pytest
from sympy import Rational

from pymonocubic.core.errors import DomainError
from pymonocubic.exactmath import (Residue9, cube_free_class, factor_signed, is_cube_free, is_squarefree, product,
                                   rational_cube_root, rational_roots, rational_sqrt, residue_mod9, to_fraction,
                                   valuation)


def test_factor_signed_negative_integer():
    f = factor_signed(-24300)
    assert f.sign == -1
    assert f.factors == ((2, 2), (3, 5), (5, 2))
    assert f.exponent(3) == 5
    assert f.exponent(7) == 0
    assert f.primes == [2, 3, 5]


def test_factor_signed_fraction_has_negative_exponents():
    f = factor_signed(Fraction(-3, 4))
    assert f.sign == -1
    assert f.as_dict() == {2: -2, 3: 1}


def test_factor_signed_rejects_zero():
    with pytest.raises(DomainError):
        factor_signed(0)


def test_factor_signed_reconstructs_random_rationals():
    rnd = random.Random(20240117)
    for _ in range(200):
        num = rnd.randint(-10**9, 10**9) or 1
        q = Fraction(num, rnd.randint(1, 10**6))
        assert factor_signed(q).reconstruct() == q


def test_cube_free_class_of_discriminant():
    c = cube_free_class(-24300)
    assert (c.m, c.h, c.k) == (900, 1, 30)
    assert c.conjugate == 30
    assert c.canonical == 30
    assert c.exponents() == {2: 2, 3: 2, 5: 2}


def test_cube_free_class_of_fraction():
    assert cube_free_class(Fraction(-1, 9)).m == 3
    assert cube_free_class(Fraction(-2, 3)).m == 18


def test_cube_free_class_of_cube_is_trivial():
    assert cube_free_class(-8).is_trivial
    assert cube_free_class(Fraction(27, 125)).is_trivial


def test_cube_free_class_ignores_cube_factors():
    rnd = random.Random(7)
    for _ in range(150):
        q = Fraction(rnd.randint(1, 5000), rnd.randint(1, 500))
        r = Fraction(rnd.randint(1, 40), rnd.randint(1, 40))
        assert cube_free_class(q * r**3) == cube_free_class(q)


def test_valuation():
    assert valuation(Fraction(50, 9), 3) == -2
    assert valuation(50, 5) == 2
    assert valuation(-7, 2) == 0


@pytest.mark.parametrize('q, p, expected', [
    (Fraction(7**40 * 11, 2**33), 7, 40),
    (Fraction(7**40 * 11, 2**33), 2, -33),
    (-3**100, 3, 100),
    (Fraction(1, 5**64), 5, -64),
])
def test_valuation_of_large_powers(q, p, expected):
    assert valuation(q, p) == expected


@pytest.mark.parametrize('q, p', [(10, 4), (0, 3)])
def test_valuation_domain(q, p):
    with pytest.raises(DomainError):
        valuation(q, p)


@pytest.mark.parametrize('m, expected', [
    (10, Residue9.PLUS_ONE),
    (17, Residue9.MINUS_ONE),
    (-1, Residue9.MINUS_ONE),
    (2, Residue9.OTHER),
    (-17, Residue9.PLUS_ONE),
])
def test_residue_mod9(m, expected):
    assert residue_mod9(m) is expected


def test_residue_mod9_rejects_multiples_of_three():
    with pytest.raises(DomainError):
        residue_mod9(30)


def test_cube_free_and_squarefree():
    assert is_cube_free(12)
    assert not is_cube_free(24)
    assert not is_cube_free(0)
    assert is_squarefree(30)
    assert not is_squarefree(12)


def test_rational_roots_of_radicals():
    assert rational_cube_root(Fraction(-8, 27)) == Fraction(-2, 3)
    assert rational_cube_root(2) is None
    assert rational_sqrt(Fraction(9, 16)) == Fraction(3, 4)
    assert rational_sqrt(-4) is None


@pytest.mark.parametrize('coeffs, expected', [
    ([1, 0, 0, -8], [2]),
    ([2, -3, 1], [Fraction(1, 2), 1]),
    ([0, 1, -5], [5]),
    ([1, 0, 1], []),
    ([1, 2, 0, -3], [1]),
    ([7], []),
])
def test_rational_roots(coeffs, expected):
    assert rational_roots(coeffs) == expected


def test_conversions():
    assert to_fraction(Rational(3, 7)) == Fraction(3, 7)
    assert to_fraction('5/4') == Fraction(5, 4)
    assert product([2, 3, 5]) == 30
    assert product([]) == 1

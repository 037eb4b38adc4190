#!/usr/bin/env python3
"""
Тесты точной арифметики: числа Бернулли, ζ(2n), биномиальные коэффициенты, PiRational
"""

import os
import sys
from fractions import Fraction
from math import comb

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import DomainError, PiPowerMismatchError
from exact_arith import PiRational, bernoulli, gen_binomial, rising_factorial, zeta_even


def test_bernoulli_values():
    """Первые числа Бернулли."""
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_recurrence():
    """sum_{k=0}^{m} C(m+1,k) B_k = 0 при 1 <= m <= 60."""
    for m in range(1, 61):
        assert sum(comb(m + 1, k) * bernoulli(k) for k in range(m + 1)) == 0, m


def test_bernoulli_negative_index():
    try:
        bernoulli(-1)
    except DomainError:
        return
    raise AssertionError("bernoulli(-1) должен отклоняться")


def test_zeta_even_small():
    assert zeta_even(0) == PiRational(Fraction(-1, 2), 0)
    assert zeta_even(2) == PiRational(Fraction(1, 6), 2)
    assert zeta_even(4) == PiRational(Fraction(1, 90), 4)
    assert zeta_even(8) == PiRational(Fraction(1, 9450), 8)


def test_zeta_even_positive():
    """ζ(m) > 0 и степень π равна m для четных m от 2 до 40."""
    for m in range(2, 41, 2):
        z = zeta_even(m)
        assert z.coeff > 0, m
        assert z.pi_power == m


def test_zeta_even_rejects_odd():
    for m in (1, 3, 7, -2):
        try:
            zeta_even(m)
        except DomainError:
            continue
        raise AssertionError(f"zeta_even({m}) должен отклоняться")


def test_gen_binomial_examples():
    assert gen_binomial(0, 3) == 0
    assert gen_binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert gen_binomial(5, 2) == 10
    assert gen_binomial(Fraction(-1, 2), 0) == 1


def test_gen_binomial_pascal():
    """C(a,d) = C(a-1,d) + C(a-1,d-1) для рационального a."""
    for a in (Fraction(-1, 2), Fraction(1, 4), Fraction(3, 4), Fraction(-7, 3), Fraction(22, 5)):
        for d in range(1, 13):
            assert gen_binomial(a, d) == gen_binomial(a - 1, d) + gen_binomial(a - 1, d - 1)


def test_pi_rational_homogeneity():
    """Сложение разных степеней π отклоняется."""
    a = PiRational(Fraction(1, 6), 2)
    b = PiRational(Fraction(1, 90), 4)
    try:
        a + b
    except PiPowerMismatchError:
        pass
    else:
        raise AssertionError("π^2 + π^4 должно отклоняться")
    try:
        a - b
    except PiPowerMismatchError:
        return
    raise AssertionError("π^2 - π^4 должно отклоняться")


def test_pi_rational_arithmetic():
    a = PiRational(Fraction(1, 6), 2)
    assert a * a == PiRational(Fraction(1, 36), 4)
    assert (a * 3).coeff == Fraction(1, 2)
    assert (2 * a).pi_power == 2
    assert (a / 2).coeff == Fraction(1, 12)
    assert (a - a).is_zero()
    assert -a == PiRational(Fraction(-1, 6), 2)
    assert str(a) == "1/6 · π^2"


def test_pi_rational_negative_power():
    try:
        PiRational(Fraction(1), -2)
    except DomainError:
        return
    raise AssertionError("Отрицательная степень π должна отклоняться")


def test_rising_factorial():
    assert rising_factorial(2, 3) == 24
    assert rising_factorial(5, 0) == 1
    assert rising_factorial(1, 5) == 120


def main():
    """Главная функция."""
    print("🚀 Тесты точной арифметики")
    print("=" * 50)
    tests = [(name, func) for name, func in globals().items() if name.startswith("test_") and callable(func)]
    failed = 0
    for name, func in tests:
        try:
            func()
            print(f"✅ {name}")
        except Exception as e:
            failed += 1
            print(f"❌ {name}: {e}")
    print("\n" + "=" * 50)
    print(f"📊 Пройдено: {len(tests) - failed}/{len(tests)}")
    return failed == 0


if __name__ == "__main__":
    sys.exit(0 if main() else 1)

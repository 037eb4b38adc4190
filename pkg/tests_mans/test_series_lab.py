#!/usr/bin/env python3
"""
Тесты усеченных рядов и таблицы Q(4n,d)/π^{4n}
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import DomainError
from exact_arith import PiRational, zeta_even
from series_lab import (
    TruncatedSeries,
    expand_quarter_powers_in_v,
    g_series,
    q_rational_table,
    shifted_g_table,
    verify_division_roundtrip,
    verify_f_product,
    zeta_four_power,
)

# Одна таблица на весь модуль
TABLE = q_rational_table(12, 12)


def test_g_series_coefficients():
    assert g_series(0).coeffs == (Fraction(1, 2),)
    assert g_series(1).coeffs == (Fraction(1, 2), Fraction(-1, 180))
    assert g_series(2)[2] == Fraction(1, 226800)


def test_f_product():
    """sin x · sinh x / (2x²) = g(x⁴)."""
    assert verify_f_product(0)
    assert verify_f_product(5)
    assert verify_f_product(20)


def test_truncation_semantics():
    """Результат операции усечен до минимального порядка."""
    a = TruncatedSeries.from_coeffs([1, 2, 3, 4])
    b = TruncatedSeries.from_coeffs([1, 1])
    assert (a + b).order == 1
    assert (a * b).coeffs == (Fraction(1), Fraction(3))
    assert (a / b).order == 1
    try:
        b[2]
    except IndexError:
        pass
    else:
        raise AssertionError("Коэффициент за порядком усечения неизвестен")


def test_inverse_and_derivative():
    one_minus_t = TruncatedSeries.from_coeffs([1, -1, 0, 0, 0])
    geometric = one_minus_t.inverse()
    assert geometric.coeffs == (Fraction(1),) * 5
    assert geometric.derivative().coeffs == (1, 2, 3, 4)
    assert (geometric * one_minus_t).coeffs == (1, 0, 0, 0, 0)
    try:
        TruncatedSeries.from_coeffs([0, 1]).inverse()
    except DomainError:
        return
    raise AssertionError("Обращение ряда без свободного члена должно отклоняться")


def test_table_known_entries():
    assert TABLE[0][0] == 1
    assert TABLE[1][1] == Fraction(1, 90)
    assert TABLE[2][1] == Fraction(1, 9450)
    assert TABLE[2][2] == Fraction(1, 113400)
    assert TABLE[3][3] == Fraction(1, 681080400)


def test_table_zero_pattern():
    """c[n][0] = 0 при n >= 1 и c[n][d] = 0 при d > n."""
    for n in range(1, 13):
        assert TABLE[n][0] == 0
        for d in range(n + 1, 13):
            assert TABLE[n][d] == 0, (n, d)


def test_table_depth_one_is_zeta():
    """c[n][1] = ζ(4n)/π^{4n}."""
    for n in range(1, 13):
        assert TABLE[n][1] == zeta_even(4 * n).coeff


def test_table_diagonal():
    """c[d][d]·π^{4d} = ζ(4,...,4)."""
    for d in range(13):
        assert TABLE.to_pi_rational(d, d) == zeta_four_power(d)


def test_table_at_t_zero():
    """G_0(s) = 1."""
    g0 = TABLE.at_t_zero()
    assert g0[0] == 1
    assert all(c == 0 for c in g0.coeffs[1:])


def test_zeta_four_power():
    assert zeta_four_power(0) == PiRational(Fraction(1), 0)
    assert zeta_four_power(1) == PiRational(Fraction(1, 90), 4)
    assert zeta_four_power(2) == PiRational(Fraction(1, 113400), 8)


def test_division_roundtrip():
    report = verify_division_roundtrip(10)
    assert report.passed
    assert report.residual == "0"


def test_shifted_table_row():
    """Строка s^n в g(s(1-t)) равна g_n (1-t)^n."""
    shifted = shifted_g_table(3, 4)
    g3 = g_series(3)[3]
    assert shifted[3].coeffs == (g3, -3 * g3, 3 * g3, -g3, 0)


def test_table_rejects_empty():
    try:
        q_rational_table(0, 3)
    except DomainError:
        return
    raise AssertionError("Таблица с max_n = 0 должна отклоняться")


def test_quarter_power_expansion():
    """(1-v)^{-1/2} = 1 + v/2 + 3v²/8 + 5v³/16 + ..."""
    series = expand_quarter_powers_in_v([(-2, Fraction(1))], 3)
    assert series.coeffs == (1, Fraction(1, 2), Fraction(3, 8), Fraction(5, 16))
    assert expand_quarter_powers_in_v([(4, Fraction(1))], 2).coeffs == (1, -1, 0)


def main():
    """Главная функция."""
    print("🚀 Тесты рядов")
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

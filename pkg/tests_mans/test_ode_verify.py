#!/usr/bin/env python3
"""
Тесты символьной проверки дифференциальных систем и разложения G_d
"""

import os
import sys
from fractions import Fraction
from math import comb

import mpmath

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import DomainError
from ode_verify import (
    QuarterPowerPoly,
    closed_form_capital,
    closed_form_xyzw,
    ddv,
    gd_report,
    tilde_closed_form,
    verify_gd_decomposition,
    verify_tilde_system,
    verify_u_system,
    verify_w0_binomial,
)


def poly(mapping, base="1-v"):
    return QuarterPowerPoly.from_mapping(mapping, base)


def test_no_zero_terms():
    p = poly({0: 1, 4: 0, -2: Fraction(1, 2)})
    assert p.as_dict() == {-2: Fraction(1, 2), 0: 1}
    assert (p - p).is_zero()


def test_ddv_examples():
    assert ddv(poly({0: 1})).is_zero()
    assert ddv(poly({4: 1})).as_dict() == {0: -1}
    assert ddv(poly({-2: 1})).as_dict() == {-6: Fraction(1, 2)}


def test_ddv_wrong_base():
    try:
        ddv(poly({4: 1}, base="u"))
    except DomainError:
        return
    raise AssertionError("ddv для базы u должна отклоняться")


def test_mixed_bases_rejected():
    try:
        poly({0: 1}) + poly({0: 1}, base="s")
    except DomainError:
        return
    raise AssertionError("Сложение разных баз должно отклоняться")


def test_tilde_closed_form_examples():
    assert tilde_closed_form(0, "w").as_dict() == {-2: 1}
    assert tilde_closed_form(0, "z").is_zero()
    assert tilde_closed_form(1, "x").as_dict() == {
        -2: Fraction(-1, 3), -1: Fraction(1), 0: Fraction(-1), 1: Fraction(1, 3),
    }


def test_tilde_parity():
    """z̃_n = 0 при четном n, w̃_n = 0 при нечетном."""
    for n in range(11):
        if n % 2 == 0:
            assert tilde_closed_form(n, "z").is_zero(), n
            assert not tilde_closed_form(n, "w").is_zero(), n
        else:
            assert tilde_closed_form(n, "w").is_zero(), n
            assert not tilde_closed_form(n, "z").is_zero(), n


def test_tilde_system_small():
    reports = verify_tilde_system(1)
    assert len(reports) == 4
    assert all(r.passed for r in reports)


def test_tilde_system_full():
    reports = verify_tilde_system(10)
    assert len(reports) == 40
    failed = [r.line() for r in reports if not r.passed]
    assert not failed, failed


def test_tilde_system_negative_control():
    def perturbed(n, which):
        p = tilde_closed_form(n, which)
        return p * 2 if (n, which) == (1, "x") else p

    reports = verify_tilde_system(2, family=perturbed)
    failed = [r for r in reports if not r.passed]
    assert failed
    assert all(r.mode == "exact" for r in reports)


def test_closed_form_initial_conditions():
    assert closed_form_xyzw(0, "w").as_dict() == {0: 1}
    for which in ("x", "y", "z"):
        assert closed_form_xyzw(0, which).is_zero()


def test_closed_form_degrees():
    """Степени по u не превышают границ сумм."""
    for d in range(1, 11):
        for which, bound in (("x", (d - 1) // 2), ("y", (d - 1) // 2),
                             ("z", 2 * ((d - 2) // 4) + 1), ("w", 2 * (d // 4))):
            top = closed_form_xyzw(d, which).max_exponent()
            if top is not None:
                assert top <= 4 * bound, (d, which)


def test_capital_is_halved():
    """X_d(s) = x_d(√s): u^n -> s^{n/2}."""
    for d in range(6):
        lower = closed_form_xyzw(d, "z").as_dict()
        upper = closed_form_capital(d, "z").as_dict()
        assert upper == {e // 2: c for e, c in lower.items()}
        assert closed_form_capital(d, "z").base == "s"


def test_u_system_small():
    reports = verify_u_system(1)
    assert len(reports) == 4
    assert all(r.passed for r in reports)


def test_u_system_full():
    reports = verify_u_system(10)
    assert len(reports) == 40
    failed = [r.line() for r in reports if not r.passed]
    assert not failed, failed


def test_u_system_negative_control():
    """w_0 = 2 вместо 1 ломает рекурсию."""
    def perturbed(d, which):
        if (d, which) == (0, "w"):
            return poly({0: 2}, base="u")
        return closed_form_xyzw(d, which)

    reports = verify_u_system(1, family=perturbed)
    assert not all(r.passed for r in reports)


def test_w0_binomial():
    reports = verify_w0_binomial(30)
    assert len(reports) == 31
    assert all(r.passed for r in reports)
    for d in range(31):
        assert closed_form_xyzw(d, "w").as_dict()[0] == Fraction(comb(2 * d, d), 4 ** d)


def test_gd_decomposition():
    assert verify_gd_decomposition(0, 1, 40) < mpmath.mpf("1e-30")
    assert verify_gd_decomposition(1, Fraction(1, 2), 40) < mpmath.mpf("1e-30")
    assert verify_gd_decomposition(4, 2, 40) < mpmath.mpf("1e-25")


def test_gd_report_samples():
    for d in range(5):
        for s in (Fraction(1, 2), Fraction(1), Fraction(2)):
            report = gd_report(d, s, 40)
            assert report.passed, report.line()


def test_gd_out_of_range():
    for s in (0, -1, 200):
        try:
            verify_gd_decomposition(1, s, 40)
        except DomainError:
            continue
        raise AssertionError(f"s = {s} вне (0, π⁴) должно отклоняться")


def main():
    """Главная функция."""
    print("🚀 Тесты дифференциальных систем")
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

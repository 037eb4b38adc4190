"""
Точные формулы для Q(4n,d) и проверки тождеств для двойных и кратных дзета-значений
"""

import logging
from fractions import Fraction
from math import comb, factorial
from typing import List, Optional

from errors import DomainError, HomogeneityError
from exact_arith import PiRational, gen_binomial, zeta_even
from mzv_numeric import ApproxReal, PrecisionConfig, mzv_eval, pi_value, q_bruteforce
from reports import VerificationReport
from series_lab import BivariateSeries, q_rational_table, zeta_four_power
from settings import get_settings

# Настройка логирования
logger = logging.getLogger(__name__)

__all__ = [
    "VerificationReport",
    "q_depth2",
    "q_theorem",
    "euler_alternating",
    "euler_full",
    "gkz_even",
    "euler_product",
    "alternating_even_sum",
    "theorem_vs_series",
    "theorem_vs_bruteforce",
    "diagonal_closed_form",
    "depth2_vs_series",
]


def q_depth2(n: int) -> PiRational:
    """
    Q(4n,2) = (1/2)·sum_{k=1}^{n-1} ζ(4k)ζ(4n-4k) - ((n-1)/2)·ζ(4n).

    Q(4,2) = 0: у n = 1 нет композиций из двух положительных частей.
    """
    if n < 1:
        raise DomainError(f"q_depth2 requires n ≥ 1, получено n={n}")
    if n == 1:
        return PiRational.zero(4)
    acc = PiRational.zero(4 * n)
    for k in range(1, n):
        acc = acc + zeta_even(4 * k) * zeta_even(4 * n - 4 * k)
    return acc / 2 - zeta_even(4 * n) * Fraction(n - 1, 2)


def _homogeneous(term: PiRational, pi_power: int) -> PiRational:
    if term.pi_power != pi_power:
        raise HomogeneityError(f"Член формулы имеет степень π^{term.pi_power} вместо π^{pi_power}")
    return term


def q_theorem(n: int, d: int) -> PiRational:
    """
    Q(4n,d) при n >= d >= 3 по замкнутой формуле: сумма с ζ(4n-2k)π^{2k}
    плюс сумма с (Q(4n-4k,2) - (7/8)ζ(4n-4k))π^{4k}.
    """
    if d < 3 or n < d:
        raise DomainError(f"theorem requires n ≥ d ≥ 3, получено n={n}, d={d}")
    top = 4 * n
    total = PiRational.zero(top)

    # 2^{k+2} = 4·2^k: две одинаковые суммы с коэффициентом 2
    for k in range((d - 1) // 2 + 1):
        inner = Fraction(0)
        for j in range(2 * k + 2):
            inner += (-1) ** (k // 2 + j + d) * comb(2 * k + 1, j) * gen_binomial(Fraction(j - 2, 4), d)
        weight = Fraction(2 ** (k + 2), factorial(2 * k + 1)) * inner
        term = zeta_even(top - 2 * k) * PiRational(weight, 2 * k)
        total = total + _homogeneous(term, top)

    # 2^{2k+5} = 4·2^{2k+1}·4
    for k in range((d - 2) // 4 + 1):
        inner = Fraction(0)
        for j in range(4 * k + 3):
            inner += (-1) ** (k + j + d) * comb(4 * k + 2, j) * gen_binomial(Fraction(j - 2, 4), d)
        weight = Fraction(2 ** (2 * k + 5), factorial(4 * k + 2)) * inner
        bracket = q_depth2(n - k) - zeta_even(top - 4 * k) * Fraction(7, 8)
        term = bracket * PiRational(weight, 4 * k)
        total = total + _homogeneous(term, top)

    logger.debug(f"Q({top},{d}) по формуле: {total}")
    return total


def _config(cfg: Optional[PrecisionConfig]) -> PrecisionConfig:
    return PrecisionConfig.from_target() if cfg is None else cfg


def _pi_rational_approx(x: PiRational, cfg: PrecisionConfig) -> ApproxReal:
    """coeff·π^p с границей ошибки, унаследованной от pi_value."""
    pi = pi_value(cfg.scaled(max(x.pi_power, 1)))
    acc = ApproxReal.exact(Fraction(1), pi.digits)
    for _ in range(x.pi_power):
        acc = acc * pi
    return acc * x.coeff


def _numeric_sum(name: str, n: int, signs, indices, rhs: PiRational,
                 cfg: Optional[PrecisionConfig]) -> VerificationReport:
    cfg = _config(cfg)
    part = cfg.scaled(len(indices) + 1)
    total = -ApproxReal.exact(rhs, part.working_digits)
    for sign, idx in zip(signs, indices):
        value = mzv_eval(idx, part)
        total = total + value if sign > 0 else total - value
    tolerance = get_settings().pass_tolerance
    report = VerificationReport.numeric(name, [n], total.value, total.err, tolerance)
    if not report.passed:
        logger.warning(f"Тождество {name} не выполнено при n={n}: невязка {report.residual}")
    return report


def euler_alternating(n: int, cfg: Optional[PrecisionConfig] = None) -> VerificationReport:
    """sum_{k=2}^{2n-1} (-1)^k ζ(k,2n-k) = (1/2)ζ(2n)."""
    if n < 2:
        raise DomainError(f"euler_alternating requires n ≥ 2, получено {n}")
    ks = range(2, 2 * n)
    return _numeric_sum("euler_alternating", n, [(-1) ** k for k in ks],
                        [(k, 2 * n - k) for k in ks], zeta_even(2 * n) / 2, cfg)


def euler_full(n: int, cfg: Optional[PrecisionConfig] = None) -> VerificationReport:
    """sum_{k=2}^{2n-1} ζ(k,2n-k) = ζ(2n)."""
    if n < 2:
        raise DomainError(f"euler_full requires n ≥ 2, получено {n}")
    ks = range(2, 2 * n)
    return _numeric_sum("euler_full", n, [1] * len(ks),
                        [(k, 2 * n - k) for k in ks], zeta_even(2 * n), cfg)


def gkz_even(n: int, cfg: Optional[PrecisionConfig] = None) -> VerificationReport:
    """sum_{k=1}^{n-1} ζ(2k,2n-2k) = (3/4)ζ(2n)."""
    if n < 2:
        raise DomainError(f"gkz_even requires n ≥ 2, получено {n}")
    ks = range(1, n)
    return _numeric_sum("gkz_even", n, [1] * len(ks),
                        [(2 * k, 2 * n - 2 * k) for k in ks], zeta_even(2 * n) * Fraction(3, 4), cfg)


def euler_product(n: int) -> VerificationReport:
    """sum_{k=1}^{n-1} ζ(2k)ζ(2n-2k) = ((2n+1)/2)ζ(2n), точно."""
    if n < 2:
        raise DomainError(f"euler_product requires n ≥ 2, получено {n}")
    lhs = PiRational.zero(2 * n)
    for k in range(1, n):
        lhs = lhs + zeta_even(2 * k) * zeta_even(2 * n - 2 * k)
    residual = lhs - zeta_even(2 * n) * Fraction(2 * n + 1, 2)
    return VerificationReport.exact("euler_product", [n], residual)


def alternating_even_sum(w: int, zeta_zero: Optional[Fraction] = None) -> VerificationReport:
    """
    sum_{m+l=2w} (-1)^m ζ(2m)ζ(2l) = 4Q(4w,2) - (7/2)ζ(4w), точно.

    zeta_zero подменяет ζ(0) в граничных членах m = 0 и l = 0.
    """
    if w < 1:
        raise DomainError(f"alternating_even_sum requires w ≥ 1, получено {w}")

    def zeta(m: int) -> PiRational:
        if m == 0 and zeta_zero is not None:
            return PiRational(zeta_zero, 0)
        return zeta_even(m)

    lhs = PiRational.zero(4 * w)
    for m in range(2 * w + 1):
        lhs = lhs + zeta(2 * m) * zeta(4 * w - 2 * m) * (-1) ** m
    rhs = q_depth2(w) * 4 - zeta_even(4 * w) * Fraction(7, 2)
    return VerificationReport.exact("alternating_even_sum", [w], lhs - rhs)


def _table_for(n: int, d: int, table: Optional[BivariateSeries]) -> BivariateSeries:
    if table is None or table.order_s < n or table.order_t < d:
        return q_rational_table(n, d)
    return table


def theorem_vs_series(n: int, d: int, table: Optional[BivariateSeries] = None) -> VerificationReport:
    """Замкнутая формула против коэффициента ряда g(s(1-t))/g(s)."""
    table = _table_for(n, d, table)
    residual = q_theorem(n, d) - table.to_pi_rational(n, d)
    return VerificationReport.exact("theorem-vs-series", [n, d], residual)


def theorem_vs_bruteforce(n: int, d: int, cfg: Optional[PrecisionConfig] = None) -> VerificationReport:
    """Замкнутая формула, вычисленная через pi_value, против прямого суммирования."""
    cfg = _config(cfg)
    part = cfg.scaled(2)
    exact = _pi_rational_approx(q_theorem(n, d), part)
    residual = exact - q_bruteforce(n, d, part)
    return VerificationReport.numeric("theorem-vs-bruteforce", [n, d], residual.value, residual.err,
                                      get_settings().pass_tolerance)


def diagonal_closed_form(d: int) -> VerificationReport:
    """Q(4d,d) = ζ(4,...,4) = 2·4^d π^{4d}/(4d+2)!."""
    residual = q_theorem(d, d) - zeta_four_power(d)
    return VerificationReport.exact("diagonal", [d], residual)


def depth2_vs_series(n: int, table: Optional[BivariateSeries] = None) -> VerificationReport:
    """Формула для Q(4n,2) против коэффициента ряда."""
    table = _table_for(n, 2, table)
    residual = q_depth2(n) - table.to_pi_rational(n, 2)
    return VerificationReport.exact("depth2-vs-series", [n], residual)


def batch(reports: List[VerificationReport]) -> List[VerificationReport]:
    """Логирование итога пачки отчетов."""
    failed = [r for r in reports if not r.passed]
    if failed:
        logger.warning(f"Провалено {len(failed)} из {len(reports)} проверок")
    else:
        logger.info(f"Все {len(reports)} проверок пройдены")
    return reports

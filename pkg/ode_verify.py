"""
Символьная проверка рекуррентных дифференциальных систем для X_d, Y_d, Z_d, W_d
и их явных решений на конечных рациональных комбинациях четвертных степеней
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import mpmath

from errors import DomainError
from exact_arith import Scalar, gen_binomial
from reports import VerificationReport
from series_lab import expand_quarter_powers_in_v, g_series
from settings import get_settings

# Настройка логирования
logger = logging.getLogger(__name__)

# Допустимые базы: (1-v), s, u
BASES = ("1-v", "s", "u")
FAMILIES = ("x", "y", "z", "w")


@dataclass(frozen=True)
class QuarterPowerPoly:
    """
    Конечная сумма c_e · base^{e/4}.

    Показатели хранятся в четвертях (целое e), нулевые коэффициенты не хранятся.
    """

    terms: Tuple[Tuple[int, Fraction], ...]
    base: str = "1-v"

    def __post_init__(self):
        if self.base not in BASES:
            raise DomainError(f"Неизвестная база: {self.base}")
        merged: Dict[int, Fraction] = {}
        for e, c in self.terms:
            merged[e] = merged.get(e, Fraction(0)) + Fraction(c)
        object.__setattr__(self, "terms", tuple(sorted((e, c) for e, c in merged.items() if c != 0)))

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, Scalar], base: str) -> "QuarterPowerPoly":
        return cls(tuple(mapping.items()), base)

    @classmethod
    def zero(cls, base: str) -> "QuarterPowerPoly":
        return cls((), base)

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _same_base(self, other: "QuarterPowerPoly") -> None:
        if self.base != other.base:
            raise DomainError(f"Разные базы: {self.base} и {other.base}")

    def __add__(self, other: "QuarterPowerPoly") -> "QuarterPowerPoly":
        self._same_base(other)
        return QuarterPowerPoly(self.terms + other.terms, self.base)

    def __sub__(self, other: "QuarterPowerPoly") -> "QuarterPowerPoly":
        return self + (-other)

    def __neg__(self) -> "QuarterPowerPoly":
        return QuarterPowerPoly(tuple((e, -c) for e, c in self.terms), self.base)

    def __mul__(self, other: Scalar) -> "QuarterPowerPoly":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return QuarterPowerPoly(tuple((e, c * other) for e, c in self.terms), self.base)

    __rmul__ = __mul__

    def mul_base(self, k: int = 1) -> "QuarterPowerPoly":
        """Умножение на base^k."""
        return QuarterPowerPoly(tuple((e + 4 * k, c) for e, c in self.terms), self.base)

    def derivative(self) -> "QuarterPowerPoly":
        """Производная по самой базе: c·b^{e/4} -> c·(e/4)·b^{(e-4)/4}."""
        return QuarterPowerPoly(tuple((e - 4, c * Fraction(e, 4)) for e, c in self.terms), self.base)

    def value_at_base_one(self) -> Fraction:
        """Подстановка base = 1 (для (1-v) это v = 0)."""
        return sum((c for _, c in self.terms), Fraction(0))

    def max_exponent(self) -> Optional[int]:
        return self.terms[-1][0] if self.terms else None

    def with_base(self, base: str, scale: Fraction = Fraction(1)) -> "QuarterPowerPoly":
        """Та же комбинация с другой базой и показателями, умноженными на scale."""
        out = []
        for e, c in self.terms:
            new_e = Fraction(e) * scale
            if new_e.denominator != 1:
                raise DomainError(f"Показатель {e}·{scale} не целый в четвертях")
            out.append((int(new_e), c))
        return QuarterPowerPoly(tuple(out), base)

    def evaluate(self, x):
        """Численное значение sum c·x^{e/4} (mpmath)."""
        x = mpmath.mpf(x)
        acc = mpmath.mpf(0)
        for e, c in self.terms:
            acc += mpmath.mpf(c.numerator) / c.denominator * mpmath.power(x, mpmath.mpf(e) / 4)
        return acc

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})·{self.base}^({e}/4)" for e, c in self.terms)


def ddv(p: QuarterPowerPoly) -> QuarterPowerPoly:
    """d/dv для многочлена по (1-v): c·(1-v)^{e/4} -> -c·(e/4)·(1-v)^{(e-4)/4}."""
    if p.base != "1-v":
        raise DomainError(f"ddv применима только к базе (1-v), получено {p.base}")
    return -p.derivative()


def _check_family(which: str) -> None:
    if which not in FAMILIES:
        raise DomainError(f"Неизвестное семейство: {which!r}, ожидается одно из {FAMILIES}")


def tilde_closed_form(n: int, which: str) -> QuarterPowerPoly:
    """
    Явные решения x̃_n, ỹ_n, z̃_n, w̃_n как комбинации (1-v)^{(j-2)/4}.

    Множители (1 ∓ (-1)^n) обнуляют z̃_n при четном n и w̃_n при нечетном.
    """
    _check_family(which)
    if n < 0:
        raise DomainError(f"Индекс n отрицателен: {n}")
    terms = []
    if which in ("x", "y"):
        shift = (n + 2) // 2 if which == "x" else (n + 3) // 2
        for j in range(2 * n + 2):
            sign = (-1) ** (shift + j)
            terms.append((j - 2, Fraction(sign * 2 ** n, factorial(j) * factorial(2 * n + 1 - j))))
    elif which == "z":
        if n % 2 == 1:
            for j in range(2 * n + 1):
                sign = (-1) ** ((n - 1) // 2 + j)
                terms.append((j - 2, Fraction(sign * 2 ** n, factorial(j) * factorial(2 * n - j))))
    else:
        if n % 2 == 0:
            for j in range(2 * n + 1):
                sign = (-1) ** (n // 2 + j)
                terms.append((j - 2, Fraction(sign * 2 ** n, factorial(j) * factorial(2 * n - j))))
    return QuarterPowerPoly(tuple(terms), "1-v")


def closed_form_xyzw(d: int, which: str) -> QuarterPowerPoly:
    """Явные многочлены x_d(u), y_d(u), z_d(u), w_d(u) (показатель e = 4n для u^n)."""
    _check_family(which)
    if d < 0:
        raise DomainError(f"Индекс d отрицателен: {d}")
    terms = []
    if which in ("x", "y"):
        for n in range((d - 1) // 2 + 1):
            shift = (n + 2) // 2 if which == "x" else (n + 3) // 2
            coeff = Fraction(0)
            for j in range(2 * n + 2):
                coeff += (-1) ** (shift + j + d) * comb(2 * n + 1, j) * gen_binomial(Fraction(j - 2, 4), d)
            terms.append((4 * n, coeff * 2 ** n / factorial(2 * n + 1)))
    else:
        top = 2 * ((d - 2) // 4) + 1 if which == "z" else 2 * (d // 4)
        parity = 1 if which == "z" else 0
        for n in range(top + 1):
            if n % 2 != parity:
                continue
            shift = (n - 1) // 2 if which == "z" else n // 2
            coeff = Fraction(0)
            for j in range(2 * n + 1):
                coeff += (-1) ** (shift + j + d) * comb(2 * n, j) * gen_binomial(Fraction(j - 2, 4), d)
            terms.append((4 * n, coeff * 2 ** n / factorial(2 * n)))
    return QuarterPowerPoly(tuple(terms), "u")


def closed_form_capital(d: int, which: str) -> QuarterPowerPoly:
    """X_d(s), ..., W_d(s): x_d(u) = X_d(u^2), то есть u^n -> s^{n/2}."""
    return closed_form_xyzw(d, which).with_base("s", Fraction(1, 2))


Family = Callable[[int, str], QuarterPowerPoly]


def _tilde_equations(n: int, family: Family) -> Dict[str, QuarterPowerPoly]:
    """Левые части системы для x̃_n..w̃_n, приведенные к виду '... = 0'."""
    x, y, z, w = (family(n, k) for k in FAMILIES)
    x_prev, y_prev = family(n - 1, "x"), family(n - 1, "y")
    quarter = Fraction(1, 4)

    def lhs(p: QuarterPowerPoly, a: Fraction) -> QuarterPowerPoly:
        # (1-v)·p' - a·p
        return ddv(p).mul_base(1) - p * a

    return {
        "x": lhs(x, quarter - Fraction(n, 2)) + z * quarter + w * quarter,
        "y": lhs(y, quarter - Fraction(n, 2)) - z * quarter + w * quarter,
        "z": lhs(z, Fraction(1, 2) - Fraction(n, 2)) + x_prev * quarter + y_prev * quarter,
        "w": lhs(w, Fraction(1, 2) - Fraction(n, 2)) - x_prev * quarter + y_prev * quarter,
    }


def verify_tilde_system(n_max: int, family: Family = tilde_closed_form) -> List[VerificationReport]:
    """
    Проверка системы для x̃_n(v), ..., w̃_n(v) при n = 1..n_max вместе с
    начальными условиями x̃_n(0) = ỹ_n(0) = z̃_n(0) = w̃_n(0) = 0.
    """
    if n_max < 1:
        raise DomainError(f"n_max должно быть >= 1: {n_max}")
    reports = []
    for n in range(1, n_max + 1):
        equations = _tilde_equations(n, family)
        for which in FAMILIES:
            residual = equations[which]
            initial = family(n, which).value_at_base_one()
            if not residual.is_zero():
                reports.append(VerificationReport.mismatch("ode-tilde", [n, which], str(residual)))
            elif initial != 0:
                reports.append(VerificationReport.exact("ode-tilde", [n, which], initial))
            else:
                reports.append(VerificationReport.exact("ode-tilde", [n, which], None))
    failed = sum(1 for r in reports if not r.passed)
    logger.info(f"Система для x̃..w̃: {len(reports)} проверок, провалено {failed}")
    return reports


def _u_equations(d: int, family: Family) -> Dict[str, QuarterPowerPoly]:
    """(d+1)·f_{d+1}(u) минус правая часть рекуррентной системы."""
    x, y, z, w = (family(d, k) for k in FAMILIES)
    quarter, half = Fraction(1, 4), Fraction(1, 2)

    def u_diff(p: QuarterPowerPoly) -> QuarterPowerPoly:
        # (u/2)·p'(u)
        return p.derivative().mul_base(1) * half

    rhs = {
        "x": -u_diff(x) + x * (d + quarter) - z * quarter - w * quarter,
        "y": -u_diff(y) + y * (d + quarter) + z * quarter - w * quarter,
        "z": -(x.mul_base(1) * quarter) - y.mul_base(1) * quarter - u_diff(z) + z * (d + half),
        "w": x.mul_base(1) * quarter - y.mul_base(1) * quarter + w * (d + half) - u_diff(w),
    }
    return {k: family(d + 1, k) * (d + 1) - rhs[k] for k in FAMILIES}


def verify_u_system(d_max: int, family: Family = closed_form_xyzw) -> List[VerificationReport]:
    """Проверка рекуррентной системы для x_d(u), ..., w_d(u) при 0 <= d < d_max."""
    if d_max < 1:
        raise DomainError(f"d_max должно быть >= 1: {d_max}")
    reports = []
    for d in range(d_max):
        equations = _u_equations(d, family)
        for which in FAMILIES:
            residual = equations[which]
            if residual.is_zero():
                reports.append(VerificationReport.exact("ode-u", [d, which], None))
            else:
                reports.append(VerificationReport.mismatch("ode-u", [d, which], str(residual)))
    failed = sum(1 for r in reports if not r.passed)
    logger.info(f"Система для x_d..w_d: {len(reports)} проверок, провалено {failed}")
    return reports


def verify_gd_decomposition(d: int, s_sample: Scalar, precision: Optional[int] = None):
    """
    |G_d(s) - (X_d s^{1/4} cot s^{1/4} + Y_d s^{1/4} coth s^{1/4} + Z_d cot·coth + W_d)|.

    Левая часть: G_d(s) = (-s)^d/(g(s) d!)·D^d g(s), производная берется от
    точного ряда g, затем ряд вычисляется численно.
    """
    settings = get_settings()
    precision = settings.gd_digits if precision is None else precision
    s_sample = Fraction(s_sample)
    if d < 0:
        raise DomainError(f"Индекс d отрицателен: {d}")
    with mpmath.workdps(precision):
        s = mpmath.mpf(s_sample.numerator) / s_sample.denominator
        if not 0 < s < mpmath.pi ** 4:
            raise DomainError(f"s_sample={s_sample} вне интервала (0, π^4)")
        g = g_series(d + settings.gd_extra_order)
        deriv = g
        for _ in range(d):
            deriv = deriv.derivative()
        lhs = (-s) ** d / (g.evaluate(s) * factorial(d)) * deriv.evaluate(s)
        q = mpmath.root(s, 4)
        cot, coth = mpmath.cot(q), mpmath.coth(q)
        capital = {k: closed_form_capital(d, k).evaluate(s) for k in FAMILIES}
        rhs = capital["x"] * q * cot + capital["y"] * q * coth + capital["z"] * cot * coth + capital["w"]
        residual = abs(lhs - rhs)
    logger.debug(f"G_{d}({s_sample}): невязка {mpmath.nstr(residual, 5)}")
    return residual


def gd_report(d: int, s_sample: Scalar, precision: Optional[int] = None,
              tolerance: float = 1e-25) -> VerificationReport:
    """Отчет о численной проверке разложения G_d."""
    residual = verify_gd_decomposition(d, s_sample, precision)
    return VerificationReport.numeric("gd-decomposition", [d, str(Fraction(s_sample))],
                                      residual, mpmath.mpf(0), tolerance)


def verify_w0_binomial(d_max: int) -> List[VerificationReport]:
    """
    Коэффициенты разложения w̃_0(v) = (1-v)^{-1/2} по v совпадают с
    w_d(0) = C(2d,d)/2^{2d} (и со свободным членом явного w_d(u)).
    """
    w0 = tilde_closed_form(0, "w")
    expansion = expand_quarter_powers_in_v(w0.terms, d_max)
    reports = []
    for d in range(d_max + 1):
        expected = Fraction(comb(2 * d, d), 4 ** d)
        from_u = closed_form_xyzw(d, "w").as_dict().get(0, Fraction(0))
        residual = expansion[d] - expected
        if residual == 0:
            residual = from_u - expected
        reports.append(VerificationReport.exact("w-binomial", [d], residual))
    return reports

"""
Точные усеченные степенные ряды над Q и извлечение Q(4n,d)/π^{4n}
из производящей функции g(s(1-t))/g(s)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, List, Sequence, Tuple, Union

import mpmath

from errors import DomainError
from exact_arith import PiRational, Scalar, gen_binomial
from reports import VerificationReport

# Настройка логирования
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TruncatedSeries:
    """
    Ряд c_0 + c_1 t + ... + c_order t^order.

    Коэффициенты после order неизвестны (а не равны нулю), поэтому результат
    любой бинарной операции усекается до минимального порядка операндов.
    """

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("Ряд должен содержать хотя бы один коэффициент")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Scalar]) -> "TruncatedSeries":
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, value: Scalar, order: int) -> "TruncatedSeries":
        return cls((Fraction(value),) + (Fraction(0),) * order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            raise IndexError(f"Коэффициент t^{k} вне порядка усечения {self.order}")
        return self.coeffs[k]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise DomainError(f"Нельзя поднять порядок усечения с {self.order} до {order}")
        return TruncatedSeries(self.coeffs[:order + 1])

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries(tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries(tuple(self.coeffs[k] - other.coeffs[k] for k in range(n + 1)))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-c for c in self.coeffs))

    def __mul__(self, other: Union["TruncatedSeries", Scalar]) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(tuple(c * other for c in self.coeffs))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            out.append(sum(self.coeffs[i] * other.coeffs[k - i] for i in range(k + 1)))
        return TruncatedSeries(tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        """1/ряд; требует ненулевой свободный член."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise DomainError("Обращение ряда с нулевым свободным членом")
        inv = [1 / c0]
        for k in range(1, self.order + 1):
            acc = sum(self.coeffs[i] * inv[k - i] for i in range(1, k + 1))
            inv.append(-acc / c0)
        return TruncatedSeries(tuple(inv))

    def __truediv__(self, other: Union["TruncatedSeries", Scalar]) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(tuple(c / other for c in self.coeffs))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.truncate(n) * other.truncate(n).inverse()

    def derivative(self) -> "TruncatedSeries":
        """Почленная производная; порядок уменьшается на 1."""
        if self.order == 0:
            raise DomainError("Производная ряда нулевого порядка не определена")
        return TruncatedSeries(tuple(k * self.coeffs[k] for k in range(1, self.order + 1)))

    def evaluate(self, x):
        """Численное значение многочлена усечения в точке x (схема Горнера, mpmath)."""
        x = mpmath.mpf(x)
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


@dataclass(frozen=True)
class BivariateSeries:
    """
    Ряд sum c[n][d] s^n t^d: внешняя переменная s, коэффициенты - ряды по t.
    """

    rows: Tuple[TruncatedSeries, ...]

    def __post_init__(self):
        if not self.rows:
            raise DomainError("Двумерный ряд должен содержать хотя бы одну строку")
        orders = {row.order for row in self.rows}
        if len(orders) != 1:
            raise DomainError(f"Строки двумерного ряда имеют разные порядки по t: {sorted(orders)}")

    @property
    def order_s(self) -> int:
        return len(self.rows) - 1

    @property
    def order_t(self) -> int:
        return self.rows[0].order

    @property
    def coeffs(self) -> List[List[Fraction]]:
        return [list(row.coeffs) for row in self.rows]

    def __getitem__(self, n: int) -> TruncatedSeries:
        return self.rows[n]

    def times_series_in_s(self, g: TruncatedSeries) -> "BivariateSeries":
        """Умножение на ряд по s (коэффициенты g - скаляры)."""
        n_max = min(self.order_s, g.order)
        out = []
        for n in range(n_max + 1):
            acc = self.rows[0] * g[n]
            for k in range(1, n + 1):
                acc = acc + self.rows[k] * g[n - k]
            out.append(acc)
        return BivariateSeries(tuple(out))

    def divide_by_series_in_s(self, g: TruncatedSeries) -> "BivariateSeries":
        """Деление на ряд по s: r_n = (h_n - sum_{k>=1} g_k r_{n-k}) / g_0."""
        g0 = g[0]
        if g0 == 0:
            raise DomainError("Деление на ряд с нулевым свободным членом")
        n_max = min(self.order_s, g.order)
        out: List[TruncatedSeries] = []
        for n in range(n_max + 1):
            acc = self.rows[n]
            for k in range(1, n + 1):
                acc = acc - out[n - k] * g[k]
            out.append(acc / g0)
            logger.debug(f"Строка s^{n} двумерного ряда вычислена")
        return BivariateSeries(tuple(out))

    def at_t_zero(self) -> TruncatedSeries:
        """Подстановка t = 0: ряд по s из свободных членов строк."""
        return TruncatedSeries(tuple(row[0] for row in self.rows))

    def to_pi_rational(self, n: int, d: int) -> PiRational:
        """c[n][d]·π^{4n}."""
        return PiRational(self.rows[n][d], 4 * n)


def g_series(order: int) -> TruncatedSeries:
    """g(t) = f(t^{1/4}) = sum (-1)^k 4^k/(4k+2)! t^k."""
    if order < 0:
        raise DomainError(f"Порядок ряда отрицателен: {order}")
    return TruncatedSeries(tuple(
        Fraction((-1) ** k * 4 ** k, factorial(4 * k + 2)) for k in range(order + 1)
    ))


def sin_series(degree: int) -> TruncatedSeries:
    return TruncatedSeries(tuple(
        Fraction((-1) ** ((m - 1) // 2), factorial(m)) if m % 2 == 1 else Fraction(0)
        for m in range(degree + 1)
    ))


def sinh_series(degree: int) -> TruncatedSeries:
    return TruncatedSeries(tuple(
        Fraction(1, factorial(m)) if m % 2 == 1 else Fraction(0)
        for m in range(degree + 1)
    ))


def verify_f_product(order: int) -> bool:
    """
    Проверка разложения f(x) = sin x · sinh x / (2x^2) = g(x^4) до x^{4·order}.

    Ряды sin и sinh строятся из точных факториалов, комплексная арифметика не нужна.
    """
    if order < 0:
        raise DomainError(f"Порядок ряда отрицателен: {order}")
    top = 4 * order
    product = sin_series(top + 2) * sinh_series(top + 2)
    if product[0] != 0 or product[1] != 0:
        return False
    f = [product[m + 2] / 2 for m in range(top + 1)]
    g = g_series(order)
    for m, c in enumerate(f):
        expected = g[m // 4] if m % 4 == 0 else Fraction(0)
        if c != expected:
            logger.warning(f"Коэффициент x^{m} в f(x) не совпал: {c} != {expected}")
            return False
    return True


def shifted_g_table(order_s: int, order_t: int) -> BivariateSeries:
    """g(s(1-t)) как двумерный ряд: строка n равна g_n (1-t)^n."""
    g = g_series(order_s)
    rows = []
    for n in range(order_s + 1):
        rows.append(TruncatedSeries(tuple(
            g[n] * comb(n, d) * (-1) ** d if d <= n else Fraction(0)
            for d in range(order_t + 1)
        )))
    return BivariateSeries(tuple(rows))


def q_rational_table(max_n: int, max_d: int) -> BivariateSeries:
    """
    Таблица c[n][d] = Q(4n,d)/π^{4n} из разложения g(s(1-t))/g(s).

    Масштаб s -> s/π^4 учитывается символически: c[n][d] - коэффициент при π^{4n}.
    """
    if max_n < 1 or max_d < 1:
        raise DomainError(f"Размеры таблицы должны быть >= 1: max_n={max_n}, max_d={max_d}")
    logger.info(f"Разложение g(s(1-t))/g(s) до s^{max_n}, t^{max_d}")
    return shifted_g_table(max_n, max_d).divide_by_series_in_s(g_series(max_n))


def zeta_four_power(d: int) -> PiRational:
    """
    ζ(4,...,4) (d четверок) = 2·4^d π^{4d}/(4d+2)!.

    Коэффициент t^d в ε(E(t)) = 2 g(-π^4 t).
    """
    if d < 0:
        raise DomainError(f"Глубина отрицательна: {d}")
    return PiRational(2 * (-1) ** d * g_series(d)[d], 4 * d)


def verify_division_roundtrip(order: int) -> VerificationReport:
    """(g(s(1-t))/g(s))·g(s) = g(s(1-t)) покоэффициентно до порядка order."""
    shifted = shifted_g_table(order, order)
    quotient = shifted.divide_by_series_in_s(g_series(order))
    back = quotient.times_series_in_s(g_series(order))
    for n in range(order + 1):
        diff = back[n] - shifted[n]
        for d, c in enumerate(diff.coeffs):
            if c != 0:
                return VerificationReport.exact("series-roundtrip", [order, n, d], c)
    return VerificationReport.exact("series-roundtrip", [order], None)


def expand_quarter_powers_in_v(terms: Sequence[Tuple[int, Fraction]], order: int) -> TruncatedSeries:
    """
    Биномиальное разложение sum c_e (1-v)^{e/4} в ряд по v до v^order.

    Коэффициент v^d: sum c_e · binom(e/4, d) · (-1)^d.
    """
    return TruncatedSeries(tuple(
        sum((c * gen_binomial(Fraction(e, 4), d) * (-1) ** d for e, c in terms), Fraction(0))
        for d in range(order + 1)
    ))

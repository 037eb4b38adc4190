"""
Точная арифметика: рациональные числа, числа Бернулли, ζ(2n) как q·π^{2n}
и обобщенные биномиальные коэффициенты с рациональным верхним аргументом
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import List, Union

import mpmath

from errors import DomainError, PiPowerMismatchError

# Настройка логирования
logger = logging.getLogger(__name__)

# Рациональное число произвольной длины, всегда в несократимой форме
BigRational = Fraction

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class PiRational:
    """Значение coeff·π^pi_power с рациональным coeff."""

    coeff: Fraction
    pi_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.pi_power < 0:
            raise DomainError(f"Степень π должна быть неотрицательной: {self.pi_power}")

    @classmethod
    def zero(cls, pi_power: int) -> "PiRational":
        return cls(Fraction(0), pi_power)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def _check_power(self, other: "PiRational") -> None:
        if self.pi_power != other.pi_power:
            raise PiPowerMismatchError(
                f"Нельзя сложить π^{self.pi_power} и π^{other.pi_power}"
            )

    def __add__(self, other: "PiRational") -> "PiRational":
        if not isinstance(other, PiRational):
            return NotImplemented
        self._check_power(other)
        return PiRational(self.coeff + other.coeff, self.pi_power)

    def __sub__(self, other: "PiRational") -> "PiRational":
        if not isinstance(other, PiRational):
            return NotImplemented
        self._check_power(other)
        return PiRational(self.coeff - other.coeff, self.pi_power)

    def __neg__(self) -> "PiRational":
        return PiRational(-self.coeff, self.pi_power)

    def __mul__(self, other: Union["PiRational", Scalar]) -> "PiRational":
        if isinstance(other, PiRational):
            return PiRational(self.coeff * other.coeff, self.pi_power + other.pi_power)
        if isinstance(other, (int, Fraction)):
            return PiRational(self.coeff * other, self.pi_power)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "PiRational":
        if isinstance(other, (int, Fraction)):
            return PiRational(self.coeff / other, self.pi_power)
        return NotImplemented

    def to_mpf(self, pi=None):
        """Численное значение при текущей точности mpmath."""
        pi = mpmath.mp.pi if pi is None else pi
        return mpmath.mpf(self.coeff.numerator) / self.coeff.denominator * pi ** self.pi_power

    def __str__(self) -> str:
        if self.pi_power == 0:
            return str(self.coeff)
        return f"{self.coeff} · π^{self.pi_power}"


# Кэш чисел Бернулли: B_0, B_1, ... (заполняется под блокировкой)
_bernoulli_cache: List[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(m: int) -> Fraction:
    """
    Число Бернулли B_m (соглашение B_1 = -1/2).

    Считается рекуррентно: sum_{k=0}^{m} C(m+1, k) B_k = 0 при m >= 1.
    """
    if m < 0:
        raise DomainError(f"Индекс числа Бернулли должен быть неотрицательным: {m}")
    if m < len(_bernoulli_cache):
        return _bernoulli_cache[m]
    with _bernoulli_lock:
        for j in range(len(_bernoulli_cache), m + 1):
            if j > 1 and j % 2 == 1:
                _bernoulli_cache.append(Fraction(0))
                continue
            acc = sum(comb(j + 1, k) * _bernoulli_cache[k] for k in range(j))
            _bernoulli_cache.append(-acc / (j + 1))
        logger.debug(f"Кэш чисел Бернулли расширен до B_{m}")
    return _bernoulli_cache[m]


def zeta_even(m: int) -> PiRational:
    """
    ζ(m) для четного m >= 0 в виде q·π^m.

    ζ(2n) = (-1)^{n+1} B_{2n} (2π)^{2n} / (2·(2n)!), ζ(0) = -1/2.
    """
    if m < 0 or m % 2 == 1:
        raise DomainError(f"zeta_even определена только для четных m >= 0, получено {m}")
    if m == 0:
        return PiRational(Fraction(-1, 2), 0)
    n = m // 2
    sign = 1 if n % 2 == 1 else -1
    coeff = sign * bernoulli(m) * 2 ** m / (2 * factorial(m))
    return PiRational(coeff, m)


def gen_binomial(a: Scalar, d: int) -> Fraction:
    """Обобщенный биномиальный коэффициент a(a-1)...(a-d+1)/d!."""
    if d < 0:
        raise DomainError(f"Нижний аргумент биномиального коэффициента отрицателен: {d}")
    a = Fraction(a)
    result = Fraction(1)
    for i in range(d):
        result *= a - i
    return result / factorial(d)


def rising_factorial(s: int, m: int) -> int:
    """Возрастающий факториал s(s+1)...(s+m-1)."""
    result = 1
    for i in range(m):
        result *= s + i
    return result

"""
Численное вычисление кратных дзета-значений с гарантированной границей ошибки
и прямое суммирование Q(4n,d) по композициям.

Схема вычисления ζ(s_1,...,s_d) при отсечке N:

    ζ = sum_{j=0}^{d} Z^{>N}(s_1..s_j) · Z^{<=N}(s_{j+1}..s_d),

где Z^{<=N} - конечные вложенные суммы (все индексы <= N), а хвосты Z^{>N}
(все индексы > N) раскладываются по степеням 1/N вложенной формулой
Эйлера-Маклорена с точными рациональными коэффициентами и явным остатком.
Слагаемое j = 0 - это головная сумма sum_{k_1<=N} k_1^{-s_1} T_2(k_1).
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import mpmath
from pydantic import BaseModel, ConfigDict, Field, model_validator

from errors import DivergenceError, DomainError, PrecisionUnreachableError
from exact_arith import PiRational, bernoulli, rising_factorial
from reports import VerificationReport
from settings import get_settings

# Настройка логирования
logger = logging.getLogger(__name__)

# Конфигурация
MIN_GUARD_DIGITS = 10
ZETA2_UPPER = Fraction(1645, 1000)  # ζ(2) = 1.6449... < 1.645
TWO_PI_LOWER = 6  # 2π > 6: остаток Эйлера-Маклорена оценивается рационально


def target_digits(target_abs_error: float) -> int:
    """Число десятичных разрядов, соответствующее абсолютной погрешности."""
    return max(0, math.ceil(-math.log10(target_abs_error)))


class PrecisionConfig(BaseModel):
    """Целевая абсолютная погрешность и рабочая точность mpmath."""
    model_config = ConfigDict(frozen=True)

    target_abs_error: float = Field(gt=0, description="Целевая абсолютная погрешность")
    working_digits: int = Field(gt=0, description="Рабочая точность в десятичных разрядах")

    @model_validator(mode="after")
    def _check_guard_digits(self):
        need = target_digits(self.target_abs_error) + MIN_GUARD_DIGITS
        if self.working_digits < need:
            raise ValueError(
                f"Рабочая точность {self.working_digits} меньше требуемых {need} разрядов"
            )
        return self

    @classmethod
    def from_target(cls, target_abs_error: Optional[float] = None,
                    guard_digits: Optional[int] = None) -> "PrecisionConfig":
        settings = get_settings()
        target = settings.target_abs_error if target_abs_error is None else target_abs_error
        if not (math.isfinite(target) and target > 0):
            raise DomainError(f"--prec must be a positive finite number, получено {target}")
        guard = settings.guard_digits if guard_digits is None else guard_digits
        return cls(target_abs_error=target, working_digits=target_digits(target) + guard)

    def scaled(self, factor: int) -> "PrecisionConfig":
        """Конфигурация с погрешностью target/factor и тем же запасом разрядов."""
        guard = self.working_digits - target_digits(self.target_abs_error)
        return PrecisionConfig.from_target(self.target_abs_error / factor, guard)


def _ulp(digits: int):
    return mpmath.mpf(10) ** (1 - digits)


def _to_mpf(x):
    if isinstance(x, PiRational):
        return x.to_mpf()
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


class ApproxReal(BaseModel):
    """Приближенное значение: истинная величина лежит в [value - err, value + err]."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    value: Any = Field(description="Значение (mpf)")
    err: Any = Field(description="Граница абсолютной ошибки (mpf)")
    digits: int = Field(default=15, description="Точность, с которой получено значение")

    def _combine(self, other: "ApproxReal", sign: int) -> "ApproxReal":
        digits = max(self.digits, other.digits)
        with mpmath.workdps(digits):
            value = self.value + sign * other.value
            err = self.err + other.err + abs(value) * _ulp(digits)
        return ApproxReal(value=value, err=err, digits=digits)

    def __add__(self, other: "ApproxReal") -> "ApproxReal":
        return self._combine(other, 1)

    def __sub__(self, other: "ApproxReal") -> "ApproxReal":
        return self._combine(other, -1)

    def __neg__(self) -> "ApproxReal":
        return ApproxReal(value=-self.value, err=self.err, digits=self.digits)

    def __mul__(self, other: Union["ApproxReal", int, Fraction]) -> "ApproxReal":
        if isinstance(other, ApproxReal):
            digits = max(self.digits, other.digits)
            with mpmath.workdps(digits):
                value = self.value * other.value
                err = (abs(self.value) * other.err + abs(other.value) * self.err
                       + self.err * other.err + abs(value) * _ulp(digits))
            return ApproxReal(value=value, err=err, digits=digits)
        if isinstance(other, (int, Fraction)):
            with mpmath.workdps(self.digits):
                c = _to_mpf(other)
                value = self.value * c
                err = self.err * abs(c) + abs(value) * _ulp(self.digits)
            return ApproxReal(value=value, err=err, digits=self.digits)
        return NotImplemented

    __rmul__ = __mul__

    @classmethod
    def exact(cls, x: Union[PiRational, Fraction, int], digits: int) -> "ApproxReal":
        """Точная величина, округленная до digits разрядов (π берется из mpmath)."""
        with mpmath.workdps(digits + 5):
            value = _to_mpf(x)
            err = abs(value) * _ulp(digits + 5) * 10
        return cls(value=value, err=err, digits=digits)

    def contains(self, x) -> bool:
        """Лежит ли x (PiRational, дробь или mpf) в гарантированном интервале."""
        with mpmath.workdps(self.digits + 5):
            return bool(abs(_to_mpf(x) - self.value) <= self.err)


@dataclass(frozen=True)
class MzvIndex:
    """Композиция (s_1,...,s_d) с s_1 >= 2."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(s) for s in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise DomainError("Индекс MZV должен иметь глубину >= 1")
        if any(s < 1 for s in parts):
            raise DomainError(f"Все компоненты индекса должны быть положительны: {parts}")
        if parts[0] < 2:
            raise DivergenceError("divergent: s1 must be ≥ 2")

    @classmethod
    def parse(cls, raw: str) -> "MzvIndex":
        """Разбор строки вида '4,4' или '(2,1)'."""
        text = raw.strip().strip("()").strip()
        try:
            parts = tuple(int(p) for p in text.split(",") if p.strip())
        except ValueError:
            raise DomainError(f"Не удалось разобрать индекс MZV: {raw!r}")
        return cls(parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "ζ(" + ",".join(str(s) for s in self.parts) + ")"


@dataclass(frozen=True)
class TailExpansion:
    """
    Z^{>m}(s_1..s_j) = sum_e terms[e]·m^{-e} + R(m),
    |R(m)| <= err_coeff·m^{-err_exp} для всех m >= cutoff.
    """

    terms: Dict[int, Fraction]
    err_coeff: Fraction
    err_exp: int
    cutoff: int

    def value_at_cutoff(self) -> Fraction:
        n = self.cutoff
        return sum((c / Fraction(n) ** e for e, c in self.terms.items()), Fraction(0))

    def error_at_cutoff(self) -> Fraction:
        return self.err_coeff / Fraction(self.cutoff) ** self.err_exp


def _fold(terms: Dict[int, Fraction], errors: List[Tuple[Fraction, int]], cutoff: int) -> TailExpansion:
    """Сводит остатки к одному K·m^{-E}; члены порядка >= E переносятся в остаток."""
    exp = min(e for _, e in errors)
    coeff = sum((k / Fraction(cutoff) ** (e - exp) for k, e in errors), Fraction(0))
    kept = {}
    for e, c in terms.items():
        if c == 0:
            continue
        if e >= exp:
            coeff += abs(c) / Fraction(cutoff) ** (e - exp)
        else:
            kept[e] = c
    return TailExpansion(kept, coeff, exp, cutoff)


def power_tail_expansion(s: int, terms: int, cutoff: int) -> TailExpansion:
    """
    sum_{k>m} k^{-s} = m^{1-s}/(s-1) - m^{-s}/2 + sum_{j=1}^{p} B_{2j}/(2j)!·(s)_{2j-1}·m^{-s-2j+1} + R,
    |R| <= 2ζ(2p)/(2π)^{2p}·(s)_{2p-1}·m^{-s-2p+1}.
    """
    if s < 2:
        raise DivergenceError(f"Хвост sum k^-{s} расходится")
    out: Dict[int, Fraction] = defaultdict(Fraction)
    out[s - 1] += Fraction(1, s - 1)
    out[s] += Fraction(-1, 2)
    for j in range(1, terms + 1):
        out[s + 2 * j - 1] += bernoulli(2 * j) / factorial(2 * j) * rising_factorial(s, 2 * j - 1)
    bound = 4 * Fraction(rising_factorial(s, 2 * terms - 1), TWO_PI_LOWER ** (2 * terms))
    return _fold(out, [(bound, s + 2 * terms - 1)], cutoff)


def extend_tail(tail: TailExpansion, s: int, terms: int) -> TailExpansion:
    """Z^{>m}(..., s) = sum_{l>m} l^{-s} Z^{>l}(...): почленное применение power_tail_expansion."""
    out: Dict[int, Fraction] = defaultdict(Fraction)
    errors: List[Tuple[Fraction, int]] = []
    for e, a in tail.terms.items():
        inner = power_tail_expansion(e + s, terms, tail.cutoff)
        for e2, c2 in inner.terms.items():
            out[e2] += a * c2
        errors.append((abs(a) * inner.err_coeff, inner.err_exp))
    # sum_{l>m} l^{-s}·K·l^{-E} <= K·m^{1-s-E}/(s+E-1)
    exp = s + tail.err_exp - 1
    errors.append((tail.err_coeff / exp, exp))
    return _fold(out, errors, tail.cutoff)


def tail_prefixes(parts: Sequence[int], terms: int, cutoff: int) -> List[TailExpansion]:
    """Разложения Z^{>N}(s_1..s_j) для j = 1..d."""
    tails = [power_tail_expansion(parts[0], terms, cutoff)]
    for s in parts[1:]:
        tails.append(extend_tail(tails[-1], s, terms))
    return tails


def _suffix_bound(parts: Sequence[int], cutoff: int):
    """Верхняя оценка Z^{<=N}(parts): H_N <= 1 + ln N, H_N^{(s>=2)} < ζ(2)."""
    bound = mpmath.mpf(1)
    for s in parts:
        bound *= (1 + mpmath.log(cutoff)) * (1 + mpmath.mpf(10) ** -10) if s == 1 else _to_mpf(ZETA2_UPPER)
    return bound


def crude_tail_bound(parts: Sequence[int], cutoff: int):
    """
    |sum_{k>N} k^{-s_1} T_2(k)| <= ζ(2)^a · ∫_N^∞ x^{-s_1}(1+ln x)^b dx,
    a, b - число внутренних индексов >= 2 и = 1 (при b = 0 это ζ(2)^{d-1} N^{1-s_1}/(s_1-1)).
    """
    s1 = parts[0]
    a = sum(1 for s in parts[1:] if s >= 2)
    b = sum(1 for s in parts[1:] if s == 1)
    c = s1 - 1
    log_n = (1 + mpmath.log(cutoff)) * (1 + mpmath.mpf(10) ** -10)
    integral = mpmath.mpf(0)
    for i in range(b + 1):
        integral += mpmath.mpf(factorial(b) // factorial(b - i)) * log_n ** (b - i) / mpmath.mpf(c) ** (i + 1)
    return _to_mpf(ZETA2_UPPER) ** a * integral * mpmath.mpf(cutoff) ** (-c)


def _head_sums(parts: Sequence[int], cutoff: int) -> List[Any]:
    """
    heads[j] = Z^{<=N}(s_{j+1}..s_d), heads[d] = 1.

    Внутренние уровни - префиксные суммы (сканирование по k), внешний уровень
    суммируется по убыванию k.
    """
    d = len(parts)
    heads: List[Any] = [None] * (d + 1)
    heads[d] = mpmath.mpf(1)
    prev = [mpmath.mpf(1)] * (cutoff + 1)
    for i in range(d - 1, 0, -1):
        s = parts[i]
        cur = [mpmath.mpf(0)] * (cutoff + 1)
        acc = mpmath.mpf(0)
        for k in range(1, cutoff + 1):
            acc += prev[k - 1] * mpmath.mpf(k) ** (-s)
            cur[k] = acc
        heads[i] = acc
        prev = cur
    s1 = parts[0]
    heads[0] = mpmath.fsum(prev[k - 1] * mpmath.mpf(k) ** (-s1) for k in range(cutoff, 0, -1))
    return heads


def _choose_cutoff(parts: Sequence[int], target) -> Tuple[int, Optional[List[TailExpansion]], Any]:
    """Наименьшая отсечка N (удвоением), при которой оценка хвоста <= target/2."""
    settings = get_settings()
    terms = settings.euler_maclaurin_terms
    b = sum(1 for s in parts[1:] if s == 1)
    cutoff = settings.initial_cutoff
    while cutoff <= settings.max_cutoff:
        with mpmath.workdps(30):
            if settings.tail_correction:
                tails = tail_prefixes(parts, terms, cutoff)
                bound = mpmath.mpf(0)
                for j, tail in enumerate(tails, start=1):
                    bound += _to_mpf(tail.error_at_cutoff()) * _suffix_bound(parts[j:], cutoff)
            else:
                tails = None
                monotone = (1 + math.log(cutoff)) * parts[0] > b
                bound = crude_tail_bound(parts, cutoff) if monotone else mpmath.inf
            logger.debug(f"{tuple(parts)}: N={cutoff}, оценка хвоста {mpmath.nstr(bound, 5)}")
            if bound <= target / 2:
                return cutoff, tails, bound
        cutoff *= 2
    raise PrecisionUnreachableError(
        f"precision unreachable: {tuple(parts)} с погрешностью {mpmath.nstr(target, 5)} "
        f"требует N > {settings.max_cutoff}"
    )


def _evaluate(parts: Sequence[int], cfg: PrecisionConfig) -> ApproxReal:
    d = len(parts)
    terms = get_settings().euler_maclaurin_terms
    target = mpmath.mpf(cfg.target_abs_error)
    cutoff, tails, bound = _choose_cutoff(parts, target)
    digits = cfg.working_digits + math.ceil(math.log10(cutoff * (d + 1))) + 1
    with mpmath.workdps(digits):
        heads = _head_sums(parts, cutoff)
        value = heads[0]
        if tails is not None:
            for j, tail in enumerate(tails, start=1):
                value += _to_mpf(tail.value_at_cutoff()) * heads[j]
        ops = cutoff * (d + 1) + 4 * terms * d + 10
        rounding = ops * _ulp(digits) * max(_suffix_bound(parts, cutoff), mpmath.mpf(1))
        err = mpmath.mpf(bound) + rounding
    if err > target:
        raise PrecisionUnreachableError(
            f"precision unreachable: погрешность {mpmath.nstr(err, 5)} больше целевой"
        )
    logger.debug(f"{tuple(parts)}: N={cutoff}, {digits} разрядов, err={mpmath.nstr(err, 5)}")
    return ApproxReal(value=value, err=err, digits=digits)


def _as_config(cfg: Optional[PrecisionConfig]) -> PrecisionConfig:
    return PrecisionConfig.from_target() if cfg is None else cfg


def pi_value(cfg: Optional[PrecisionConfig] = None) -> ApproxReal:
    """π с погрешностью не больше target_abs_error."""
    cfg = _as_config(cfg)
    with mpmath.workdps(cfg.working_digits + 5):
        value = +mpmath.pi
    return ApproxReal(value=value, err=mpmath.mpf(10) ** (-cfg.working_digits), digits=cfg.working_digits)


def zeta_single(s: int, cfg: Optional[PrecisionConfig] = None) -> ApproxReal:
    """ζ(s): прямая сумма до N плюс хвост Эйлера-Маклорена с явной оценкой остатка."""
    if s < 2:
        raise DivergenceError(f"divergent: ζ({s}) расходится, нужно s >= 2")
    return _evaluate((s,), _as_config(cfg))


def mzv_eval(idx: Union[MzvIndex, Sequence[int]], cfg: Optional[PrecisionConfig] = None) -> ApproxReal:
    """ζ(s_1,...,s_d) с гарантированной погрешностью <= target_abs_error."""
    if not isinstance(idx, MzvIndex):
        idx = MzvIndex(tuple(idx))
    return _evaluate(idx.parts, _as_config(cfg))


def compositions(n: int, d: int) -> Iterator[Tuple[int, ...]]:
    """Все композиции n в d положительных слагаемых в лексикографическом порядке."""
    if d < 1:
        raise DomainError(f"Число частей композиции должно быть >= 1: {d}")
    if d == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - d + 2):
        for rest in compositions(n - first, d - 1):
            yield (first,) + rest


def q_bruteforce(n: int, d: int, cfg: Optional[PrecisionConfig] = None) -> ApproxReal:
    """Q(4n,d) прямым суммированием ζ(4j_1,...,4j_d) по композициям n."""
    if not 1 <= d <= n:
        raise DomainError(f"q_bruteforce requires 1 ≤ d ≤ n, получено n={n}, d={d}")
    cfg = _as_config(cfg)
    count = comb(n - 1, d - 1)
    per_term = cfg.scaled(count)
    logger.info(f"Q({4 * n},{d}): {count} композиций, погрешность на член {per_term.target_abs_error:.3g}")
    total: Optional[ApproxReal] = None
    for comp in compositions(n, d):
        term = mzv_eval(tuple(4 * j for j in comp), per_term)
        total = term if total is None else total + term
    return total


def stuffle_depth2(a: int, b: int, cfg: Optional[PrecisionConfig] = None,
                   tolerance: float = 0.0) -> VerificationReport:
    """ζ(a)ζ(b) - ζ(a,b) - ζ(b,a) - ζ(a+b) = 0 в пределах суммарных границ ошибки."""
    cfg = _as_config(cfg)
    part = cfg.scaled(8)
    residual = (zeta_single(a, part) * zeta_single(b, part)
                - mzv_eval((a, b), part) - mzv_eval((b, a), part) - zeta_single(a + b, part))
    return VerificationReport.numeric("stuffle", [a, b], residual.value, residual.err, tolerance)

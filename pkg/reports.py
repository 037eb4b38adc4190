"""
Модели результатов: отчеты о проверках и записи вывода CLI
"""

from fractions import Fraction
from typing import List, Literal, Optional, Sequence, Tuple, Union

import mpmath
from pydantic import BaseModel, Field, model_validator

# Число значащих цифр при печати приближенных величин
DISPLAY_DIGITS = 20

Instance = List[Union[int, str]]


def format_mpf(x, digits: int = DISPLAY_DIGITS) -> str:
    """Десятичная строка для mpf (детерминированная при фиксированной точности)."""
    return mpmath.nstr(mpmath.mpf(x), digits)


class ResidualValue(BaseModel):
    """Численная невязка с гарантированной границей ошибки."""
    value: str = Field(description="Значение невязки")
    abs_err: str = Field(description="Граница абсолютной ошибки")


class VerificationReport(BaseModel):
    """Результат проверки одного тождества для одного набора параметров."""
    name: str = Field(description="Название тождества")
    instance: Instance = Field(description="Параметры")
    mode: Literal["exact", "numeric"] = Field(description="Способ проверки")
    residual: Union[str, ResidualValue] = Field(description="Невязка: точная дробь или приближенное значение")
    tolerance: Optional[str] = Field(default=None, description="Допуск численной проверки")
    passed: bool = Field(description="Пройдена ли проверка")

    @model_validator(mode="after")
    def _exact_pass_means_zero(self):
        if self.mode == "exact" and self.passed and self.residual != "0":
            raise ValueError("Точная проверка может пройти только с нулевой невязкой")
        return self

    @classmethod
    def exact(cls, name: str, instance: Sequence, residual) -> "VerificationReport":
        """Точный отчет: residual - Fraction, PiRational или None (сравнение без невязки)."""
        if residual is None:
            text = "0"
        else:
            coeff = getattr(residual, "coeff", residual)
            text = str(Fraction(coeff))
        return cls(name=name, instance=list(instance), mode="exact",
                   residual=text, passed=(text == "0"))

    @classmethod
    def mismatch(cls, name: str, instance: Sequence, description: str) -> "VerificationReport":
        """Точный отчет о провале без числовой невязки (например, несовпадение многочленов)."""
        return cls(name=name, instance=list(instance), mode="exact",
                   residual=description, passed=False)

    @classmethod
    def numeric(cls, name: str, instance: Sequence, value, err, tolerance: float) -> "VerificationReport":
        """Численный отчет: пройдено, если |value| <= err + tolerance."""
        passed = bool(abs(value) <= err + mpmath.mpf(tolerance))
        return cls(
            name=name,
            instance=list(instance),
            mode="numeric",
            residual=ResidualValue(value=format_mpf(value), abs_err=format_mpf(err, 6)),
            tolerance=repr(float(tolerance)),
            passed=passed,
        )

    def line(self) -> str:
        """Строка отчета для текстового вывода."""
        mark = "✅" if self.passed else "❌"
        params = ",".join(str(x) for x in self.instance)
        if isinstance(self.residual, ResidualValue):
            res = f"{self.residual.value} ± {self.residual.abs_err}"
        else:
            res = self.residual
        return f"{mark} {self.name}({params}) [{self.mode}] residual={res}"


class RationalRecord(BaseModel):
    """Точное значение num/den · π^pi_power."""
    kind: Literal["rational"] = "rational"
    num: str
    den: str
    pi_power: int


class ValueRecord(BaseModel):
    """Приближенное значение с гарантированной погрешностью."""
    kind: Literal["value"] = "value"
    value: str
    abs_err: str


class ReportRecord(BaseModel):
    """Запись отчета о проверке."""
    kind: Literal["report"] = "report"
    name: str
    instance: Instance
    mode: Literal["exact", "numeric"]
    passed: bool
    residual: Union[str, ResidualValue]

    @classmethod
    def from_report(cls, report: VerificationReport) -> "ReportRecord":
        return cls(name=report.name, instance=report.instance, mode=report.mode,
                   passed=report.passed, residual=report.residual)


class TableRecord(BaseModel):
    """Таблица c[n][d] = Q(4n,d)/π^{4n}: ячейки - пары строк (числитель, знаменатель)."""
    kind: Literal["table"] = "table"
    max_n: int
    max_d: int
    rows: List[List[Tuple[str, str]]]


def fraction_pair(x: Fraction) -> Tuple[str, str]:
    return str(x.numerator), str(x.denominator)


def summarize(reports: List[VerificationReport]) -> dict:
    """Сводка по списку отчетов."""
    failed = [r for r in reports if not r.passed]
    return {"total": len(reports), "passed": len(reports) - len(failed), "failed": len(failed)}

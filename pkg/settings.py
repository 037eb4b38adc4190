"""
Настройки mzvq: чтение .env, значения по умолчанию и настройка логирования
"""

import logging
from fractions import Fraction
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Загрузка переменных окружения
load_dotenv()

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class MzvqSettings(BaseSettings):
    """Конфигурация вычислений. Любое поле можно переопределить через MZVQ_<ИМЯ>."""

    model_config = SettingsConfigDict(env_prefix="MZVQ_", env_file=".env", extra="ignore")

    log_level: str = Field(default="WARNING", description="Уровень логирования")

    # Численные вычисления
    target_abs_error: float = Field(default=1e-12, gt=0, description="Целевая абсолютная погрешность")
    guard_digits: int = Field(default=10, ge=10, description="Защитные десятичные разряды")
    pass_tolerance: float = Field(default=1e-10, ge=0, description="Допуск численных проверок тождеств")
    initial_cutoff: int = Field(default=32, ge=4, description="Начальная отсечка N")
    max_cutoff: int = Field(default=200_000, ge=4, description="Максимальная отсечка N")
    euler_maclaurin_terms: int = Field(default=12, ge=1, description="Число членов Эйлера-Маклорена")
    tail_correction: bool = Field(default=True, description="Асимптотическая поправка хвоста")

    # Ряды и проверки
    series_order: int = Field(default=12, ge=1, description="Размер таблицы Q(4n,d) по умолчанию")
    gd_digits: int = Field(default=40, ge=15, description="Рабочая точность проверки G_d")
    gd_samples: str = Field(default="1/2,1,2", description="Точки s для проверки G_d")
    gd_extra_order: int = Field(default=60, ge=10, description="Запас порядка ряда g при дифференцировании")

    def gd_sample_points(self) -> List[Fraction]:
        """Точки проверки G_d в виде рациональных чисел."""
        return [Fraction(part.strip()) for part in self.gd_samples.split(",") if part.strip()]


# Глобальная переменная для хранения экземпляра настроек
_settings_instance: Optional[MzvqSettings] = None


def get_settings() -> MzvqSettings:
    """Получение или создание экземпляра настроек (синглтон)."""
    global _settings_instance
    if _settings_instance is None:
        _settings_instance = MzvqSettings()
    return _settings_instance


def reset_settings() -> None:
    """Сброс настроек (перечитать окружение при следующем вызове)."""
    global _settings_instance
    _settings_instance = None


def setup_logging(level: Optional[str] = None) -> None:
    """Настройка логирования в формате, общем для всех модулей."""
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        format=LOG_FORMAT,
        force=True,
    )

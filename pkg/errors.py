"""
Исключения предметной области
"""


class MzvqError(ValueError):
    """Базовая ошибка mzvq."""


class DomainError(MzvqError):
    """Нарушено условие применимости операции."""


class DivergenceError(DomainError):
    """Ряд расходится (s1 < 2)."""


class PiPowerMismatchError(MzvqError):
    """Сложение величин с разными степенями π."""


class HomogeneityError(MzvqError):
    """Член формулы имеет неожиданную степень π."""


class PrecisionUnreachableError(MzvqError):
    """Целевая точность недостижима в пределах max_cutoff."""

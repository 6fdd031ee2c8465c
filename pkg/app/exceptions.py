"""
Иерархия ошибок библиотеки.

Каждая ошибка несет машиночитаемый код (`code`) и код выхода CLI (`exit_code`):
1 - ошибка конфигурации/входных данных, 2 - найден контрпример, 3 - превышен бюджет.
"""


class SylowToolError(Exception):
    """Базовая ошибка"""

    code = "InternalError"
    exit_code = 1

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details


class InvalidPrime(SylowToolError, ValueError):
    code = "InvalidPrime"


class NotPrime(SylowToolError, ValueError):
    code = "NotPrime"


class SamePrime(SylowToolError, ValueError):
    code = "SamePrime"


class FieldTooLarge(SylowToolError, ValueError):
    code = "FieldTooLarge"
    exit_code = 3


class NoSuchRoot(SylowToolError, ValueError):
    code = "NoSuchRoot"


class ShapeError(SylowToolError, ValueError):
    code = "ShapeError"


class UnknownGroup(SylowToolError, ValueError):
    code = "UnknownGroup"


class InvalidGroup(SylowToolError, ValueError):
    code = "InvalidGroup"


class CyclicGroup(SylowToolError, ValueError):
    code = "CyclicGroup"


class NotMaximal(SylowToolError, ValueError):
    code = "NotMaximal"


class WrongProvenance(SylowToolError, ValueError):
    code = "WrongProvenance"


class IndexMismatch(SylowToolError, ValueError):
    code = "IndexMismatch"


class TooLargeToEnumerate(SylowToolError):
    code = "TooLargeToEnumerate"
    exit_code = 3


class ExactBudgetExceeded(SylowToolError):
    code = "ExactBudgetExceeded"
    exit_code = 3


class MatchingFailed(SylowToolError):
    """Нарушено условие Холла - для наших конструкций это всегда ошибка реализации"""

    code = "MatchingFailed"
    exit_code = 2


class InternalError(SylowToolError):
    code = "InternalError"
    exit_code = 2


class InvalidDegree(SylowToolError, ValueError):
    code = "InvalidDegree"


class NotIrreducible(SylowToolError, ValueError):
    code = "NotIrreducible"


class UsageError(SylowToolError, ValueError):
    """Некорректные аргументы командной строки или конфигурация запуска"""

    code = "UsageError"

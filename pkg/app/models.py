import enum


class Provenance(str, enum.Enum):
    THM1 = "thm1"
    THM2 = "thm2"
    CUSTOM = "custom"


class CoverMethod(str, enum.Enum):
    TRANSVERSAL = "transversal"
    COMMON_TRANSVERSAL = "common_transversal"
    GREEDY = "greedy"
    EXACT = "exact"
    ALL = "all"


class SearchMode(str, enum.Enum):
    EXACT = "exact"
    GREEDY = "greedy"


class OutputFormat(str, enum.Enum):
    JSON = "json"
    TEXT = "text"


class InstanceStatus(str, enum.Enum):
    COMPLETED = "completed"
    FAILED = "failed"


class ExitCode(int, enum.Enum):
    OK = 0
    CONFIG_ERROR = 1
    COUNTEREXAMPLE = 2
    BUDGET_EXCEEDED = 3

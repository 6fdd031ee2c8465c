from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, computed_field, model_validator
from sympy import isprime

from app.models import CoverMethod, InstanceStatus, OutputFormat, Provenance, SearchMode

REPORT_SCHEMA = "report_v1"


class GroupFile(BaseModel):
    """Формат файла пользовательской группы"""

    p: int
    order: int
    table: List[List[int]]
    name: str = "custom"


class RunConfig(BaseModel):
    command: str
    group: Optional[str] = None
    group_file: Optional[str] = None
    q: Optional[int] = None
    provenance: Provenance = Provenance.THM1
    ceiling: Optional[int] = None
    budget: Optional[int] = None
    method: CoverMethod = CoverMethod.ALL
    mode: SearchMode = SearchMode.EXACT
    pair: Optional[int] = None
    output: Optional[str] = None
    format: OutputFormat = OutputFormat.JSON

    @model_validator(mode="after")
    def check_combination(self):
        if self.provenance == Provenance.CUSTOM:
            raise ValueError("Из командной строки доступны только конструкции thm1 и thm2")
        if (self.group is None) == (self.group_file is None):
            raise ValueError("Укажите ровно одно из --group и --group-file")
        if self.provenance == Provenance.THM2 and self.q is not None:
            raise ValueError("Конструкция thm2 сама выбирает q; параметр --q недопустим")
        if self.provenance == Provenance.THM1 and self.q is None:
            raise ValueError("Для конструкции thm1 необходим параметр --q")
        return self


class ScanConfig(BaseModel):
    groups: List[str] = Field(default_factory=list)
    qs: List[int] = Field(default_factory=list)
    default_grid: bool = False
    provenance: Provenance = Provenance.THM1
    workers: int = 1
    ceiling: Optional[int] = None
    output: Optional[str] = None
    format: OutputFormat = OutputFormat.JSON

    @model_validator(mode="after")
    def check_combination(self):
        if self.provenance == Provenance.CUSTOM:
            raise ValueError("Сканирование поддерживает только thm1 и thm2")
        if self.provenance == Provenance.THM2 and self.qs:
            raise ValueError("Конструкция thm2 сама выбирает q; список --qs недопустим")
        if self.workers < 1:
            raise ValueError("Число процессов должно быть >= 1")
        if self.default_grid and (self.groups or self.qs):
            raise ValueError("--default-grid нельзя сочетать с --groups и --qs")
        return self


_RELATIONS = {
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    "==": lambda a, b: a == b,
}


class BoundCheck(BaseModel):
    name: str
    relation: Literal[">=", ">", "<=", "<", "==", "not_prime"]
    lhs: int
    rhs: int
    applicable: bool = True
    note: str = ""

    @computed_field
    @property
    def satisfied(self) -> bool:
        if self.relation == "not_prime":
            return not isprime(self.lhs)
        return _RELATIONS[self.relation](self.lhs, self.rhs)


class GheriCheck(BaseModel):
    lhs: int
    rhs: int

    @computed_field
    @property
    def satisfied(self) -> bool:
        return self.lhs >= self.rhs

    @computed_field
    @property
    def equality(self) -> bool:
        return self.lhs == self.rhs


class PClassEntry(BaseModel):
    x: int
    class_size: int
    centralizer_order: int
    contribution: int


class WitnessEntry(BaseModel):
    x: int
    vector: List[int]


class LambdaEntry(BaseModel):
    x: int
    class_size: int
    element_order: int
    centralizer_dim: int
    lam: int
    lam_enumerated: Optional[int] = None


class CoverSummary(BaseModel):
    method: CoverMethod
    size: int
    bound: Optional[int] = None
    verified: bool
    exhaustive_check: bool = False
    optimal: Optional[bool] = None
    note: str = ""
    representatives: Optional[List[List[int]]] = None


class CasoloEntry(BaseModel):
    subgroup: List[int]
    lam: int
    method: Literal["enumeration", "linear_algebra"]
    normalizer_index: int
    centralizer_order: int

    @computed_field
    @property
    def holds(self) -> bool:
        return self.lam * self.normalizer_index == self.centralizer_order


class CoverSubgroupEntry(BaseModel):
    """Размерность C_N(P_i) в сравнении с той, что заявлена для конструкции"""

    members: List[int]
    centralizer_dim: int
    expected_dim: int

    @computed_field
    @property
    def matches(self) -> bool:
        return self.centralizer_dim == self.expected_dim


class UnionRatioEntry(BaseModel):
    n: int
    # Фактически взято подгрупп: min(n, nu_p)
    sylows: int
    union_size: int
    p_elements: int
    exact: bool
    covers: bool
    note: str = ""

    @computed_field
    @property
    def ratio(self) -> str:
        return str(Fraction(self.union_size, self.p_elements))


class OracleSummary(BaseModel):
    p_elements_exhaustive: Optional[int] = None
    p_elements_agree: Optional[bool] = None
    sylow_union_is_p_elements: Optional[bool] = None
    redundancy_agrees: Optional[bool] = None
    lambda_agrees: Optional[bool] = None
    normalizer_agrees: Optional[bool] = None
    centralizer_agrees: Optional[bool] = None
    fingerprint: Optional[Dict[str, Any]] = None


class InstanceInfo(BaseModel):
    group: str
    p: int
    p_order: int
    provenance: Provenance
    q: Optional[int] = None
    characteristic: int
    dimension: int
    n_order: int
    g_order: int


class AnalysisReport(BaseModel):
    report_schema: str = REPORT_SCHEMA
    version: str
    config: Dict[str, Any]
    instance: InstanceInfo
    nu_p: int
    p_elements: int
    frobenius_multiplier: int
    p_element_classes: List[PClassEntry]
    redundant: bool
    witnesses: List[WitnessEntry] = Field(default_factory=list)
    lambdas: List[LambdaEntry] = Field(default_factory=list)
    cover_subgroups: List[CoverSubgroupEntry] = Field(default_factory=list)
    covers: List[CoverSummary] = Field(default_factory=list)
    restricted_cover_size: Optional[int] = None
    bounds: List[BoundCheck] = Field(default_factory=list)
    gheri: Optional[GheriCheck] = None
    casolo_verified: Optional[bool] = None
    casolo: List[CasoloEntry] = Field(default_factory=list)
    union_ratios: List[UnionRatioEntry] = Field(default_factory=list)
    oracles: Optional[OracleSummary] = None
    notes: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def findings(self) -> List[str]:
        """Проверки, чей провал противоречил бы доказанным утверждениям"""
        failed = [f"bound:{b.name}" for b in self.bounds if b.applicable and not b.satisfied]
        failed += [f"cover:{c.method.value}" for c in self.covers if not c.verified]
        if self.gheri is not None and not self.gheri.satisfied:
            failed.append("gheri")
        if self.casolo_verified is False:
            failed.append("casolo")
        if self.oracles is not None:
            for name in (
                "p_elements_agree",
                "sylow_union_is_p_elements",
                "redundancy_agrees",
                "lambda_agrees",
                "normalizer_agrees",
                "centralizer_agrees",
            ):
                if getattr(self.oracles, name) is False:
                    failed.append(f"oracle:{name}")
        return failed


class CoverReport(BaseModel):
    """Результат команды cover: покрытия с представителями"""

    report_schema: str = REPORT_SCHEMA
    version: str
    config: Dict[str, Any]
    instance: InstanceInfo
    nu_p: int
    p_elements: int
    covers: List[CoverSummary] = Field(default_factory=list)
    common_transversal: Optional[List[List[int]]] = None
    bounds: List[BoundCheck] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def findings(self) -> List[str]:
        failed = [f"bound:{b.name}" for b in self.bounds if b.applicable and not b.satisfied]
        failed += [f"cover:{c.method.value}" for c in self.covers if not c.verified]
        return failed


class TableRow(BaseModel):
    p: int
    q: int
    exponent: int
    value: int
    prime_form: str


class TableReport(BaseModel):
    report_schema: str = REPORT_SCHEMA
    version: str
    pmax: int
    rows: List[TableRow]


class ScanEntry(BaseModel):
    group: str
    q: Optional[int] = None
    provenance: Provenance
    status: InstanceStatus
    p: Optional[int] = None
    nu_p: Optional[int] = None
    p_elements: Optional[int] = None
    redundant: Optional[bool] = None
    findings: List[str] = Field(default_factory=list)
    error: Optional[str] = None


class ScanMinimum(BaseModel):
    p: int
    nu_p: int
    group: str
    q: Optional[int] = None


class ScanReport(BaseModel):
    report_schema: str = REPORT_SCHEMA
    version: str
    config: Dict[str, Any]
    entries: List[ScanEntry]
    minima: List[ScanMinimum]


class ErrorResponse(BaseModel):
    error: str
    message: str
    exit_code: int
    details: Dict[str, Any] = Field(default_factory=dict)

import pytest
from pydantic import ValidationError

from app.models import CoverMethod, Provenance
from app.schemas import (
    AnalysisReport,
    BoundCheck,
    CasoloEntry,
    CoverReport,
    CoverSummary,
    GheriCheck,
    InstanceInfo,
    RunConfig,
    ScanConfig,
    UnionRatioEntry,
)


def _instance():
    return InstanceInfo(
        group="C2^2", p=2, p_order=4, provenance=Provenance.THM1, q=3,
        characteristic=3, dimension=3, n_order=27, g_order=108,
    )


def test_run_config_thm1():
    """Тест корректной конфигурации thm1"""
    run = RunConfig(command="verify", group="C2^2", q=3)
    assert run.provenance == Provenance.THM1
    assert run.method == CoverMethod.ALL


def test_run_config_thm1_requires_q():
    with pytest.raises(ValidationError):
        RunConfig(command="verify", group="C2^2")


def test_run_config_thm2_forbids_q():
    with pytest.raises(ValidationError):
        RunConfig(command="verify", group="C2^2", q=3, provenance=Provenance.THM2)


def test_run_config_requires_one_group_source():
    with pytest.raises(ValidationError):
        RunConfig(command="verify", q=3)
    with pytest.raises(ValidationError):
        RunConfig(command="verify", group="C2^2", group_file="g.json", q=3)


def test_run_config_rejects_custom():
    with pytest.raises(ValidationError):
        RunConfig(command="verify", group="C2^2", q=3, provenance=Provenance.CUSTOM)


def test_scan_config_validation():
    assert ScanConfig(default_grid=True).default_grid
    with pytest.raises(ValidationError):
        ScanConfig(default_grid=True, groups=["C2^2"])
    with pytest.raises(ValidationError):
        ScanConfig(groups=["C2^2"], qs=[3], provenance=Provenance.THM2)
    with pytest.raises(ValidationError):
        ScanConfig(groups=["C2^2"], qs=[3], workers=0)


@pytest.mark.parametrize(
    "relation,lhs,rhs,expected",
    [(">=", 27, 27, True), (">", 27, 27, False), ("<=", 3, 4, True), ("==", 1, 2, False), ("not_prime", 27, 0, True), ("not_prime", 13, 0, False)],
)
def test_bound_check(relation, lhs, rhs, expected):
    assert BoundCheck(name="b", relation=relation, lhs=lhs, rhs=rhs).satisfied is expected


def test_bound_check_serializes_satisfied():
    data = BoundCheck(name="b", relation=">=", lhs=2, rhs=1).model_dump()
    assert data["satisfied"] is True


def test_gheri_check():
    check = GheriCheck(lhs=729, rhs=729)
    assert check.satisfied and check.equality
    assert not GheriCheck(lhs=1, rhs=2).satisfied


def test_casolo_entry():
    assert CasoloEntry(subgroup=[0, 1], lam=3, method="enumeration", normalizer_index=1, centralizer_order=3).holds
    assert not CasoloEntry(subgroup=[0, 1], lam=2, method="enumeration", normalizer_index=1, centralizer_order=3).holds


def test_union_ratio_entry():
    entry = UnionRatioEntry(n=1, sylows=1, union_size=4, p_elements=28, exact=True, covers=False)
    assert entry.ratio == "1/7"


def test_analysis_report_findings():
    report = AnalysisReport(
        version="1.0.0", config={}, instance=_instance(), nu_p=27, p_elements=28,
        frobenius_multiplier=7, p_element_classes=[], redundant=True,
        bounds=[
            BoundCheck(name="ok", relation=">=", lhs=27, rhs=7),
            BoundCheck(name="bad", relation=">=", lhs=1, rhs=7),
            BoundCheck(name="skipped", relation=">=", lhs=1, rhs=7, applicable=False),
        ],
        covers=[CoverSummary(method=CoverMethod.GREEDY, size=12, verified=False)],
        gheri=GheriCheck(lhs=1, rhs=2),
        casolo_verified=False,
    )
    assert report.findings == ["bound:bad", "cover:greedy", "gheri", "casolo"]


def test_cover_report_findings_empty():
    report = CoverReport(
        version="1.0.0", config={}, instance=_instance(), nu_p=27, p_elements=28,
        covers=[CoverSummary(method=CoverMethod.EXACT, size=9, verified=True, optimal=True)],
    )
    assert report.findings == []
    assert "findings" in report.model_dump()

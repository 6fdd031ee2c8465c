"""
Сквозные сценарии на эталонных экземплярах: значения nu_p, |G_p|, lambda и размеры покрытий
"""
import pytest

from app.config import settings
from app.models import CoverMethod, Provenance, SearchMode
from app.schemas import RunConfig, ScanConfig
from app.services import pipeline
from app.services.analysis import SylowAnalyzer


def _run(command, group, q=None, provenance=Provenance.THM1, **kwargs):
    return RunConfig(command=command, group=group, q=q, provenance=provenance, **kwargs)


@pytest.mark.parametrize(
    "group,q,nu,p_elements,g_order",
    [
        ("C2^2", 3, 27, 28, 108),
        ("C2^2", 5, 125, 76, 500),
        ("C3^2", 2, 256, 513, 2304),
    ],
)
def test_thm1_counts(group, q, nu, p_elements, g_order):
    report = pipeline.run_construct(_run("construct", group, q), settings)
    assert report.nu_p == nu
    assert report.p_elements == p_elements
    assert report.instance.g_order == g_order
    assert report.redundant
    assert report.findings == []


def test_thm1_q5_lambdas_and_gheri():
    report = pipeline.run_gheri(_run("gheri", "C2^2", 5), settings)
    assert report.frobenius_multiplier == 19
    assert [e.lam for e in report.lambdas] == [125, 5, 5, 5]
    assert (report.gheri.lhs, report.gheri.rhs) == (15625, 15625)


@pytest.mark.parametrize("group,q,nu", [("C2^2", 3, 27), ("Q8", 3, 27), ("C3^2", 4, 256)])
def test_thm2_tight(group, q, nu):
    report = pipeline.run_construct(_run("construct", group, provenance=Provenance.THM2), settings)
    assert report.instance.q == q
    assert report.nu_p == nu
    tight = next(b for b in report.bounds if b.name == "thm2_tight")
    assert tight.satisfied
    assert all(entry.matches for entry in report.cover_subgroups)


def test_thm1_q5_covers():
    """Трансверсали дают не более 75 подгрупп, общие трансверсали - не более 50"""
    run = _run("cover", "C2^2", 5, method=CoverMethod.ALL, mode=SearchMode.GREEDY)
    report = pipeline.run_cover(run, settings)
    sizes = {c.method: c.size for c in report.covers}
    assert sizes[CoverMethod.TRANSVERSAL] <= 75
    assert sizes[CoverMethod.COMMON_TRANSVERSAL] <= 50
    assert all(c.verified for c in report.covers)
    assert report.findings == []


def test_thm1_q7_exact_cover():
    """Точный поиск укладывается в бюджет: жадное покрытие строится рядом, а не вместо"""
    report = pipeline.run_cover(_run("cover", "C2^2", 7), settings)
    sizes = {c.method: c.size for c in report.covers}
    assert sizes[CoverMethod.EXACT] == 49
    assert sizes[CoverMethod.EXACT] <= sizes[CoverMethod.GREEDY] <= sizes[CoverMethod.COMMON_TRANSVERSAL]
    assert not any(note.startswith("exact:") for note in report.notes)
    assert report.findings == []


def test_thm2_c3sq_cover_falls_back_to_greedy():
    """|G_3| = 513 вне бюджета точного поиска: строится жадное покрытие с пометкой"""
    run = _run("cover", "C3^2", provenance=Provenance.THM2)
    report = pipeline.run_cover(run, settings)
    methods = [c.method for c in report.covers]
    assert CoverMethod.GREEDY in methods
    assert any(note.startswith("exact:") for note in report.notes)
    improved = next(c for c in report.covers if c.method == CoverMethod.COMMON_TRANSVERSAL)
    assert improved.size <= 128


def test_verify_thm1_q3():
    report = pipeline.run_verify(_run("verify", "C2^2", 3), settings)
    assert report.findings == []
    assert report.oracles.redundancy_agrees
    exact = next(c for c in report.covers if c.method == CoverMethod.EXACT)
    assert exact.size == 9 and exact.optimal


def test_verify_computes_redundancy_once(monkeypatch):
    calls = []
    original = SylowAnalyzer.is_redundant

    def counted(self, G):
        calls.append(G)
        return original(self, G)

    monkeypatch.setattr(SylowAnalyzer, "is_redundant", counted)
    report = pipeline.run_verify(_run("verify", "C2^2", 3), settings)
    assert len(calls) == 1
    assert report.redundant


def test_table_rows():
    report = pipeline.run_table(29)
    forms = [row.prime_form for row in report.rows]
    assert "2^8" in forms and "2^24" in forms and "3^42" in forms and "103^18" in forms
    assert [(r.p, r.q, r.value) for r in pipeline.run_table(2).rows] == [(2, 3, 27)]


def test_default_grids():
    assert pipeline.scan_grid(ScanConfig(default_grid=True)) == pipeline.DEFAULT_THM1_GRID
    thm2 = pipeline.scan_grid(ScanConfig(default_grid=True, provenance=Provenance.THM2))
    assert [g for g, _ in thm2] == pipeline.DEFAULT_THM2_GRID


def test_scan_minima_per_prime():
    scan = ScanConfig(groups=["C2^2", "C3^2"], provenance=Provenance.THM2)
    report = pipeline.run_scan(scan, settings)
    assert [(m.p, m.nu_p) for m in report.minima] == [(2, 27), (3, 256)]


DEFAULT_GRID = [(Provenance.THM1, g, q) for g, q in pipeline.DEFAULT_THM1_GRID] + [
    (Provenance.THM2, g, None) for g in pipeline.DEFAULT_THM2_GRID
]


@pytest.mark.slow
@pytest.mark.parametrize("provenance,group,q", DEFAULT_GRID)
def test_default_grid_verifies(provenance, group, q):
    """Все проверки сетки по умолчанию проходят; при nu_p <= 10^4 критерий избыточности сверяется с перебором"""
    report = pipeline.run_verify(_run("verify", group, q, provenance=provenance), settings)
    assert report.findings == []
    assert report.casolo_verified
    if report.nu_p <= 10 ** 4:
        assert report.oracles.redundancy_agrees is True
    if report.oracles.p_elements_agree is not None:
        assert report.oracles.p_elements_agree

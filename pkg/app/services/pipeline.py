"""
Сценарии команд: построение экземпляра, анализ и сборка отчетов.
"""
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, NamedTuple, Optional, Tuple
import logging
import time

import numpy as np

from app import __version__
from app.config import Settings
from app.dependencies import get_analyzer
from app.exceptions import ExactBudgetExceeded, SylowToolError, TooLargeToEnumerate
from app.metrics import (
    increment_check_failures,
    increment_instances_processed,
    observe_instance_duration,
    set_instances_in_queue,
)
from app.models import CoverMethod, InstanceStatus, Provenance, SearchMode
from app.schemas import (
    AnalysisReport,
    BoundCheck,
    CoverReport,
    InstanceInfo,
    RunConfig,
    ScanConfig,
    ScanEntry,
    ScanMinimum,
    ScanReport,
    TableReport,
)
from app.services.analysis import RedundancyResult, SylowAnalyzer, SylowCover
from app.services.construction import power_table, thm1_action, thm2_action
from app.services.pgroup import PGroup, catalog, load_group_file
from app.services.semidirect import PElementCount, SemidirectGroup

logger = logging.getLogger(__name__)

DEFAULT_THM1_GRID: List[Tuple[str, int]] = [
    ("C2^2", 3),
    ("C2^2", 5),
    ("C2^2", 7),
    ("C4xC2", 3),
    ("D8", 3),
    ("Q8", 3),
    ("C3^2", 2),
]
DEFAULT_THM2_GRID: List[str] = ["C2^2", "Q8", "D8", "C4xC2", "C3^2", "Heis3", "C9xC3"]

UNION_SIZES = (1, 2, 3, 4)


def load_group(name: Optional[str] = None, path: Optional[str] = None) -> PGroup:
    return load_group_file(path) if path is not None else catalog(name)


def build_instance(group: PGroup, provenance: Provenance, q: Optional[int], config: Settings) -> SemidirectGroup:
    if provenance == Provenance.THM1:
        action = thm1_action(group, q, config)
    else:
        action = thm2_action(group, config)
    return SemidirectGroup(action, config)


def instance_info(G: SemidirectGroup) -> InstanceInfo:
    return InstanceInfo(
        group=G.group.name,
        p=G.group.p,
        p_order=G.group.order,
        provenance=G.action.provenance,
        q=G.action.params.get("q"),
        characteristic=G.field.characteristic,
        dimension=G.dim,
        n_order=G.n_order,
        g_order=G.order,
    )


def resolved_config(run: Any, config: Settings) -> Dict[str, Any]:
    return {"run": run.model_dump(mode="json"), "settings": config.model_dump(mode="json")}


def _record_metrics(findings: List[str], started: float, status: InstanceStatus = InstanceStatus.COMPLETED):
    observe_instance_duration(time.time() - started)
    increment_instances_processed(status.value)
    for finding in findings:
        increment_check_failures(finding)


class CoreAnalysis(NamedTuple):
    report: AnalysisReport
    redundancy: RedundancyResult
    p_count: PElementCount


def _core_analysis(G: SemidirectGroup, analyzer: SylowAnalyzer, run: Any, config: Settings) -> CoreAnalysis:
    """Избыточность, nu_p, |G_p|, lambda, неравенство Гери и оценки"""
    redundancy = analyzer.is_redundant(G)
    p_count = G.count_p_elements()
    lambdas = analyzer.lambdas(G)
    gheri = analyzer.check_gheri(G, lambdas)
    bounds = analyzer.check_bounds(G, redundancy, p_count, gheri=gheri, lambdas=lambdas)
    notes = []
    cover_subgroups = []
    if G.action.provenance in (Provenance.THM1, Provenance.THM2):
        cover_subgroups = analyzer.cover_subgroup_entries(G)
        for entry in cover_subgroups:
            if not entry.matches:
                notes.append(
                    f"dim C_N(P_i) = {entry.centralizer_dim} при заявленной {entry.expected_dim} "
                    f"для P_i = {entry.members}"
                )
    if redundancy.blocking is not None:
        notes.append(f"C_N(x) = C_N(P) для x = {redundancy.blocking}: P не избыточна")
    report = AnalysisReport(
        version=__version__,
        config=resolved_config(run, config),
        instance=instance_info(G),
        nu_p=G.sylow_count(),
        p_elements=p_count.total,
        frobenius_multiplier=p_count.frobenius_multiplier,
        p_element_classes=p_count.classes,
        redundant=redundancy.redundant,
        witnesses=redundancy.witnesses,
        lambdas=lambdas,
        cover_subgroups=cover_subgroups,
        bounds=bounds,
        gheri=gheri,
        notes=notes,
    )
    return CoreAnalysis(report, redundancy, p_count)


def _core_report(G: SemidirectGroup, analyzer: SylowAnalyzer, run: Any, config: Settings) -> AnalysisReport:
    return _core_analysis(G, analyzer, run, config).report


def _build_from_run(run: RunConfig, config: Settings) -> SemidirectGroup:
    group = load_group(run.group, run.group_file)
    return build_instance(group, run.provenance, run.q, config)


def run_construct(run: RunConfig, config: Settings) -> AnalysisReport:
    started = time.time()
    G = _build_from_run(run, config)
    report = _core_report(G, get_analyzer(config), run, config)
    _record_metrics(report.findings, started)
    logger.info(f"Экземпляр {G} построен: nu_p = {report.nu_p}, избыточна = {report.redundant}")
    return report


def _exact_cover(
    G: SemidirectGroup,
    analyzer: SylowAnalyzer,
    incumbent: Optional[SylowCover],
    notes: List[str],
) -> Optional[SylowCover]:
    try:
        return analyzer.minimal_cover(G, SearchMode.EXACT, incumbent=incumbent)
    except ExactBudgetExceeded as e:
        logger.warning(f"Точный поиск покрытия вне бюджета, используется жадный: {e.message}")
        notes.append(f"exact: {e.message}; вместо точного покрытия построено жадное")
        return None


def _covers(
    G: SemidirectGroup,
    analyzer: SylowAnalyzer,
    method: CoverMethod,
    mode: SearchMode,
    notes: List[str],
) -> List[SylowCover]:
    covers: List[SylowCover] = []
    structured = G.action.provenance in (Provenance.THM1, Provenance.THM2)
    improved = None
    try:
        if structured and method in (CoverMethod.ALL, CoverMethod.TRANSVERSAL):
            covers.append(analyzer.transversal_cover(G))
        if structured and method in (CoverMethod.ALL, CoverMethod.COMMON_TRANSVERSAL):
            improved = analyzer.improved_cover(G)
            covers.append(improved)
    except TooLargeToEnumerate as e:
        logger.warning(f"Покрытие трансверсалями пропущено: {e.message}")
        notes.append(f"transversal: {e.message}")
    try:
        if method == CoverMethod.ALL:
            greedy = analyzer.minimal_cover(G, SearchMode.GREEDY)
            exact = _exact_cover(G, analyzer, improved, notes) if mode == SearchMode.EXACT else None
            if exact is not None:
                covers.append(exact)
            covers.append(greedy)
        elif method == CoverMethod.EXACT:
            exact = _exact_cover(G, analyzer, None, notes)
            covers.append(exact if exact is not None else analyzer.minimal_cover(G, SearchMode.GREEDY))
        elif method == CoverMethod.GREEDY:
            covers.append(analyzer.minimal_cover(G, SearchMode.GREEDY))
    except TooLargeToEnumerate as e:
        logger.warning(f"Минимальное покрытие пропущено: {e.message}")
        notes.append(f"minimal: {e.message}")
    return covers


def run_verify(run: RunConfig, config: Settings) -> AnalysisReport:
    """Полный набор проверок"""
    started = time.time()
    G = _build_from_run(run, config)
    analyzer = get_analyzer(config)
    report, redundancy, p_count = _core_analysis(G, analyzer, run, config)
    notes = list(report.notes)

    restricted = None
    try:
        restricted = analyzer.restricted_minimal_cover(G)
    except (TooLargeToEnumerate, ExactBudgetExceeded) as e:
        logger.warning(f"Ограниченное покрытие пропущено: {e.message}")
        notes.append(f"restricted: {e.message}")

    covers = _covers(G, analyzer, run.method, run.mode, notes)
    bounds = analyzer.check_bounds(G, redundancy, p_count, report.gheri, report.lambdas, restricted)
    bounds += analyzer.cover_bounds(G, covers)

    casolo_verified, casolo = analyzer.check_casolo(G)

    union_ratios = []
    if G.sylow_count() <= config.greedy_sylow_budget:
        union_ratios = [analyzer.union_ratio(G, n, run.mode) for n in UNION_SIZES if n <= G.sylow_count()]
    else:
        notes.append(f"union: nu_p = {G.sylow_count()} превышает бюджет {config.greedy_sylow_budget}")

    report = report.model_copy(
        update={
            "restricted_cover_size": restricted,
            "covers": [c.summary() for c in covers],
            "bounds": bounds,
            "casolo_verified": casolo_verified,
            "casolo": casolo,
            "union_ratios": union_ratios,
            "oracles": analyzer.oracles(G, p_count, redundancy, report.lambdas),
            "notes": notes,
        }
    )
    _record_metrics(report.findings, started)
    logger.info(
        f"Проверка {G} завершена за {time.time() - started:.2f} с, находок: {len(report.findings)}"
    )
    return report


def run_cover(run: RunConfig, config: Settings) -> CoverReport:
    started = time.time()
    G = _build_from_run(run, config)
    analyzer = get_analyzer(config)
    notes: List[str] = []
    common = None
    covers: List[SylowCover] = []
    bounds: List[BoundCheck] = []
    if run.pair is not None:
        T = analyzer.common_transversal(G, run.pair)
        common = T.tolist()
        subspaces = analyzer.cover_subspaces(G)
        for j in (2 * run.pair - 1, 2 * run.pair):
            N_j = subspaces[j - 1]
            distinct = np.unique(N_j.reduce(T), axis=0).shape[0]
            bounds.append(BoundCheck(name=f"pair_{run.pair}_hits_N{j}", relation="==", lhs=distinct, rhs=N_j.index()))
        bounds.append(
            BoundCheck(name=f"pair_{run.pair}_size", relation="==", lhs=T.shape[0], rhs=subspaces[2 * run.pair - 2].index())
        )
    else:
        covers = _covers(G, analyzer, run.method, run.mode, notes)
        bounds = analyzer.cover_bounds(G, covers)
    report = CoverReport(
        version=__version__,
        config=resolved_config(run, config),
        instance=instance_info(G),
        nu_p=G.sylow_count(),
        p_elements=G.count_p_elements().total,
        covers=[c.summary(with_representatives=True) for c in covers],
        common_transversal=common,
        bounds=bounds,
        notes=notes,
    )
    _record_metrics(report.findings, started)
    return report


def run_casolo(run: RunConfig, config: Settings) -> AnalysisReport:
    started = time.time()
    G = _build_from_run(run, config)
    analyzer = get_analyzer(config)
    report = _core_report(G, analyzer, run, config)
    holds, entries = analyzer.check_casolo(G)
    report = report.model_copy(update={"casolo_verified": holds, "casolo": entries})
    _record_metrics(report.findings, started)
    return report


def run_gheri(run: RunConfig, config: Settings) -> AnalysisReport:
    started = time.time()
    G = _build_from_run(run, config)
    report = _core_report(G, get_analyzer(config), run, config)
    _record_metrics(report.findings, started)
    return report


def run_table(pmax: int) -> TableReport:
    return TableReport(version=__version__, pmax=pmax, rows=power_table(pmax))


def scan_grid(scan: ScanConfig) -> List[Tuple[str, Optional[int]]]:
    """Точки сетки в порядке вывода"""
    if scan.provenance == Provenance.THM1:
        if scan.default_grid:
            return list(DEFAULT_THM1_GRID)
        return [(g, q) for g in scan.groups for q in scan.qs]
    if scan.default_grid:
        return [(g, None) for g in DEFAULT_THM2_GRID]
    return [(g, None) for g in scan.groups]


def _scan_instance(args: Tuple[str, Optional[int], Provenance, Settings]) -> Tuple[ScanEntry, float]:
    name, q, provenance, config = args
    started = time.time()
    try:
        G = build_instance(catalog(name), provenance, q, config)
        run = RunConfig(command="scan", group=name, q=q, provenance=provenance)
        report = _core_report(G, get_analyzer(config), run, config)
        entry = ScanEntry(
            group=name,
            q=report.instance.q,
            provenance=provenance,
            status=InstanceStatus.COMPLETED,
            p=report.instance.p,
            nu_p=report.nu_p,
            p_elements=report.p_elements,
            redundant=report.redundant,
            findings=report.findings,
        )
    except SylowToolError as e:
        logger.error(f"Экземпляр ({name}, q={q}) не обработан: {e.message}")
        entry = ScanEntry(group=name, q=q, provenance=provenance, status=InstanceStatus.FAILED, error=f"{e.code}: {e.message}")
    return entry, time.time() - started


def run_scan(scan: ScanConfig, config: Settings) -> ScanReport:
    grid = scan_grid(scan)
    set_instances_in_queue(len(grid))
    tasks = [(name, q, scan.provenance, config) for name, q in grid]
    if scan.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=scan.workers) as executor:
            results = list(executor.map(_scan_instance, tasks))
    else:
        results = []
        for task in tasks:
            results.append(_scan_instance(task))
            set_instances_in_queue(len(tasks) - len(results))
    set_instances_in_queue(0)

    entries = []
    for entry, duration in results:
        observe_instance_duration(duration)
        increment_instances_processed(entry.status.value)
        for finding in entry.findings:
            increment_check_failures(finding)
        entries.append(entry)

    minima: Dict[int, ScanMinimum] = {}
    for entry in entries:
        if entry.status != InstanceStatus.COMPLETED or not entry.redundant:
            continue
        best = minima.get(entry.p)
        if best is None or entry.nu_p < best.nu_p:
            minima[entry.p] = ScanMinimum(p=entry.p, nu_p=entry.nu_p, group=entry.group, q=entry.q)
    logger.info(f"Сканирование завершено: {len(entries)} экземпляров")
    return ScanReport(
        version=__version__,
        config=resolved_config(scan, config),
        entries=entries,
        minima=[minima[p] for p in sorted(minima)],
    )

"""
Проверки для G = N x| P: избыточность P, покрытия G_p силовскими
подгруппами, тождество Казоло, неравенство Гери и набор численных оценок.
"""
from math import ceil
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging

import numpy as np

from app.config import Settings, settings as default_settings
from app.exceptions import (
    ExactBudgetExceeded,
    IndexMismatch,
    InternalError,
    MatchingFailed,
    TooLargeToEnumerate,
    WrongProvenance,
)
from app.models import CoverMethod, Provenance, SearchMode
from app.schemas import (
    BoundCheck,
    CasoloEntry,
    CoverSubgroupEntry,
    CoverSummary,
    GheriCheck,
    LambdaEntry,
    OracleSummary,
    UnionRatioEntry,
    WitnessEntry,
)
from app.services.construction import fixed_space_lower_bound, smallest_prime_power_1modp
from app.services.finite_field import MatrixGF, Subspace, encode_vectors
from app.services.matching import BipartiteGraph, maximum_matching
from app.services.semidirect import PElementCount, SemidirectGroup
from app.services import set_cover

logger = logging.getLogger(__name__)


class SylowCover:
    """Набор сопрягающих векторов t; покрытие - {tPt^-1 : t из T}"""

    def __init__(
        self,
        representatives: np.ndarray,
        method: CoverMethod,
        bound: Optional[int] = None,
        optimal: Optional[bool] = None,
        note: str = "",
    ):
        self.representatives = np.asarray(representatives, dtype=np.int64)
        self.method = method
        self.bound = bound
        self.optimal = optimal
        self.note = note
        self.verified = False
        self.exhaustive_check = False

    @property
    def size(self) -> int:
        return int(self.representatives.shape[0])

    def summary(self, with_representatives: bool = False) -> CoverSummary:
        return CoverSummary(
            method=self.method,
            size=self.size,
            bound=self.bound,
            verified=self.verified,
            exhaustive_check=self.exhaustive_check,
            optimal=self.optimal,
            note=self.note,
            representatives=self.representatives.tolist() if with_representatives else None,
        )


class RedundancyResult(NamedTuple):
    redundant: bool
    witnesses: List[WitnessEntry]
    blocking: Optional[int]


class SylowTable:
    """
    Перечисленные силовские подгруппы и их элементы.

    codes[s, y] - код элемента с P-частью y в s-й подгруппе; universe - отсортированные
    коды G_p (объединение всех силовских подгрупп); index[s, y] - позиция в universe.
    """

    def __init__(self, G: SemidirectGroup, ceiling: int):
        self.representatives = G.enumerate_sylows(ceiling)
        ell = G.field.characteristic
        T = self.representatives
        codes = np.zeros((T.shape[0], G.group.order), dtype=np.int64)
        for y in range(G.group.order):
            parts = (T - T @ G.action.matrices[y].T) % ell
            codes[:, y] = encode_vectors(G.field, parts) * G.group.order + y
        self.codes = codes
        self.universe = np.unique(codes)
        self.index = np.searchsorted(self.universe, codes)
        self._rep_codes = encode_vectors(G.field, T)
        self.fixed = G.fixed_subspace

    @property
    def count(self) -> int:
        return int(self.representatives.shape[0])

    def masks(self) -> List[int]:
        size = self.universe.shape[0]
        masks = []
        for row in self.index:
            bits = np.zeros(size, dtype=bool)
            bits[row] = True
            masks.extend(set_cover.masks_from_rows(bits[None, :]))
        return masks

    def positions(self, vectors) -> np.ndarray:
        """Номера силовских подгрупп tPt^-1 для векторов t"""
        reduced = self.fixed.reduce(np.asarray(vectors, dtype=np.int64).reshape(-1, self.fixed.ambient_dim))
        return np.searchsorted(self._rep_codes, encode_vectors(self.fixed.field, reduced))


def _unique_rows(vectors: np.ndarray) -> np.ndarray:
    """Уникальные строки в порядке первого появления"""
    if vectors.shape[0] == 0:
        return vectors
    _, first = np.unique(vectors, axis=0, return_index=True)
    return vectors[np.sort(first)]


class SylowAnalyzer:
    """
    Сервис анализа силовских подгрупп группы N x| P.

    Args:
        config: настройки с потолками перебора и бюджетами точного поиска
    """

    def __init__(self, config: Optional[Settings] = None):
        self.config = config or default_settings
        self._tables: Dict[int, Tuple[SemidirectGroup, SylowTable]] = {}

    def sylow_table(self, G: SemidirectGroup, ceiling: Optional[int] = None) -> SylowTable:
        ceiling = self.config.enumeration_ceiling if ceiling is None else ceiling
        cached = self._tables.get(id(G))
        if cached is not None and cached[0] is G:
            return cached[1]
        table = SylowTable(G, ceiling)
        self._tables[id(G)] = (G, table)
        return table

    def _oracle_sylows(self, G: SemidirectGroup) -> Optional[SylowTable]:
        if G.sylow_count() > self.config.redundancy_oracle_limit:
            return None
        return self.sylow_table(G)

    # --- избыточность ---

    def is_redundant(self, G: SemidirectGroup) -> RedundancyResult:
        """P избыточна тогда и только тогда, когда C_N(x) > C_N(P) для всех x из P"""
        fixed = G.fixed_subspace
        blocking = None
        for x in range(G.group.order):
            if G.centralizer_in_N(x).dimension == fixed.dimension:
                blocking = x
                break
        if blocking is not None:
            return RedundancyResult(False, [], blocking)
        witnesses = []
        for x, _ in G.group.class_representatives():
            basis = G.centralizer_in_N(x).basis
            w = next(v for v in basis if not fixed.contains(v))
            witnesses.append(WitnessEntry(x=x, vector=w.tolist()))
        return RedundancyResult(True, witnesses, None)

    def redundancy_oracle(self, G: SemidirectGroup) -> Optional[bool]:
        """Объединение силовских подгрупп, отличных от P, совпадает с G_p"""
        table = self._oracle_sylows(G)
        if table is None:
            return None
        others = np.unique(table.codes[1:]) if table.count > 1 else np.zeros(0, dtype=np.int64)
        return bool(np.array_equal(others, table.universe))

    # --- покрытия ---

    def verify_cover(self, G: SemidirectGroup, cover: SylowCover) -> SylowCover:
        """
        Критерий смежных классов: для каждого x из P векторы T попадают во все
        смежные классы C_N(x). При |G| <= oracle_group_limit дополнительно
        проверяется поэлементно.
        """
        T = cover.representatives
        verified = True
        for x in range(G.group.order):
            centralizer = G.centralizer_in_N(x)
            hit = np.unique(centralizer.reduce(T), axis=0).shape[0] if T.shape[0] else 0
            if hit != centralizer.index():
                logger.error(f"Покрытие {cover.method.value} не задевает все классы C_N({x}): {hit} из {centralizer.index()}")
                verified = False
                break
        cover.verified = verified
        if G.order <= self.config.oracle_group_limit:
            p_elements = G.p_element_codes()
            covered = np.unique(np.concatenate([G.sylow_element_codes(t) for t in T])) if T.shape[0] else T[:0, 0]
            cover.exhaustive_check = True
            if not np.isin(p_elements, covered).all():
                logger.error(f"Переборная проверка покрытия {cover.method.value} не пройдена")
                cover.verified = False
            elif not verified:
                raise InternalError("Критерий смежных классов и перебор расходятся")
        return cover

    def cover_subspaces(self, G: SemidirectGroup) -> List[Subspace]:
        """N_i = C_N(P_i) для подгрупп покрытия P_1, ..., P_{p+1}"""
        action = G.action
        if action.provenance not in (Provenance.THM1, Provenance.THM2) or action.cover is None:
            raise WrongProvenance(
                f"Покрытие трансверсалями требует конструкции thm1 или thm2, а не {action.provenance.value}"
            )
        return [action.fixed_space_of(sub.members) for sub in action.cover]

    def cover_subgroup_entries(self, G: SemidirectGroup) -> List[CoverSubgroupEntry]:
        expected = G.action.expected_cover_dimension()
        return [
            CoverSubgroupEntry(members=list(sub.members), centralizer_dim=N_i.dimension, expected_dim=expected)
            for sub, N_i in zip(G.action.cover, self.cover_subspaces(G))
        ]

    def _transversal(self, subspace: Subspace) -> np.ndarray:
        if subspace.index() > self.config.enumeration_ceiling:
            raise TooLargeToEnumerate(
                f"Индекс {subspace.index()} превышает потолок перечисления {self.config.enumeration_ceiling}"
            )
        return subspace.transversal()

    def transversal_cover(self, G: SemidirectGroup) -> SylowCover:
        """T = T_1 + ... + T_{p+1}, T_i - лексикографически наименьшие представители классов N_i"""
        subspaces = self.cover_subspaces(G)
        T = _unique_rows(np.concatenate([self._transversal(N_i) for N_i in subspaces]))
        bound = (G.group.p + 1) * max(N_i.index() for N_i in subspaces)
        return self.verify_cover(G, SylowCover(T, CoverMethod.TRANSVERSAL, bound=bound))

    def common_transversal_of(self, G: SemidirectGroup, A: Subspace, B: Subspace) -> np.ndarray:
        """Общая трансверсаль классов A и B через совершенное паросочетание"""
        if A.index() != B.index():
            raise IndexMismatch(f"Индексы подпространств различны: {A.index()} и {B.index()}")
        reps_a, reps_b = self._transversal(A), self._transversal(B)
        S = A.sum(B)
        labels_a = encode_vectors(G.field, S.reduce(reps_a)).tolist()
        labels_b = encode_vectors(G.field, S.reduce(reps_b)).tolist()
        by_label: Dict[int, List[int]] = {}
        for j, label in enumerate(labels_b):
            by_label.setdefault(label, []).append(j)
        m = len(labels_a)
        graph = BipartiteGraph(m, m, [by_label.get(label, []) for label in labels_a])
        matching = maximum_matching(graph)
        if len(matching) != m:
            logger.error(f"Паросочетание неполное: {len(matching)} из {m}")
            raise MatchingFailed(
                f"Нет совершенного паросочетания классов: найдено {len(matching)} из {m}",
                matched=len(matching),
                needed=m,
            )

        field = G.field
        system = MatrixGF(field, np.concatenate([A.basis.T, field.neg(B.basis.T)], axis=1))
        points = np.zeros((m, G.dim), dtype=np.int64)
        for u, v in matching:
            c = system.solve_right(field.sub(reps_b[v], reps_a[u]))
            if c is None:
                raise InternalError(f"Классы {u} и {v} соединены ребром, но не пересекаются")
            points[u] = (reps_a[u] + c[: A.dimension] @ A.basis) % field.characteristic
        return points

    def common_transversal(self, G: SemidirectGroup, i: int) -> np.ndarray:
        """Общая трансверсаль пары (N_{2i-1}, N_{2i}), нумерация пар с 1"""
        subspaces = self.cover_subspaces(G)
        if i < 1 or 2 * i > len(subspaces):
            raise IndexMismatch(f"Пары с номером {i} нет: подгрупп покрытия {len(subspaces)}")
        return self.common_transversal_of(G, subspaces[2 * i - 2], subspaces[2 * i - 1])

    def improved_cover(self, G: SemidirectGroup) -> SylowCover:
        """Общие трансверсали для пар (N_1, N_2), (N_3, N_4), ...; непарная N_j - обычная трансверсаль"""
        subspaces = self.cover_subspaces(G)
        parts = []
        for j in range(0, len(subspaces) - 1, 2):
            parts.append(self.common_transversal_of(G, subspaces[j], subspaces[j + 1]))
        if len(subspaces) % 2:
            parts.append(self._transversal(subspaces[-1]))
        T = _unique_rows(np.concatenate(parts))
        bound = ceil(len(subspaces) / 2) * max(N_i.index() for N_i in subspaces)
        return self.verify_cover(G, SylowCover(T, CoverMethod.COMMON_TRANSVERSAL, bound=bound))

    def minimal_cover(
        self,
        G: SemidirectGroup,
        mode: SearchMode = SearchMode.EXACT,
        incumbent: Optional[SylowCover] = None,
    ) -> SylowCover:
        """
        Наименьшее (exact) или жадное (greedy) покрытие G_p силовскими подгруппами.

        Raises:
            ExactBudgetExceeded: exact при nu_p > exact_sylow_budget и |G_p| > exact_element_budget
            TooLargeToEnumerate: nu_p > greedy_sylow_budget
        """
        nu = G.sylow_count()
        if nu > self.config.greedy_sylow_budget:
            raise TooLargeToEnumerate(f"nu_p = {nu} превышает бюджет {self.config.greedy_sylow_budget}", nu_p=nu)
        table = self.sylow_table(G)
        universe_size = int(table.universe.shape[0])
        if mode == SearchMode.EXACT and nu > self.config.exact_sylow_budget and universe_size > self.config.exact_element_budget:
            raise ExactBudgetExceeded(
                f"Точный поиск: nu_p = {nu}, |G_p| = {universe_size} вне бюджета",
                nu_p=nu,
                p_elements=universe_size,
            )
        masks = table.masks()
        universe = set_cover.full_mask(universe_size)
        if mode == SearchMode.EXACT:
            start = None
            if incumbent is not None and incumbent.verified:
                start = sorted(set(table.positions(incumbent.representatives).tolist()))
            chosen = set_cover.exact_cover(
                universe,
                masks,
                self.config.exact_node_budget,
                incumbent=start,
                time_limit=self.config.exact_time_limit,
            )
            cover = SylowCover(table.representatives[chosen], CoverMethod.EXACT, optimal=True)
        else:
            chosen = set_cover.greedy_cover(universe, masks)
            cover = SylowCover(table.representatives[chosen], CoverMethod.GREEDY, optimal=None)
        return self.verify_cover(G, cover)

    def restricted_minimal_cover(self, G: SemidirectGroup) -> Optional[int]:
        """
        Наименьшее k, при котором P покрывается k силовскими подгруппами, отличными от P.

        None, если таких покрытий нет (P не избыточна).
        """
        order = G.group.order
        if order == 1 or G.sylow_count() == 1:
            return None
        T = self.sylow_table(G).representatives[1:]
        ell = G.field.characteristic
        hits = np.zeros((T.shape[0], order - 1), dtype=bool)
        for x in range(1, order):
            hits[:, x - 1] = ~np.any((T @ G.action.shifted(x).T) % ell, axis=1)
        rows = np.unique(hits, axis=0)
        rows = rows[rows.any(axis=1)]
        universe = set_cover.full_mask(order - 1)
        masks = set_cover.masks_from_rows(rows)
        covered = 0
        for m in masks:
            covered |= m
        if covered != universe:
            return None
        return len(
            set_cover.exact_cover(universe, masks, self.config.exact_node_budget, time_limit=self.config.exact_time_limit)
        )

    # --- лямбда, Казоло, Гери ---

    def lambdas(self, G: SemidirectGroup) -> List[LambdaEntry]:
        table = self._oracle_sylows(G)
        entries = []
        for x, size in G.group.class_representatives():
            lam, enumerated = G.sylows_containing(x, table.representatives if table is not None else None)
            entries.append(
                LambdaEntry(
                    x=x,
                    class_size=size,
                    element_order=int(G.group.element_orders[x]),
                    centralizer_dim=G.centralizer_in_N(x).dimension,
                    lam=lam,
                    lam_enumerated=enumerated,
                )
            )
        return entries

    def check_casolo(self, G: SemidirectGroup) -> Tuple[bool, List[CasoloEntry]]:
        """lambda_G(H) * |N_G(P) : P| = |C_N(H)| для всех циклических H <= P"""
        table = self._oracle_sylows(G)
        fixed_order = G.fixed_subspace.order()
        ell = G.field.characteristic
        entries = []
        for H in G.group.cyclic_subgroups():
            C_H = G.action.fixed_space_of(H.members)
            if table is not None:
                inside = np.ones(table.count, dtype=bool)
                for x in H.members:
                    inside &= ~np.any((table.representatives @ G.action.shifted(x).T) % ell, axis=1)
                lam, method = int(inside.sum()), "enumeration"
            else:
                lam, method = C_H.order() // fixed_order, "linear_algebra"
            entries.append(
                CasoloEntry(
                    subgroup=list(H.members),
                    lam=lam,
                    method=method,
                    normalizer_index=fixed_order,
                    centralizer_order=C_H.order(),
                )
            )
        holds = all(e.holds for e in entries)
        if not holds:
            logger.error(f"Тождество Казоло нарушено для {G}")
        return holds, entries

    def check_gheri(self, G: SemidirectGroup, lambdas: Optional[List[LambdaEntry]] = None) -> GheriCheck:
        """nu_p^{|P|/p} >= произведение lambda_G(x) по всем x из P (точная целочисленная арифметика)"""
        lambdas = self.lambdas(G) if lambdas is None else lambdas
        lhs = G.sylow_count() ** (G.group.order // G.group.p)
        rhs = 1
        for entry in lambdas:
            rhs *= entry.lam ** entry.class_size
        return GheriCheck(lhs=lhs, rhs=rhs)

    # --- оценки ---

    def check_bounds(
        self,
        G: SemidirectGroup,
        redundancy: RedundancyResult,
        p_count: PElementCount,
        gheri: Optional[GheriCheck] = None,
        lambdas: Optional[List[LambdaEntry]] = None,
        restricted: Optional[int] = None,
    ) -> List[BoundCheck]:
        p = G.group.p
        nu = G.sylow_count()
        redundant = redundancy.redundant
        provenance = G.action.provenance
        q_min = smallest_prime_power_1modp(p)
        normal = nu == 1
        checks = [
            BoundCheck(name="nu_at_least_p2_p_1", relation=">=", lhs=nu, rhs=p * p + p + 1, applicable=redundant),
            BoundCheck(name="nu_at_least_qmin_power", relation=">=", lhs=nu, rhs=q_min ** (p + 1), applicable=redundant),
            BoundCheck(
                name="nu_above_p1_power_p",
                relation=">",
                lhs=nu,
                rhs=(p + 1) ** p,
                applicable=redundant and gheri is not None and gheri.satisfied,
            ),
            BoundCheck(name="not_prime", relation="not_prime", lhs=nu, rhs=0, applicable=redundant),
            BoundCheck(name="sylow_congruence", relation="==", lhs=nu % p, rhs=1 % p),
            BoundCheck(
                name="frobenius_multiplier",
                relation=">=",
                lhs=p_count.frobenius_multiplier,
                rhs=2,
                applicable=not normal,
            ),
            BoundCheck(
                name="single_sylow_ratio",
                relation="<=",
                lhs=2 * G.group.order,
                rhs=p_count.total,
                applicable=not normal,
                note="одна силовская подгруппа содержит не более половины G_p",
            ),
        ]
        if lambdas is None:
            lambdas = self.lambdas(G)
        checks.append(
            BoundCheck(
                name="lambda_min",
                relation=">=",
                lhs=min(e.lam for e in lambdas),
                rhs=p + 1,
                applicable=redundant,
            )
        )
        if provenance == Provenance.THM1:
            q = G.action.params["q"]
            checks.append(
                BoundCheck(
                    name="thm1_p_elements_below_sylows",
                    relation="<",
                    lhs=p_count.total,
                    rhs=nu,
                    applicable=q ** (p - 1) > G.group.order,
                    note=f"q^(p-1) = {q ** (p - 1)}, |P| = {G.group.order}",
                )
            )
            checks.append(
                BoundCheck(
                    name="thm1_class_formula_bound",
                    relation="<=",
                    lhs=p_count.total * q ** (p - 1),
                    rhs=G.order,
                )
            )
            slack = [
                G.centralizer_in_N(x).dimension - fixed_space_lower_bound(G.action, x)
                for x in range(1, G.group.order)
            ]
            checks.append(
                BoundCheck(
                    name="thm1_fixed_space",
                    relation=">=",
                    lhs=min(slack),
                    rhs=0,
                    note="равенство для всех x" if max(slack) == 0 else "есть x со строгим неравенством",
                )
            )
        if provenance == Provenance.THM2:
            checks.append(BoundCheck(name="thm2_tight", relation="==", lhs=nu, rhs=q_min ** (p + 1)))
        if restricted is not None:
            checks.append(
                BoundCheck(
                    name="orbit_bound",
                    relation=">=",
                    lhs=nu,
                    rhs=restricted * p + 1,
                    applicable=redundant,
                    note=f"k = {restricted}",
                )
            )
            checks.append(
                BoundCheck(name="restricted_cover_min", relation=">=", lhs=restricted, rhs=p + 1, applicable=redundant)
            )
        return checks

    def cover_bounds(self, G: SemidirectGroup, covers: Sequence[SylowCover]) -> List[BoundCheck]:
        """Оценки размеров покрытий в виде целочисленных неравенств"""
        nu = G.sylow_count()
        p = G.group.p
        checks = []
        for cover in covers:
            if cover.method == CoverMethod.TRANSVERSAL and G.action.provenance == Provenance.THM1:
                q = G.action.params["q"]
                checks.append(
                    BoundCheck(
                        name="transversal_cover_bound",
                        relation="<=",
                        lhs=cover.size * q ** (p - 1),
                        rhs=(p + 1) * nu,
                    )
                )
            if cover.method == CoverMethod.COMMON_TRANSVERSAL:
                checks.append(BoundCheck(name="improved_cover_bound", relation="<=", lhs=3 * cover.size, rhs=2 * nu))
            if cover.bound is not None:
                checks.append(
                    BoundCheck(name=f"{cover.method.value}_size", relation="<=", lhs=cover.size, rhs=cover.bound)
                )
        # exact <= greedy <= improved
        sizes = {cover.method: cover.size for cover in covers if cover.verified}
        exact = sizes.get(CoverMethod.EXACT)
        greedy = sizes.get(CoverMethod.GREEDY)
        improved = sizes.get(CoverMethod.COMMON_TRANSVERSAL)
        if exact is not None and greedy is not None:
            checks.append(BoundCheck(name="exact_not_above_greedy", relation="<=", lhs=exact, rhs=greedy))
        minimal = greedy if greedy is not None else exact
        if minimal is not None and improved is not None:
            checks.append(
                BoundCheck(
                    name="minimal_not_above_improved",
                    relation="<=",
                    lhs=minimal,
                    rhs=improved,
                    note="greedy" if greedy is not None else "exact",
                )
            )
        return checks

    # --- объединения ---

    def union_ratio(self, G: SemidirectGroup, n: int, mode: SearchMode = SearchMode.EXACT) -> UnionRatioEntry:
        """Наибольшая доля G_p, покрываемая n силовскими подгруппами (первая - сама P)"""
        table = self.sylow_table(G)
        masks = table.masks()
        size = int(table.universe.shape[0])
        used = min(n, table.count)
        note = f"n = {n} больше nu_p = {table.count}, взяты все подгруппы" if used < n else ""
        exact = (
            mode == SearchMode.EXACT
            and used <= self.config.union_exact_max_n
            and table.count <= self.config.union_exact_max_sylows
        )
        if exact:
            try:
                result = set_cover.exact_max_coverage(masks, used, fixed=(0,), node_budget=self.config.exact_node_budget)
            except ExactBudgetExceeded:
                logger.warning(f"Точный поиск объединения {used} подгрупп прерван, используется жадный")
                result = set_cover.greedy_max_coverage(masks, used, fixed=(0,))
        else:
            result = set_cover.greedy_max_coverage(masks, used, fixed=(0,))
        return UnionRatioEntry(
            n=n,
            sylows=used,
            union_size=result.covered,
            p_elements=size,
            exact=result.exact,
            covers=result.covered == size,
            note=note,
        )

    # --- оракулы ---

    def oracles(
        self,
        G: SemidirectGroup,
        p_count: PElementCount,
        redundancy: RedundancyResult,
        lambdas: List[LambdaEntry],
    ) -> OracleSummary:
        summary = OracleSummary()
        if G.order <= self.config.oracle_group_limit:
            exhaustive = G.p_element_codes()
            summary.p_elements_exhaustive = int(exhaustive.shape[0])
            summary.p_elements_agree = summary.p_elements_exhaustive == p_count.total
            table = self._oracle_sylows(G)
            if table is not None:
                summary.sylow_union_is_p_elements = bool(np.array_equal(table.universe, exhaustive))
        oracle = self.redundancy_oracle(G)
        if oracle is not None:
            summary.redundancy_agrees = oracle == redundancy.redundant
        enumerated = [e for e in lambdas if e.lam_enumerated is not None]
        if enumerated:
            summary.lambda_agrees = all(e.lam == e.lam_enumerated for e in enumerated)
        if G.order <= self.config.normalizer_check_limit:
            summary.normalizer_agrees = G.normalizer_order_exhaustive() == G.normalizer_order()
            summary.centralizer_agrees = all(
                G.centralizer_order_exhaustive(e.x) == G.centralizer_order(e.x) for e in lambdas
            )
        if G.order <= self.config.fingerprint_limit:
            summary.fingerprint = G.fingerprint()
        return summary

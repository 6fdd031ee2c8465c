"""
Покрытие множествами на битовых масках.

Множество - целое число Python, бит i соответствует элементу i универсума.
Все переборы детерминированы: при равенстве выигрыша выбирается меньший номер множества.
"""
from typing import Iterator, List, NamedTuple, Optional, Sequence
import logging
import time

import numpy as np

from app.exceptions import ExactBudgetExceeded

logger = logging.getLogger(__name__)


def masks_from_rows(membership: np.ndarray) -> List[int]:
    """Булева матрица (множества x элементы) -> список битовых масок"""
    masks = []
    for row in np.asarray(membership, dtype=bool):
        packed = np.packbits(row, bitorder="little")
        masks.append(int.from_bytes(packed.tobytes(), "little"))
    return masks


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(size: int) -> int:
    return (1 << size) - 1


def greedy_cover(universe: int, masks: Sequence[int]) -> List[int]:
    """Жадное покрытие: на каждом шаге множество с наибольшим числом новых элементов"""
    remaining = universe
    chosen: List[int] = []
    while remaining:
        best, best_gain = -1, 0
        for i, m in enumerate(masks):
            gain = popcount(m & remaining)
            if gain > best_gain:
                best, best_gain = i, gain
        if best < 0:
            raise ValueError("Множества не покрывают универсум")
        chosen.append(best)
        remaining &= ~masks[best]
    return chosen


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def remove_dominated(universe: int, masks: Sequence[int]) -> List[int]:
    """
    Номера множеств, которые не содержатся (в пределах universe) в другом множестве.

    Из равных множеств остается меньший номер; пустые отбрасываются.
    """
    restricted = [m & universe for m in masks]
    order = sorted(range(len(restricted)), key=lambda i: (-popcount(restricted[i]), i))
    kept: List[int] = []
    for i in order:
        m = restricted[i]
        if m and not any(m | restricted[k] == restricted[k] for k in kept):
            kept.append(i)
    return sorted(kept)


class _ExactSearch:
    """
    Поиск покрытия не больше заданного размера.

    gains[j] - число непокрытых элементов множества j, by_gain[g] - сколько множеств
    имеют выигрыш g; обе таблицы ведутся при выборе множества и откате.
    groups - элементы, разбитые на группы попарно несовместных (никакое множество
    не содержит двух элементов одной группы).
    """

    def __init__(self, universe: int, masks: Sequence[int], node_budget: int, time_limit: Optional[float]):
        self.masks = list(masks)
        self.node_budget = node_budget
        self.time_limit = time_limit
        self.deadline = time.monotonic() + time_limit if time_limit else None
        self.nodes = 0
        self.solution: List[int] = []
        self.containing: List[List[int]] = [[] for _ in range(universe.bit_length())]
        for j, m in enumerate(self.masks):
            for e in _bits(m):
                self.containing[e].append(j)
        self.sizes = [popcount(m) for m in self.masks]
        self.gains = list(self.sizes)
        self.by_gain = [0] * (max(self.sizes) + 1)
        for g in self.sizes:
            self.by_gain[g] += 1
        self.groups = self._conflict_free_groups(universe)

    def _conflict_free_groups(self, universe: int) -> List[int]:
        groups: List[List[int]] = []
        for e in _bits(universe):
            sets = 0
            for j in self.containing[e]:
                sets |= 1 << j
            for group in groups:
                if not group[1] & sets:
                    group[0] |= 1 << e
                    group[1] |= sets
                    break
            else:
                groups.append([1 << e, sets])
        return [members for members, _ in groups if popcount(members) > 1]

    def lower_bound(self, remaining: int) -> int:
        largest = len(self.by_gain) - 1
        while largest and not self.by_gain[largest]:
            largest -= 1
        if largest == 0:
            return len(self.masks) + 1
        bound = -(-popcount(remaining) // largest)
        for group in self.groups:
            bound = max(bound, popcount(remaining & group))
        return bound

    def _take(self, j: int, remaining: int) -> int:
        newly = self.masks[j] & remaining
        for e in _bits(newly):
            for k in self.containing[e]:
                g = self.gains[k]
                self.by_gain[g] -= 1
                self.by_gain[g - 1] += 1
                self.gains[k] = g - 1
        return newly

    def _release(self, newly: int):
        for e in _bits(newly):
            for k in self.containing[e]:
                g = self.gains[k]
                self.by_gain[g] -= 1
                self.by_gain[g + 1] += 1
                self.gains[k] = g + 1

    def _pick_element(self, remaining: int) -> int:
        """Непокрытый элемент с наименьшим числом нетронутых множеств (затем - множеств вообще)"""
        best_element, best_key = -1, None
        for e in _bits(remaining):
            fresh = sum(1 for k in self.containing[e] if self.gains[k] == self.sizes[k])
            key = (fresh, len(self.containing[e]))
            if best_key is None or key < best_key:
                best_element, best_key = e, key
                if fresh == 0:
                    break
        return best_element

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise ExactBudgetExceeded(
                f"Точный поиск покрытия превысил бюджет {self.node_budget} узлов", nodes=self.node_budget
            )
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ExactBudgetExceeded(
                f"Точный поиск покрытия превысил лимит времени {self.time_limit} с", time_limit=self.time_limit
            )

    def search(self, remaining: int, chosen: List[int], target: int) -> bool:
        self._tick()
        if not remaining:
            self.solution = list(chosen)
            return True
        if len(chosen) + self.lower_bound(remaining) > target:
            return False
        e = self._pick_element(remaining)
        for j in sorted(self.containing[e], key=lambda k: (-self.gains[k], k)):
            newly = self._take(j, remaining)
            chosen.append(j)
            found = self.search(remaining & ~newly, chosen, target)
            chosen.pop()
            self._release(newly)
            if found:
                return True
        return False


def exact_cover(
    universe: int,
    masks: Sequence[int],
    node_budget: int,
    incumbent: Optional[Sequence[int]] = None,
    time_limit: Optional[float] = None,
) -> List[int]:
    """
    Покрытие минимальной мощности методом ветвей и границ.

    Элементы, лежащие во всех множествах, исключаются из универсума (их покрывает
    любое непустое покрытие), поглощенные множества отбрасываются. Рекорд - жадное
    покрытие или incumbent, если оно меньше. Размеры от нижней границы до рекорда - 1
    проверяются по возрастанию, первый найденный минимален. Нижняя граница - наибольшее
    из ceil(|непокрытое| / наибольший выигрыш) и числа непокрытых элементов в группе
    попарно несовместных.

    Raises:
        ExactBudgetExceeded: если превышен node_budget или time_limit (секунды)
    """
    if universe == 0:
        return []
    common = universe
    for m in masks:
        common &= m
    if masks and common == universe:
        return [0]
    reduced = universe & ~common
    best = greedy_cover(reduced, masks)
    if incumbent is not None and len(incumbent) < len(best) and covers_all(universe, masks, incumbent):
        best = list(incumbent)
    kept = remove_dominated(reduced, masks)
    search = _ExactSearch(reduced, [masks[i] & reduced for i in kept], node_budget, time_limit)
    floor = search.lower_bound(reduced)
    for target in range(floor, len(best)):
        if search.search(reduced, [], target):
            best = [kept[j] for j in search.solution]
            break
    logger.debug(f"Точное покрытие: {len(best)} множеств, узлов: {search.nodes}")
    return sorted(best)


class CoverageResult(NamedTuple):
    chosen: List[int]
    covered: int
    exact: bool


def greedy_max_coverage(masks: Sequence[int], n: int, fixed: Sequence[int] = ()) -> CoverageResult:
    chosen = list(fixed)
    covered = 0
    for i in chosen:
        covered |= masks[i]
    while len(chosen) < n:
        best, best_gain = -1, -1
        for i, m in enumerate(masks):
            if i in chosen:
                continue
            gain = popcount(m & ~covered)
            if gain > best_gain:
                best, best_gain = i, gain
        if best < 0:
            break
        chosen.append(best)
        covered |= masks[best]
    return CoverageResult(chosen, popcount(covered), False)


def exact_max_coverage(masks: Sequence[int], n: int, fixed: Sequence[int] = (), node_budget: int = 10 ** 6) -> CoverageResult:
    """
    Наибольшее объединение n множеств (множества из fixed входят обязательно).

    Перебор сочетаний с отсечением по сумме n - k наибольших оставшихся выигрышей.
    """
    incumbent = greedy_max_coverage(masks, n, fixed)
    best_value, best_choice = incumbent.covered, incumbent.chosen
    base = 0
    for i in fixed:
        base |= masks[i]
    free = [i for i in range(len(masks)) if i not in fixed]
    need = n - len(fixed)
    nodes = 0

    def extend(start: int, covered: int, chosen: List[int]):
        nonlocal best_value, best_choice, nodes
        nodes += 1
        if nodes > node_budget:
            raise ExactBudgetExceeded(f"Поиск наибольшего объединения превысил бюджет {node_budget} узлов")
        left = need - (len(chosen) - len(fixed))
        if left == 0:
            value = popcount(covered)
            if value > best_value:
                best_value, best_choice = value, list(chosen)
            return
        gains = sorted((popcount(masks[i] & ~covered) for i in free[start:]), reverse=True)
        if len(gains) < left or popcount(covered) + sum(gains[:left]) <= best_value:
            return
        for pos in range(start, len(free)):
            i = free[pos]
            chosen.append(i)
            extend(pos + 1, covered | masks[i], chosen)
            chosen.pop()

    if need > 0 and len(free) >= need:
        extend(0, base, list(fixed))
    return CoverageResult(best_choice, best_value, True)


def covers_all(universe: int, masks: Sequence[int], chosen: Sequence[int]) -> bool:
    covered = 0
    for i in chosen:
        covered |= masks[i]
    return covered & universe == universe


__all__ = [
    "masks_from_rows",
    "full_mask",
    "popcount",
    "greedy_cover",
    "remove_dominated",
    "exact_cover",
    "greedy_max_coverage",
    "exact_max_coverage",
    "covers_all",
]

"""
Конечные p-группы, заданные таблицей умножения.

Нумерация элементов встроенных групп - лексикографический порядок нормальных форм
(единица всегда имеет индекс 0):

- Cn: a^i, элемент (i,)
- D8 = <r, s | r^4, s^2, srs = r^-1>: r^i s^j, элемент (i, j)
- Q8 = <a, b | a^4, b^2 = a^2, bab^-1 = a^-1>: a^i b^j, элемент (i, j)
- Heis3: унитреугольные матрицы [[1, a, c], [0, 1, b], [0, 0, 1]] над GF(3), элемент (a, b, c)
- M16 = <a, b | a^8, b^2, bab^-1 = a^5>: a^i b^j, элемент (i, j)
- прямые произведения: кортежи нормальных форм сомножителей
"""
from collections import Counter
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, Union
import logging
import re

import numpy as np
from pydantic import ValidationError
from sympy import isprime

from app.exceptions import CyclicGroup, InvalidGroup, NotMaximal, UnknownGroup
from app.schemas import GroupFile

logger = logging.getLogger(__name__)

MAX_GROUP_ORDER = 512


class SubgroupOfP:
    """Подгруппа p-группы: отсортированный список индексов элементов"""

    def __init__(self, parent: "PGroup", members: Iterable[int]):
        self.parent = parent
        self.members: Tuple[int, ...] = tuple(sorted({int(m) for m in members}))
        idx = np.array(self.members, dtype=np.int64)
        if 0 not in self.members or not np.isin(parent.table[np.ix_(idx, idx)], idx).all():
            raise InvalidGroup(f"Множество {list(self.members)} не является подгруппой {parent.name}")

    def __len__(self):
        return len(self.members)

    def __contains__(self, g: int):
        return int(g) in self._member_set

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        return isinstance(other, SubgroupOfP) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"SubgroupOfP({self.parent.name}, order={len(self)})"

    @cached_property
    def _member_set(self):
        return frozenset(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // self.order


class PGroup:
    """
    Конечная p-группа по таблице умножения (индекс единицы - 0).

    При создании проверяются аксиомы группы (ассоциативность - полным перебором)
    и то, что порядки всех элементов - степени p.
    """

    def __init__(self, p: int, table, name: str = "custom", validate: bool = True):
        self.p = int(p)
        self.table = np.array(table, dtype=np.int64)
        self.name = name
        self.order = int(self.table.shape[0]) if self.table.ndim == 2 else 0
        if validate:
            self._validate()

    def __repr__(self):
        return f"PGroup({self.name}, p={self.p}, order={self.order})"

    def _validate(self):
        t = self.table
        if not isprime(self.p):
            raise InvalidGroup(f"p = {self.p} не является простым числом")
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidGroup("Таблица умножения должна быть квадратной и непустой")
        n = self.order
        if n > MAX_GROUP_ORDER:
            raise InvalidGroup(f"Поддерживаются группы порядка <= {MAX_GROUP_ORDER}, получено {n}")
        k, m = 0, n
        while m % self.p == 0:
            m //= self.p
            k += 1
        if m != 1:
            raise InvalidGroup(f"Порядок {n} не является степенью {self.p}")
        if t.min() < 0 or t.max() >= n:
            raise InvalidGroup("Элементы таблицы вне диапазона индексов")
        idx = np.arange(n)
        if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
            raise InvalidGroup("Индекс 0 должен быть единицей группы")
        if any(len(set(row)) != n for row in t) or any(len(set(col)) != n for col in t.T):
            raise InvalidGroup("Таблица не является латинским квадратом")
        for a in range(n):
            if not np.array_equal(t[t[a, :], :], t[a, t]):
                raise InvalidGroup(f"Нарушена ассоциативность для элемента {a}")
        if any(not self._is_p_power(int(o)) for o in self.element_orders):
            raise InvalidGroup("Порядок некоторого элемента не является степенью p")

    def _is_p_power(self, n: int) -> bool:
        while n % self.p == 0:
            n //= self.p
        return n == 1

    # --- элементарные операции ---

    def multiply(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverses(self) -> np.ndarray:
        return np.argmax(self.table == 0, axis=1)

    def inverse(self, a: int) -> int:
        return int(self.inverses[a])

    def power(self, a: int, e: int) -> int:
        e %= int(self.element_orders[a])
        result = 0
        for _ in range(e):
            result = int(self.table[result, a])
        return result

    def commutator(self, a: int, b: int) -> int:
        inv = self.inverses
        return int(self.table[self.table[inv[a], inv[b]], self.table[a, b]])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        x = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        current = x.copy()
        for k in range(1, n + 1):
            done = (current == 0) & (orders == 0)
            orders[done] = k
            if orders.all():
                break
            current = self.table[current, x]
        return orders

    @property
    def exponent(self) -> int:
        return int(self.element_orders.max())

    def is_cyclic(self) -> bool:
        return bool((self.element_orders == self.order).any())

    # --- подгруппы ---

    def subgroup_generated(self, generators: Iterable[int]) -> SubgroupOfP:
        members = {0} | {int(g) for g in generators}
        while True:
            idx = np.array(sorted(members), dtype=np.int64)
            closure = set(np.unique(self.table[np.ix_(idx, idx)]).tolist())
            if closure <= members:
                return SubgroupOfP(self, members)
            members |= closure

    def cyclic_subgroup(self, x: int) -> SubgroupOfP:
        members, g = [0], int(x)
        while g != 0:
            members.append(g)
            g = int(self.table[g, x])
        return SubgroupOfP(self, members)

    def centralizer(self, x: int) -> SubgroupOfP:
        commuting = np.nonzero(self.table[x, :] == self.table[:, x])[0]
        return SubgroupOfP(self, commuting.tolist())

    def is_normal(self, sub: SubgroupOfP) -> bool:
        members = np.array(sub.members, dtype=np.int64)
        for h in range(self.order):
            conj = self.table[self.table[h, members], self.inverses[h]]
            if not np.isin(conj, members).all():
                return False
        return True

    def conjugacy_classes(self) -> List[List[int]]:
        """Классы сопряженности; представитель класса - наименьший индекс (первый в списке)"""
        n = self.order
        assigned = np.zeros(n, dtype=bool)
        everyone = np.arange(n)
        classes = []
        for g in range(n):
            if assigned[g]:
                continue
            cls = np.unique(self.table[self.table[everyone, g], self.inverses])
            assigned[cls] = True
            classes.append(cls.tolist())
        return classes

    def class_representatives(self) -> List[Tuple[int, int]]:
        """Пары (представитель, размер класса)"""
        return [(cls[0], len(cls)) for cls in self.conjugacy_classes()]

    def frattini(self) -> SubgroupOfP:
        """Phi(P) = <a^p, [a, b]>"""
        n = self.order
        x = np.arange(n)
        powers = x.copy()
        for _ in range(self.p - 1):
            powers = self.table[powers, x]
        inv = self.inverses
        commutators = self.table[self.table[inv[:, None], inv[None, :]], self.table]
        generators = set(powers.tolist()) | set(np.unique(commutators).tolist())
        return self.subgroup_generated(generators)

    @cached_property
    def frattini_coordinates(self) -> Tuple[List[int], np.ndarray]:
        """
        Изоморфизм P/Phi(P) -> (Z/p)^r.

        Returns:
            (порождающие по модулю Phi, массив координат размера order x r)
        """
        phi = self.frattini()
        generators: List[int] = []
        current = phi
        for g in range(self.order):
            if current.order == self.order:
                break
            if g not in current:
                generators.append(g)
                current = self.subgroup_generated(list(current.members) + [g])
        r = len(generators)
        coords = np.full((self.order, r), -1, dtype=np.int64)
        phi_members = np.array(phi.members, dtype=np.int64)
        for exponents in product(range(self.p), repeat=r):
            h = 0
            for g, e in zip(generators, exponents):
                h = int(self.table[h, self.power(g, e)])
            coords[self.table[h, phi_members]] = exponents
        return generators, coords

    @property
    def frattini_rank(self) -> int:
        return len(self.frattini_coordinates[0])

    def maximal_cover(self) -> List[SubgroupOfP]:
        """
        p+1 максимальных подгрупп, объединение которых равно P.

        Прообразы p+1 прямых плоскости (Z/p)^2 при проекции P/Phi(P) на первые две координаты.
        """
        if self.is_cyclic():
            raise CyclicGroup(f"Группа {self.name} циклическая: покрытие максимальными подгруппами не существует")
        _, coords = self.frattini_coordinates
        e1, e2 = coords[:, 0], coords[:, 1]
        functionals = [e1 % self.p] + [(e2 - c * e1) % self.p for c in range(self.p)]
        cover = [SubgroupOfP(self, np.nonzero(f == 0)[0].tolist()) for f in functionals]
        logger.debug(f"Покрытие {self.name} подгруппами порядков {[s.order for s in cover]}")
        return cover

    def hom_to_cp(self, sub: SubgroupOfP) -> np.ndarray:
        """Эпиморфизм P -> Z/p с ядром sub: phi(g) = i, если g лежит в x^i sub"""
        if sub.order * self.p != self.order or not self.is_normal(sub):
            raise NotMaximal(f"Подгруппа порядка {sub.order} не максимальна в {self.name}")
        x = next(g for g in range(self.order) if g not in sub)
        members = np.array(sub.members, dtype=np.int64)
        phi = np.zeros(self.order, dtype=np.int64)
        h = 0
        for i in range(self.p):
            phi[self.table[h, members]] = i
            h = int(self.table[h, x])
        return phi

    def cyclic_subgroups(self) -> List[SubgroupOfP]:
        unique = {self.cyclic_subgroup(x) for x in range(self.order)}
        return sorted(unique, key=lambda s: (s.order, s.members))

    def fingerprint(self) -> Dict[str, object]:
        """Инварианты изоморфизма (необходимое, но не достаточное условие)"""
        return {
            "order": self.order,
            "class_sizes": sorted(len(c) for c in self.conjugacy_classes()),
            "element_orders": dict(sorted(Counter(self.element_orders.tolist()).items())),
            "cyclic_subgroups": dict(sorted(Counter(s.order for s in self.cyclic_subgroups()).items())),
        }

    @classmethod
    def from_function(cls, p: int, elements: Sequence, mul: Callable, name: str) -> "PGroup":
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        table = np.zeros((n, n), dtype=np.int64)
        for (i, a), (j, b) in product(enumerate(elements), repeat=2):
            table[i, j] = index[mul(a, b)]
        return cls(p, table, name)


# --- каталог ---

_Factor = Tuple[int, List[tuple], Callable]


def _prime_of(n: int) -> int:
    for q in range(2, n + 1):
        if n % q == 0:
            m = n
            while m % q == 0:
                m //= q
            if m != 1:
                raise UnknownGroup(f"{n} не является степенью простого числа")
            return q
    raise UnknownGroup(f"Циклическая группа порядка {n} не является p-группой")


def _cyclic(n: int) -> _Factor:
    return _prime_of(n), [(i,) for i in range(n)], lambda a, b: ((a[0] + b[0]) % n,)


def _dihedral8() -> _Factor:
    elements = [(i, j) for i in range(4) for j in range(2)]
    return 2, elements, lambda a, b: ((a[0] + (-1) ** a[1] * b[0]) % 4, (a[1] + b[1]) % 2)


def _quaternion8() -> _Factor:
    elements = [(i, j) for i in range(4) for j in range(2)]
    return 2, elements, lambda a, b: (
        (a[0] + (-1) ** a[1] * b[0] + 2 * a[1] * b[1]) % 4,
        (a[1] + b[1]) % 2,
    )


def _heisenberg3() -> _Factor:
    elements = list(product(range(3), repeat=3))
    return 3, elements, lambda a, b: (
        (a[0] + b[0]) % 3,
        (a[1] + b[1]) % 3,
        (a[2] + b[2] + a[0] * b[1]) % 3,
    )


def _modular16() -> _Factor:
    elements = [(i, j) for i in range(8) for j in range(2)]
    return 2, elements, lambda a, b: ((a[0] + 5 ** a[1] * b[0]) % 8, (a[1] + b[1]) % 2)


_NAMED: Dict[str, Callable[[], _Factor]] = {
    "D8": _dihedral8,
    "Q8": _quaternion8,
    "Heis3": _heisenberg3,
    "M16": _modular16,
}

_CYCLIC_RE = re.compile(r"^C(\d+)(?:\^(\d+))?$")


def _parse_factor(token: str) -> List[_Factor]:
    if token in _NAMED:
        return [_NAMED[token]()]
    match = _CYCLIC_RE.match(token)
    if not match:
        raise UnknownGroup(f"Неизвестная группа: {token}")
    n, k = int(match.group(1)), int(match.group(2) or 1)
    if n < 2 or k < 1:
        raise UnknownGroup(f"Неизвестная группа: {token}")
    return [_cyclic(n)] * k


def catalog(name: str) -> PGroup:
    """
    Встроенная группа по имени: "C2^2", "C4xC2", "D8", "Q8", "C9xC3", "Heis3", "M16",
    "Cp", а также прямые произведения через "x" или "×".
    """
    tokens = [t.strip() for t in re.split(r"[x×]", name) if t.strip()]
    if not tokens:
        raise UnknownGroup(f"Пустое имя группы: {name!r}")
    factors: List[_Factor] = []
    for token in tokens:
        factors.extend(_parse_factor(token))
    primes = {f[0] for f in factors}
    if len(primes) != 1:
        raise UnknownGroup(f"Сомножители {name} - группы для разных простых {sorted(primes)}")
    p = primes.pop()
    if len(factors) == 1:
        _, elements, mul = factors[0]
        return PGroup.from_function(p, elements, mul, name)

    elements = list(product(*[f[1] for f in factors]))
    muls = [f[2] for f in factors]

    def mul(a, b):
        return tuple(m(x, y) for m, x, y in zip(muls, a, b))

    return PGroup.from_function(p, elements, mul, name)


def load_group_file(path: Union[str, Path]) -> PGroup:
    """Загружает группу из JSON {"p", "order", "table", "name"} с полной проверкой аксиом"""
    try:
        data = GroupFile.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValidationError) as e:
        logger.error(f"Не удалось прочитать файл группы {path}: {str(e)}")
        raise InvalidGroup(f"Некорректный файл группы {path}: {str(e)}")
    if len(data.table) != data.order:
        raise InvalidGroup(f"Заявлен порядок {data.order}, а в таблице {len(data.table)} строк")
    return PGroup(data.p, data.table, data.name)

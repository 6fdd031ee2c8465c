"""
Переборные эталоны для тестов: считают все по определению, без линейной алгебры
"""
from itertools import combinations
from typing import List, Sequence, Set

import numpy as np

from app.services.finite_field import all_vectors
from app.services.semidirect import SemidirectGroup


def brute_force_p_elements(G: SemidirectGroup) -> Set[int]:
    """Коды всех g с g^{exp(P)} = 1"""
    exponent = G.group.exponent
    identity = G.identity()
    codes = set()
    for n in all_vectors(G.field, G.dim):
        for x in range(G.group.order):
            g = G.element(n, x)
            if G.power(g, exponent) == identity:
                codes.add(G.encode(g))
    return codes


def brute_force_sylow(G: SemidirectGroup, t) -> List[int]:
    """Коды элементов t P t^-1, полученные сопряжением"""
    g = G.element(t, 0)
    zero = [0] * G.dim
    return sorted(G.encode(G.conjugate(G.element(zero, y), g)) for y in range(G.group.order))


def brute_force_min_cover(universe: int, masks: Sequence[int]) -> int:
    if universe == 0:
        return 0
    for k in range(1, len(masks) + 1):
        for choice in combinations(range(len(masks)), k):
            covered = 0
            for i in choice:
                covered |= masks[i]
            if covered & universe == universe:
                return k
    raise ValueError("Множества не покрывают универсум")


def brute_force_matching_size(num_u: int, adjacency: Sequence[Sequence[int]]) -> int:
    best = 0

    def extend(u: int, used: frozenset, size: int):
        nonlocal best
        if u == num_u:
            best = max(best, size)
            return
        extend(u + 1, used, size)
        for v in adjacency[u]:
            if v not in used:
                extend(u + 1, used | {v}, size + 1)

    extend(0, frozenset(), 0)
    return best


def is_fixed(G: SemidirectGroup, x: int, vector) -> bool:
    v = np.asarray(vector, dtype=np.int64)
    return bool(np.array_equal(G.action.apply(x, v), v))

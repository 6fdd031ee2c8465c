"""
Алгоритм Хопкрофта-Карпа для максимального паросочетания в двудольном графе.

Вершины долей U и V нумеруются подряд 0, 1, ...; соседи перебираются в порядке списков
смежности, поэтому результат детерминирован.
"""
from collections import deque
from typing import List, Sequence, Tuple

from app.exceptions import ShapeError


class BipartiteGraph:
    """Двудольный граф G = ((U, V), E), заданный списками смежности вершин U"""

    def __init__(self, num_u: int, num_v: int, adjacency: Sequence[Sequence[int]]):
        if len(adjacency) != num_u:
            raise ShapeError(f"Ожидалось {num_u} списков смежности, получено {len(adjacency)}")
        self.num_u = num_u
        self.num_v = num_v
        self.adj_u = [list(neighbors) for neighbors in adjacency]
        for neighbors in self.adj_u:
            if any(not 0 <= v < num_v for v in neighbors):
                raise ShapeError("Номер вершины V вне диапазона")

    @classmethod
    def from_edges(cls, num_u: int, num_v: int, edges: Sequence[Tuple[int, int]]) -> "BipartiteGraph":
        adjacency: List[List[int]] = [[] for _ in range(num_u)]
        seen = set()
        for u, v in edges:
            if (u, v) not in seen:
                seen.add((u, v))
                adjacency[u].append(v)
        return cls(num_u, num_v, adjacency)


class HopcroftKarp:
    """
    Поиск паросочетания максимальной мощности.

    NIL-вершина имеет номер num_u; расстояния хранятся списком.
    """

    def __init__(self, graph: BipartiteGraph):
        self.graph = graph
        self.nil = graph.num_u
        self.inf = graph.num_u + 1
        self.matched_u = [-1] * graph.num_u
        self.matched_v = [self.nil] * graph.num_v
        self.dist = [0] * (graph.num_u + 1)

    def _connect_unmatched(self) -> bool:
        """BFS по слоям от свободных вершин U"""
        queue = deque()
        for u in range(self.graph.num_u):
            if self.matched_u[u] == -1:
                self.dist[u] = 0
                queue.append(u)
            else:
                self.dist[u] = self.inf
        self.dist[self.nil] = self.inf
        while queue:
            u = queue.popleft()
            if self.dist[u] < self.dist[self.nil]:
                for v in self.graph.adj_u[u]:
                    w = self.matched_v[v]
                    if self.dist[w] == self.inf:
                        self.dist[w] = self.dist[u] + 1
                        if w != self.nil:
                            queue.append(w)
        return self.dist[self.nil] != self.inf

    def _add_augmenting_path(self, root: int) -> bool:
        """DFS по слоистому графу на явном стеке"""
        stack = [root]
        iterators = [iter(self.graph.adj_u[root])]
        chosen: List[int] = []
        while stack:
            u = stack[-1]
            for v in iterators[-1]:
                w = self.matched_v[v]
                if self.dist[w] != self.dist[u] + 1:
                    continue
                chosen.append(v)
                if w == self.nil:
                    for uu, vv in zip(stack, chosen):
                        self.matched_u[uu] = vv
                        self.matched_v[vv] = uu
                    return True
                stack.append(w)
                iterators.append(iter(self.graph.adj_u[w]))
                break
            else:
                # в эту вершину больше не заходим
                self.dist[u] = self.inf
                stack.pop()
                iterators.pop()
                if chosen:
                    chosen.pop()
        return False

    def __call__(self) -> List[Tuple[int, int]]:
        self.matched_u = [-1] * self.graph.num_u
        self.matched_v = [self.nil] * self.graph.num_v
        while self._connect_unmatched():
            for u in range(self.graph.num_u):
                if self.matched_u[u] == -1:
                    self._add_augmenting_path(u)
        return [(u, v) for u, v in enumerate(self.matched_u) if v != -1]


def maximum_matching(graph: BipartiteGraph) -> List[Tuple[int, int]]:
    return HopcroftKarp(graph)()

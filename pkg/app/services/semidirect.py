"""
Полупрямое произведение G = N x| P, N = GF(l)^d, P действует линейно.

Элемент - пара (n, x); закон умножения (n, x)(m, y) = (n + rho(x) m, xy).
Силовская p-подгруппа tPt^-1 задается сопрягающим вектором t и состоит из элементов
((I - rho(y)) t, y). Код элемента: code(n) * |P| + x.
"""
from collections import Counter
from typing import Dict, List, NamedTuple, Optional, Tuple
import logging

import numpy as np

from app.config import Settings, settings as default_settings
from app.exceptions import InternalError, ShapeError, TooLargeToEnumerate
from app.schemas import PClassEntry
from app.services.construction import LinearAction
from app.services.finite_field import Subspace, all_vectors, encode_vectors

logger = logging.getLogger(__name__)


class GElement(NamedTuple):
    n: Tuple[int, ...]
    x: int


class PElementCount(NamedTuple):
    total: int
    frobenius_multiplier: int
    classes: List[PClassEntry]


class SemidirectGroup:
    """Неизменяемая группа N x| P с операциями над элементами и силовскими подгруппами"""

    def __init__(self, action: LinearAction, config: Optional[Settings] = None):
        self.action = action
        self.config = config or default_settings
        self.group = action.group
        self.field = action.field
        self.dim = action.dim
        self.n_order = action.module_order
        self.order = self.n_order * self.group.order
        self._p_element_codes: Optional[np.ndarray] = None

    def __repr__(self):
        return f"SemidirectGroup({self.action!r}, order={self.order})"

    # --- элементы ---

    def element(self, n, x: int) -> GElement:
        vector = tuple(int(c) % self.field.characteristic for c in n)
        if len(vector) != self.dim:
            raise ShapeError(f"Ожидался вектор длины {self.dim}, получено {len(vector)}")
        if not 0 <= int(x) < self.group.order:
            raise ShapeError(f"Индекс элемента P вне диапазона: {x}")
        return GElement(vector, int(x))

    def identity(self) -> GElement:
        return GElement((0,) * self.dim, 0)

    def _check(self, *elements: GElement):
        for a in elements:
            if len(a.n) != self.dim:
                raise ShapeError(f"Элемент с N-частью длины {len(a.n)} не принадлежит группе размерности {self.dim}")

    def multiply(self, a: GElement, b: GElement) -> GElement:
        self._check(a, b)
        n = (np.array(a.n, dtype=np.int64) + self.action.apply(a.x, b.n)) % self.field.characteristic
        return GElement(tuple(n.tolist()), self.group.multiply(a.x, b.x))

    def inverse(self, a: GElement) -> GElement:
        self._check(a)
        x_inv = self.group.inverse(a.x)
        n = (-self.action.apply(x_inv, a.n)) % self.field.characteristic
        return GElement(tuple(n.tolist()), x_inv)

    def conjugate(self, a: GElement, g: GElement) -> GElement:
        """g a g^-1"""
        return self.multiply(self.multiply(g, a), self.inverse(g))

    def power(self, a: GElement, e: int) -> GElement:
        result, base = self.identity(), a
        while e:
            if e & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            e >>= 1
        return result

    def element_order(self, a: GElement) -> int:
        """(n, x)^{o(x)} лежит в N, поэтому порядок равен o(x) или o(x) * l"""
        self._check(a)
        ox = int(self.group.element_orders[a.x])
        head = self.power(a, ox)
        return ox * (self.field.characteristic if any(head.n) else 1)

    def encode(self, a: GElement) -> int:
        return int(encode_vectors(self.field, np.array(a.n, dtype=np.int64))) * self.group.order + a.x

    # --- централизаторы и силовские подгруппы ---

    def centralizer_in_N(self, x: int) -> Subspace:
        return self.action.fixed_space(x)

    def centralizer_order(self, x: int) -> int:
        """|C_G(x)| = |C_N(x)| * |C_P(x)|"""
        return self.centralizer_in_N(x).order() * self.group.centralizer(x).order

    @property
    def fixed_subspace(self) -> Subspace:
        """C_N(P)"""
        return self.action.fixed_space_of_group()

    def sylow_count(self) -> int:
        return self.fixed_subspace.index()

    def normalizer_order(self) -> int:
        """|N_G(P)| = |C_N(P)| * |P|"""
        return self.fixed_subspace.order() * self.group.order

    def enumerate_sylows(self, ceiling: Optional[int] = None) -> np.ndarray:
        """Сопрягающие векторы всех силовских подгрупп; первая строка - нулевой вектор (сама P)"""
        ceiling = self.config.enumeration_ceiling if ceiling is None else ceiling
        nu = self.sylow_count()
        if nu > ceiling:
            raise TooLargeToEnumerate(f"nu_p = {nu} превышает потолок перечисления {ceiling}", nu_p=nu)
        return self.fixed_subspace.transversal()

    def sylow_parts(self, t) -> np.ndarray:
        """N-части элементов tPt^-1: строка y равна (I - rho(y)) t"""
        t = np.asarray(t, dtype=np.int64)
        images = np.einsum("yij,j->yi", self.action.matrices, t) % self.field.characteristic
        return (t[None, :] - images) % self.field.characteristic

    def sylow_element_codes(self, t) -> np.ndarray:
        parts = self.sylow_parts(t)
        codes = encode_vectors(self.field, parts) * self.group.order + np.arange(self.group.order)
        return np.sort(codes)

    def contains(self, t, g: GElement) -> bool:
        """g = (m, y) лежит в tPt^-1 тогда и только тогда, когда m = (I - rho(y)) t"""
        self._check(g)
        t = np.asarray(t, dtype=np.int64)
        expected = (t - self.action.apply(g.x, t)) % self.field.characteristic
        return bool(np.array_equal(expected, np.array(g.n, dtype=np.int64)))

    def sylows_containing(self, x: int, representatives: Optional[np.ndarray] = None) -> Tuple[int, Optional[int]]:
        """
        lambda_G(x) двумя способами.

        Returns:
            (|C_N(x) : C_N(P)|, число перечисленных tPt^-1, содержащих x, или None)
        """
        lam = self.centralizer_in_N(x).order() // self.fixed_subspace.order()
        if representatives is None:
            return lam, None
        shifted = self.action.shifted(x)
        hits = ~np.any((representatives @ shifted.T) % self.field.characteristic, axis=1)
        return lam, int(hits.sum())

    def count_p_elements(self) -> PElementCount:
        """|G_p| = сумма |G : C_G(x)| по представителям классов P"""
        classes = []
        total = 0
        for x, _ in self.group.class_representatives():
            centralizer = self.centralizer_order(x)
            contribution = self.order // centralizer
            classes.append(PClassEntry(x=x, class_size=contribution, centralizer_order=centralizer, contribution=contribution))
            total += contribution
        if total % self.group.order != 0:
            logger.error(f"|G_p| = {total} не делится на |P| = {self.group.order}")
            raise InternalError(f"|G_p| = {total} не делится на |P| = {self.group.order}")
        return PElementCount(total, total // self.group.order, classes)

    # --- переборные оракулы ---

    def _require_enumerable(self, limit: int):
        if self.order > limit:
            raise TooLargeToEnumerate(f"|G| = {self.order} превышает лимит перебора {limit}", order=self.order)

    def _batch_multiply(self, A: Tuple[np.ndarray, np.ndarray], B: Tuple[np.ndarray, np.ndarray]):
        V, x = A
        W, y = B
        moved = np.einsum("mij,mj->mi", self.action.matrices[x], W)
        return (V + moved) % self.field.characteristic, self.group.table[x, y]

    def _batch_inverse(self, A: Tuple[np.ndarray, np.ndarray]):
        V, x = A
        x_inv = self.group.inverses[x]
        return (-np.einsum("mij,mj->mi", self.action.matrices[x_inv], V)) % self.field.characteristic, x_inv

    def _batch_power(self, A: Tuple[np.ndarray, np.ndarray], e: int):
        V, x = A
        result = (np.zeros_like(V), np.zeros_like(x))
        base = A
        while e:
            if e & 1:
                result = self._batch_multiply(result, base)
            base = self._batch_multiply(base, base)
            e >>= 1
        return result

    def all_elements(self) -> Tuple[np.ndarray, np.ndarray]:
        """Все элементы в порядке кодов"""
        vectors = all_vectors(self.field, self.dim)
        V = np.repeat(vectors, self.group.order, axis=0)
        x = np.tile(np.arange(self.group.order), vectors.shape[0])
        return V, x

    def _codes(self, A: Tuple[np.ndarray, np.ndarray]) -> np.ndarray:
        V, x = A
        return encode_vectors(self.field, V) * self.group.order + x

    def p_element_codes(self, limit: Optional[int] = None) -> np.ndarray:
        """Коды всех p-элементов: g является p-элементом тогда и только тогда, когда g^{exp(P)} = 1"""
        self._require_enumerable(self.config.oracle_group_limit if limit is None else limit)
        if self._p_element_codes is None:
            elements = self.all_elements()
            V, x = self._batch_power(elements, self.group.exponent)
            is_p = (x == 0) & ~np.any(V, axis=1)
            self._p_element_codes = self._codes(elements)[is_p]
        return self._p_element_codes

    def _fixes_all(self, conjugated: Tuple[np.ndarray, np.ndarray], targets: Tuple[np.ndarray, np.ndarray]) -> np.ndarray:
        V, x = conjugated
        W, y = targets
        return np.all(V == W, axis=1) & (x == y)

    def _conjugate_batch(self, a: GElement, g: Tuple[np.ndarray, np.ndarray]):
        m = g[0].shape[0]
        A = (np.tile(np.array(a.n, dtype=np.int64), (m, 1)), np.full(m, a.x, dtype=np.int64))
        return self._batch_multiply(self._batch_multiply(g, A), self._batch_inverse(g))

    def normalizer_order_exhaustive(self) -> int:
        """|N_G(P)| прямым перебором: g нормализует P, если сопряжения образующих P лежат в P"""
        self._require_enumerable(self.config.normalizer_check_limit)
        elements = self.all_elements()
        generators, _ = self.group.frattini_coordinates
        normalizes = np.ones(self.order, dtype=bool)
        for gen in generators:
            V, _ = self._conjugate_batch(GElement((0,) * self.dim, gen), elements)
            normalizes &= ~np.any(V, axis=1)
        return int(normalizes.sum())

    def centralizer_order_exhaustive(self, x: int) -> int:
        self._require_enumerable(self.config.normalizer_check_limit)
        elements = self.all_elements()
        a = GElement((0,) * self.dim, int(x))
        conjugated = self._conjugate_batch(a, elements)
        m = self.order
        target = (np.zeros((m, self.dim), dtype=np.int64), np.full(m, a.x, dtype=np.int64))
        return int(self._fixes_all(conjugated, target).sum())

    def element_orders_exhaustive(self) -> np.ndarray:
        """Порядки всех элементов в порядке кодов"""
        self._require_enumerable(self.config.oracle_group_limit)
        V, x = self.all_elements()
        orders = np.zeros(self.order, dtype=np.int64)
        for y in range(self.group.order):
            rows = np.nonzero(x == y)[0]
            oy = int(self.group.element_orders[y])
            head, _ = self._batch_power((V[rows], x[rows]), oy)
            orders[rows] = oy * np.where(np.any(head, axis=1), self.field.characteristic, 1)
        return orders

    def fingerprint(self) -> Dict[str, object]:
        """Порядок, распределение порядков элементов и размеры классов сопряженности G"""
        self._require_enumerable(self.config.fingerprint_limit)
        elements = self.all_elements()
        codes = self._codes(elements)
        order_of_code = np.empty(self.order, dtype=np.int64)
        order_of_code[codes] = self.element_orders_exhaustive()

        generators = [GElement(tuple(int(v) for v in row), 0) for row in np.eye(self.dim, dtype=np.int64)]
        generators += [GElement((0,) * self.dim, g) for g in self.group.frattini_coordinates[0]]
        permutations = []
        for g in generators:
            m = self.order
            G = (np.tile(np.array(g.n, dtype=np.int64), (m, 1)), np.full(m, g.x, dtype=np.int64))
            conjugated = self._batch_multiply(self._batch_multiply(G, elements), self._batch_inverse(G))
            perm = np.empty(self.order, dtype=np.int64)
            perm[codes] = self._codes(conjugated)
            permutations.append(perm)

        labels = np.arange(self.order)
        while True:
            updated = labels
            for perm in permutations:
                updated = np.minimum(updated, updated[perm])
                updated[perm] = np.minimum(updated[perm], updated)
            if np.array_equal(updated, labels):
                break
            labels = updated
        class_sizes = sorted(Counter(labels.tolist()).values())
        return {
            "order": self.order,
            "element_orders": {str(k): v for k, v in sorted(Counter(order_of_code.tolist()).items())},
            "class_sizes": {str(k): v for k, v in sorted(Counter(class_sizes).items())},
        }

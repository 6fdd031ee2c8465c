"""
Линейные действия p-группы P на элементарной абелевой группе N.

- thm1: P действует на N = V/Z, где V - регулярный модуль над GF(q), Z = <сумма всех v_x>.
  Базис фактора: {v_g + Z : g != 1}, причем v_1 + Z = -(сумма остальных).
- thm2: N = N_1 + ... + N_{p+1}, x действует на N_i = GF(q) умножением на zeta^{phi_i(x)},
  где phi_i: P -> Z/p - эпиморфизм с ядром P_i из покрытия P максимальными подгруппами.
  Матрицы хранятся над простым подполем GF(l), q = l^k.
"""
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
from sympy import factorint, isprime, primerange

from app.config import Settings, settings as default_settings
from app.exceptions import (
    CyclicGroup,
    InternalError,
    InvalidPrime,
    NotPrime,
    SamePrime,
    ShapeError,
    TooLargeToEnumerate,
    WrongProvenance,
)
from app.models import Provenance
from app.schemas import TableRow
from app.services.finite_field import FieldGF, MatrixGF, Subspace, element_of_order, make_field, stacked_kernel
from app.services.pgroup import PGroup, SubgroupOfP

logger = logging.getLogger(__name__)


class LinearAction:
    """
    Гомоморфизм rho: P -> GL(d, l). Гомоморфность проверяется полным перебором при создании.

    Args:
        group: действующая p-группа
        field: простое поле GF(l), над которым записаны матрицы
        matrices: массив размера |P| x d x d, matrices[x] = rho(x)
        provenance: происхождение (thm1, thm2, custom)
        params: параметры конструкции
        cover: максимальные подгруппы P_1..P_{p+1} (для thm1/thm2)
    """

    def __init__(
        self,
        group: PGroup,
        field: FieldGF,
        matrices: np.ndarray,
        provenance: Provenance,
        params: Optional[Dict[str, int]] = None,
        cover: Optional[List[SubgroupOfP]] = None,
    ):
        matrices = np.asarray(matrices, dtype=np.int64)
        if matrices.ndim != 3 or matrices.shape[0] != group.order or matrices.shape[1] != matrices.shape[2]:
            raise ShapeError(f"Ожидался массив матриц размера {group.order} x d x d, получено {matrices.shape}")
        if not field.is_prime_field:
            raise ShapeError("Матрицы действия должны быть записаны над простым полем")
        self.group = group
        self.field = field
        self.matrices = matrices % field.characteristic
        self.dim = int(matrices.shape[1])
        self.provenance = provenance
        self.params = dict(params or {})
        self.cover = cover
        self._fixed_cache: Dict[int, Subspace] = {}
        self._check_homomorphism()
        if provenance in (Provenance.THM1, Provenance.THM2) and self.fixed_space_of_group().dimension != 0:
            raise InternalError(f"Для конструкции {provenance.value} получено C_N(P) != 1")

    def __repr__(self):
        return f"LinearAction({self.provenance.value}, {self.group.name}, GF({self.field.order})^{self.dim})"

    def _check_homomorphism(self):
        ell = self.field.characteristic
        R = self.matrices
        if not np.array_equal(R[0], np.eye(self.dim, dtype=np.int64)):
            raise ShapeError("rho(1) должна быть единичной матрицей")
        for x in range(self.group.order):
            products = np.matmul(R[x][None, :, :], R) % ell
            if not np.array_equal(products, R[self.group.table[x]]):
                raise ShapeError(f"rho не является гомоморфизмом: нарушено для элемента {x}")

    @property
    def characteristic(self) -> int:
        return self.field.characteristic

    @property
    def module_order(self) -> int:
        return self.field.order ** self.dim

    def matrix(self, x: int) -> MatrixGF:
        return MatrixGF(self.field, self.matrices[x])

    def apply(self, x: int, vectors) -> np.ndarray:
        """rho(x) v для строк-векторов"""
        V = np.asarray(vectors, dtype=np.int64)
        return (V @ self.matrices[x].T) % self.field.characteristic

    def shifted(self, x: int) -> np.ndarray:
        """Матрица rho(x) - I"""
        return (self.matrices[x] - np.eye(self.dim, dtype=np.int64)) % self.field.characteristic

    def fixed_space(self, x: int) -> Subspace:
        """C_N(x) = ker(rho(x) - I)"""
        x = int(x)
        if x not in self._fixed_cache:
            self._fixed_cache[x] = Subspace.kernel_of(MatrixGF(self.field, self.shifted(x)))
        return self._fixed_cache[x]

    def fixed_space_of(self, members: Sequence[int]) -> Subspace:
        """C_N(H) как пересечение ядер по элементам H"""
        return stacked_kernel(self.field, [self.shifted(x) for x in members if x != 0], self.dim)

    def fixed_space_of_group(self) -> Subspace:
        if "_group_fixed" not in self.__dict__:
            self.__dict__["_group_fixed"] = self.fixed_space_of(range(self.group.order))
        return self.__dict__["_group_fixed"]

    def expected_cover_dimension(self) -> Optional[int]:
        """Размерность C_N(P_i), заявленная для конструкции"""
        if self.provenance == Provenance.THM1:
            return self.group.p - 1
        if self.provenance == Provenance.THM2:
            return self.params["degree"]
        return None


def is_prime_power(n: int) -> bool:
    return n > 1 and len(factorint(n)) == 1


def prime_power_decomposition(q: int) -> Tuple[int, int]:
    factors = factorint(q)
    if len(factors) != 1:
        raise NotPrime(f"{q} не является степенью простого числа")
    (ell, k), = factors.items()
    return int(ell), int(k)


def smallest_prime_power_1modp(p: int) -> int:
    """Наименьшая степень простого q > 1 с q = 1 (mod p)"""
    if not isprime(p):
        raise InvalidPrime(f"{p} не является простым числом")
    q = p + 1
    while not is_prime_power(q):
        q += p
    return q


def power_table(pmax: int) -> List[TableRow]:
    """Строки (p, q, q^{p+1}) для всех простых p <= pmax"""
    rows = []
    for p in primerange(2, pmax + 1):
        q = smallest_prime_power_1modp(int(p))
        ell, k = prime_power_decomposition(q)
        rows.append(
            TableRow(
                p=int(p),
                q=q,
                exponent=int(p) + 1,
                value=q ** (int(p) + 1),
                prime_form=f"{ell}^{k * (int(p) + 1)}",
            )
        )
    return rows


def _require_provenance(action: LinearAction, provenance: Provenance):
    if action.provenance != provenance:
        raise WrongProvenance(
            f"Операция определена для конструкции {provenance.value}, а действие - {action.provenance.value}"
        )


def thm1_action(group: PGroup, q: int, config: Optional[Settings] = None) -> LinearAction:
    """Действие P на фактор регулярного GF(q)P-модуля по тривиальному подмодулю"""
    config = config or default_settings
    if not isprime(q):
        raise NotPrime(f"q = {q} не является простым числом")
    if q == group.p:
        raise SamePrime(f"q = {q} совпадает с p")
    if group.is_cyclic():
        raise CyclicGroup(f"Группа {group.name} циклическая")
    if group.order > config.thm1_max_group_order:
        raise TooLargeToEnumerate(
            f"Регулярный модуль размерности {group.order - 1} превышает лимит {config.thm1_max_group_order - 1}"
        )
    field = make_field(q, 1, config.field_ceiling)
    n, d = group.order, group.order - 1
    matrices = np.zeros((n, d, d), dtype=np.int64)
    for x in range(n):
        for g in range(1, n):
            xg = int(group.table[x, g])
            if xg == 0:
                matrices[x, :, g - 1] = q - 1
            else:
                matrices[x, xg - 1, g - 1] = 1
    action = LinearAction(
        group, field, matrices, Provenance.THM1,
        params={"q": q, "characteristic": q, "degree": 1},
        cover=group.maximal_cover(),
    )
    logger.info(f"Построено действие thm1: {group.name} на GF({q})^{d}")
    return action


def _regular_image(action: LinearAction, members: Sequence[int]) -> np.ndarray:
    """Образ суммы v_c (c из members) в N = V/Z"""
    q = action.field.characteristic
    vector = np.zeros(action.dim, dtype=np.int64)
    for c in members:
        if c == 0:
            vector = vector + (q - 1)
        else:
            vector[c - 1] += 1
    return vector % q


def witness_fixed_vector(action: LinearAction, x: int) -> np.ndarray:
    """w = образ суммы v_c по c из <x>; неподвижен относительно x"""
    _require_provenance(action, Provenance.THM1)
    return _regular_image(action, action.group.cyclic_subgroup(x).members)


def coset_fixed_basis(action: LinearAction, x: int) -> np.ndarray:
    """Образы w_C для всех правых смежных классов C = <x>y, упорядоченных по наименьшему элементу"""
    _require_provenance(action, Provenance.THM1)
    group = action.group
    cyclic = np.array(group.cyclic_subgroup(x).members, dtype=np.int64)
    seen = set()
    images = []
    for y in range(group.order):
        coset = tuple(sorted(group.table[cyclic, y].tolist()))
        if coset in seen:
            continue
        seen.add(coset)
        images.append(_regular_image(action, coset))
    return np.array(images, dtype=np.int64)


def fixed_space_lower_bound(action: LinearAction, x: int) -> int:
    """Нижняя оценка dim C_N(x) >= |P:<x>| - 1 для thm1"""
    _require_provenance(action, Provenance.THM1)
    return action.group.order // int(action.group.element_orders[x]) - 1


def thm2_action(group: PGroup, config: Optional[Settings] = None) -> LinearAction:
    """Сумма p+1 одномерных GF(q)P-модулей с ядрами P_1, ..., P_{p+1}"""
    config = config or default_settings
    if group.is_cyclic():
        raise CyclicGroup(f"Группа {group.name} циклическая")
    p = group.p
    q = smallest_prime_power_1modp(p)
    ell, k = prime_power_decomposition(q)
    scalar_field = make_field(ell, k, config.field_ceiling)
    prime_field = make_field(ell, 1, config.field_ceiling)
    zeta = element_of_order(scalar_field, p)
    cover = group.maximal_cover()
    homs = [group.hom_to_cp(sub) for sub in cover]
    blocks = [scalar_field.multiplication_matrix(scalar_field.pow(zeta, j)) for j in range(p)]

    d = (p + 1) * k
    matrices = np.zeros((group.order, d, d), dtype=np.int64)
    for x in range(group.order):
        for i, phi in enumerate(homs):
            matrices[x, i * k:(i + 1) * k, i * k:(i + 1) * k] = blocks[int(phi[x])]
    action = LinearAction(
        group, prime_field, matrices, Provenance.THM2,
        params={"q": q, "characteristic": ell, "degree": k, "zeta": zeta},
        cover=cover,
    )
    logger.info(f"Построено действие thm2: {group.name} на GF({q})^{p + 1}, zeta = {zeta}")
    return action


def custom_action(group: PGroup, ell: int, matrices, config: Optional[Settings] = None) -> LinearAction:
    config = config or default_settings
    field = make_field(ell, 1, config.field_ceiling)
    return LinearAction(group, field, matrices, Provenance.CUSTOM, params={"characteristic": ell, "degree": 1})


def trivial_action(group: PGroup, ell: int, dim: int, config: Optional[Settings] = None) -> LinearAction:
    """Тривиальное действие: P нормальна в N x P"""
    matrices = np.broadcast_to(np.eye(dim, dtype=np.int64), (group.order, dim, dim)).copy()
    return custom_action(group, ell, matrices, config)

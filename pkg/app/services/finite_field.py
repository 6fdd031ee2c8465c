"""
Точная арифметика в GF(q), q = l^k, и линейная алгебра над ней.

Элементы поля кодируются целыми 0..q-1: цифры в системе счисления по основанию l
- это коэффициенты многочлена, свободный член в младшем разряде. Этот порядок
и есть "порядок перечисления" везде, где обещан детерминизм.
"""
from functools import cached_property, lru_cache
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np
from sympy import factorint, isprime

from app.config import settings
from app.exceptions import (
    FieldTooLarge,
    InvalidDegree,
    InvalidPrime,
    NoSuchRoot,
    NotIrreducible,
    ShapeError,
)

logger = logging.getLogger(__name__)


def _digits(value: int, base: int, length: int) -> List[int]:
    out = []
    for _ in range(length):
        value, r = divmod(value, base)
        out.append(r)
    return out


def _from_digits(digits: Sequence[int], base: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * base + int(d)
    return value


def _poly_rem(a: List[int], b: List[int], ell: int) -> List[int]:
    """Остаток от деления a на унитарный b (коэффициенты - младший первым)"""
    a = [int(x) % ell for x in a]
    db = len(b) - 1
    while True:
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            return a
        coef = a[-1]
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % ell


def is_irreducible(modulus: Sequence[int], ell: int) -> bool:
    """Пробное деление на все унитарные многочлены степени <= k/2"""
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for low in range(ell ** d):
            divisor = _digits(low, ell, d) + [1]
            if not _poly_rem(modulus, divisor, ell):
                return False
    return True


class FieldGF:
    """
    Конечное поле GF(l^k) с фиксированным неприводимым модулем.

    Операции add/sub/neg/mul принимают как целые, так и numpy-массивы кодов.
    """

    def __init__(self, characteristic: int, degree: int, modulus: Sequence[int]):
        if len(modulus) != degree + 1 or modulus[-1] != 1:
            raise NotIrreducible(f"Модуль должен быть унитарным многочленом степени {degree}")
        if not is_irreducible(modulus, characteristic):
            raise NotIrreducible(f"Многочлен {list(modulus)} приводим над GF({characteristic})")
        self.characteristic = characteristic
        self.degree = degree
        self.modulus = tuple(int(c) for c in modulus)
        self.order = characteristic ** degree
        self._weights = [characteristic ** j for j in range(degree)]

    def __repr__(self):
        return f"GF({self.characteristic}^{self.degree})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldGF)
            and self.characteristic == other.characteristic
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.characteristic, self.modulus))

    @property
    def is_prime_field(self) -> bool:
        return self.degree == 1

    def elements(self) -> range:
        return range(self.order)

    def coordinates(self, a: int) -> List[int]:
        """Координаты элемента над простым подполем (базис 1, t, ..., t^(k-1))"""
        return _digits(int(a), self.characteristic, self.degree)

    def from_coordinates(self, coords: Sequence[int]) -> int:
        return _from_digits(coords, self.characteristic)

    # --- многочленное умножение, используется до построения таблиц ---

    def _mul_poly(self, a: int, b: int) -> int:
        ell, k = self.characteristic, self.degree
        da, db = _digits(a, ell, k), _digits(b, ell, k)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % ell
        rem = _poly_rem(prod, list(self.modulus), ell)
        return _from_digits(rem, ell)

    def _pow_poly(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    @cached_property
    def primitive_element(self) -> int:
        """Наименьший в порядке перечисления порождающий мультипликативной группы"""
        if self.order == 2:
            return 1
        n = self.order - 1
        prime_factors = list(factorint(n))
        for g in range(2, self.order):
            if all(self._pow_poly(g, n // r) != 1 for r in prime_factors):
                return g
        raise NoSuchRoot(f"В {self} не найден примитивный элемент")

    @cached_property
    def _log_tables(self) -> Tuple[np.ndarray, np.ndarray]:
        n = self.order - 1
        exp = np.zeros(n, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        g = self.primitive_element
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, g)
        return exp, log

    # --- векторизованная арифметика ---

    @staticmethod
    def _finish(result, *inputs):
        if all(isinstance(v, (int, np.integer)) for v in inputs):
            return int(result)
        return result

    def _digitwise(self, a, b, sign: int):
        ell = self.characteristic
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        result = np.zeros(np.broadcast(a_arr, b_arr).shape, dtype=np.int64)
        for w in self._weights:
            da = (a_arr // w) % ell
            db = (b_arr // w) % ell
            result = result + ((da + sign * db) % ell) * w
        return result

    def add(self, a, b):
        if self.is_prime_field:
            result = (np.asarray(a, dtype=np.int64) + b) % self.characteristic
        else:
            result = self._digitwise(a, b, 1)
        return self._finish(result, a, b)

    def sub(self, a, b):
        if self.is_prime_field:
            result = (np.asarray(a, dtype=np.int64) - b) % self.characteristic
        else:
            result = self._digitwise(a, b, -1)
        return self._finish(result, a, b)

    def neg(self, a):
        return self.sub(0, a) if isinstance(a, (int, np.integer)) else self.sub(np.zeros_like(a), a)

    def mul(self, a, b):
        if self.is_prime_field:
            result = (np.asarray(a, dtype=np.int64) * b) % self.characteristic
            return self._finish(result, a, b)
        exp, log = self._log_tables
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        result = exp[(log[a_arr] + log[b_arr]) % (self.order - 1)]
        result = np.where((a_arr == 0) | (b_arr == 0), 0, result)
        return self._finish(result, a, b)

    def inv(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ZeroDivisionError("Нулевой элемент не обратим")
        if self.is_prime_field:
            return pow(a, -1, self.characteristic)
        exp, log = self._log_tables
        return int(exp[(-log[a]) % (self.order - 1)])

    def pow(self, a: int, e: int) -> int:
        a = int(a)
        if e < 0:
            a, e = self.inv(a), -e
        if self.is_prime_field:
            return pow(a, e, self.characteristic)
        if a == 0:
            return 1 if e == 0 else 0
        exp, log = self._log_tables
        return int(exp[(int(log[a]) * e) % (self.order - 1)])

    def multiplication_matrix(self, a: int) -> np.ndarray:
        """Матрица умножения на a над простым подполем в базисе 1, t, ..., t^(k-1)"""
        k = self.degree
        columns = [self.coordinates(self.mul(int(a), self.characteristic ** c)) for c in range(k)]
        return np.array(columns, dtype=np.int64).T


@lru_cache(maxsize=None)
def _make_field_cached(ell: int, k: int) -> FieldGF:
    if k == 1:
        return FieldGF(ell, 1, (0, 1))
    for low in range(ell ** k):
        modulus = _digits(low, ell, k) + [1]
        if is_irreducible(modulus, ell):
            return FieldGF(ell, k, modulus)
    raise NotIrreducible(f"Нет неприводимого многочлена степени {k} над GF({ell})")


def make_field(ell: int, k: int = 1, ceiling: Optional[int] = None) -> FieldGF:
    """
    Строит GF(l^k) с лексикографически наименьшим унитарным неприводимым модулем.

    Args:
        ell: характеристика (простое число)
        k: степень расширения
        ceiling: максимальный порядок поля (по умолчанию из настроек)
    """
    if not isinstance(ell, (int, np.integer)) or not isprime(int(ell)):
        raise InvalidPrime(f"{ell} не является простым числом")
    if k < 1:
        raise InvalidDegree(f"Степень расширения должна быть >= 1, получено {k}")
    ceiling = settings.field_ceiling if ceiling is None else ceiling
    if ell ** k > ceiling:
        raise FieldTooLarge(f"Поле порядка {ell}^{k} превышает потолок {ceiling}", order=ell ** k)
    return _make_field_cached(int(ell), int(k))


def element_of_order(field: FieldGF, p: int) -> int:
    """Первообразный корень степени p из единицы: g^((q-1)/p) для наименьшего подходящего g"""
    if not isprime(p):
        raise InvalidPrime(f"{p} не является простым числом")
    if (field.order - 1) % p != 0:
        raise NoSuchRoot(f"{p} не делит {field.order} - 1: в {field} нет корня степени {p}")
    e = (field.order - 1) // p
    for g in range(1, field.order):
        zeta = field.pow(g, e)
        if zeta != 1:
            return zeta
    raise NoSuchRoot(f"В {field} не найден элемент порядка {p}")


def _rref(field: FieldGF, entries: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Приведенный ступенчатый вид и список ведущих столбцов"""
    A = np.array(entries, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ShapeError("Ожидалась двумерная матрица")
    rows, cols = A.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nonzero = np.nonzero(A[r:, c])[0]
        if nonzero.size == 0:
            continue
        p = r + int(nonzero[0])
        if p != r:
            A[[r, p], :] = A[[p, r], :]
        A[r] = field.mul(A[r], field.inv(int(A[r, c])))
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others] = field.sub(A[others], field.mul(A[others, c:c + 1], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


class MatrixGF:
    """Матрица над GF(q), элементы хранятся кодами в numpy-массиве"""

    def __init__(self, field: FieldGF, entries):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise ShapeError(f"Ожидалась двумерная матрица, получено измерений: {arr.ndim}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise ShapeError(f"Элементы матрицы вне диапазона 0..{field.order - 1}")
        self.field = field
        self.entries = arr
        self.rows, self.cols = arr.shape

    @classmethod
    def identity(cls, field: FieldGF, n: int) -> "MatrixGF":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldGF, rows: int, cols: int) -> "MatrixGF":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    def __repr__(self):
        return f"MatrixGF({self.field}, {self.rows}x{self.cols})"

    def __eq__(self, other):
        return (
            isinstance(other, MatrixGF)
            and self.field == other.field
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def _check_same_shape(self, other: "MatrixGF"):
        if self.entries.shape != other.entries.shape:
            raise ShapeError(f"Несовместимые размеры {self.entries.shape} и {other.entries.shape}")

    def __add__(self, other: "MatrixGF") -> "MatrixGF":
        self._check_same_shape(other)
        return MatrixGF(self.field, self.field.add(self.entries, other.entries))

    def __sub__(self, other: "MatrixGF") -> "MatrixGF":
        self._check_same_shape(other)
        return MatrixGF(self.field, self.field.sub(self.entries, other.entries))

    def __matmul__(self, other):
        if isinstance(other, MatrixGF):
            if self.cols != other.rows:
                raise ShapeError(f"Нельзя умножить {self.rows}x{self.cols} на {other.rows}x{other.cols}")
            return MatrixGF(self.field, _matmul(self.field, self.entries, other.entries))
        vector = np.asarray(other, dtype=np.int64)
        if vector.ndim != 1 or vector.shape[0] != self.cols:
            raise ShapeError(f"Вектор длины {vector.shape} несовместим с матрицей {self.rows}x{self.cols}")
        return _matmul(self.field, self.entries, vector[:, None])[:, 0]

    def rref(self) -> Tuple[np.ndarray, List[int]]:
        return _rref(self.field, self.entries)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> np.ndarray:
        """Базис ядра в приведенном ступенчатом виде; строки - векторы"""
        R, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = np.zeros((len(free), self.cols), dtype=np.int64)
        for i, f in enumerate(free):
            basis[i, f] = 1
            for row, c in enumerate(pivots):
                basis[i, c] = self.field.neg(int(R[row, f]))
        if len(free) == 0:
            return basis
        echelon, piv = _rref(self.field, basis)
        return echelon[: len(piv)]

    def solve_right(self, b) -> Optional[np.ndarray]:
        """Одно решение Mx = b или None, если система несовместна"""
        b = np.asarray(b, dtype=np.int64)
        if b.ndim != 1 or b.shape[0] != self.rows:
            raise ShapeError(f"Правая часть длины {b.shape} несовместима с матрицей {self.rows}x{self.cols}")
        augmented = np.concatenate([self.entries, b[:, None]], axis=1)
        R, pivots = _rref(self.field, augmented)
        if self.cols in pivots:
            return None
        x = np.zeros(self.cols, dtype=np.int64)
        for row, c in enumerate(pivots):
            x[c] = R[row, self.cols]
        return x

    def inverse(self) -> "MatrixGF":
        if self.rows != self.cols:
            raise ShapeError("Обратная матрица существует только для квадратной матрицы")
        n = self.rows
        augmented = np.concatenate([self.entries, np.eye(n, dtype=np.int64)], axis=1)
        R, pivots = _rref(self.field, augmented)
        if pivots[:n] != list(range(n)):
            raise ShapeError("Матрица вырождена")
        return MatrixGF(self.field, R[:, n:])


def _matmul(field: FieldGF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if field.is_prime_field:
        return (A @ B) % field.characteristic
    acc = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        acc = field.add(acc, field.mul(A[:, k:k + 1], B[k:k + 1, :]))
    return acc


class Subspace:
    """
    Подпространство GF(l)^d, заданное базисом в приведенном ступенчатом виде.

    Канонический представитель смежного класса v + W - вектор с нулями в ведущих
    столбцах базиса; он же лексикографически наименьший в классе.
    """

    def __init__(self, field: FieldGF, dim: int, vectors=None):
        self.field = field
        self.ambient_dim = dim
        vectors = np.zeros((0, dim), dtype=np.int64) if vectors is None else np.asarray(vectors, dtype=np.int64)
        vectors = vectors.reshape(-1, dim)
        if vectors.shape[0]:
            R, pivots = _rref(field, vectors)
            self.basis = R[: len(pivots)]
            self.pivots = pivots
        else:
            self.basis = np.zeros((0, dim), dtype=np.int64)
            self.pivots = []

    @classmethod
    def kernel_of(cls, matrix: MatrixGF) -> "Subspace":
        return cls(matrix.field, matrix.cols, matrix.kernel())

    @property
    def dimension(self) -> int:
        return len(self.pivots)

    def order(self) -> int:
        return self.field.order ** self.dimension

    def index(self) -> int:
        """Индекс |GF(l)^d : W|"""
        return self.field.order ** (self.ambient_dim - self.dimension)

    def reduce(self, vectors) -> np.ndarray:
        """Канонические представители смежных классов для строк vectors"""
        V = np.array(vectors, dtype=np.int64, copy=True)
        single = V.ndim == 1
        V = V.reshape(-1, self.ambient_dim)
        for row, c in zip(self.basis, self.pivots):
            V = self.field.sub(V, self.field.mul(V[:, c:c + 1], row[None, :]))
        return V[0] if single else V

    def contains(self, vector) -> bool:
        return not np.any(self.reduce(vector))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and bool(np.array_equal(self.basis, other.basis))
        )

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.ambient_dim, np.concatenate([self.basis, other.basis]))

    def transversal(self) -> np.ndarray:
        """Все канонические представители в лексикографическом порядке"""
        free = [c for c in range(self.ambient_dim) if c not in self.pivots]
        reps = np.zeros((self.field.order ** len(free), self.ambient_dim), dtype=np.int64)
        if free:
            reps[:, free] = all_vectors(self.field, len(free))
        return reps


def all_vectors(field: FieldGF, dim: int) -> np.ndarray:
    """Все векторы GF(q)^dim; номер строки совпадает с кодом encode_vectors"""
    codes = np.arange(field.order ** dim, dtype=np.int64)
    out = np.zeros((codes.shape[0], dim), dtype=np.int64)
    for i in range(dim):
        out[:, i] = (codes // field.order ** (dim - 1 - i)) % field.order
    return out


def encode_vectors(field: FieldGF, vectors) -> np.ndarray:
    """Код вектора: первая координата - старший разряд, так что порядок кодов лексикографический"""
    V = np.asarray(vectors, dtype=np.int64)
    dim = V.shape[-1]
    if field.order ** dim > 2 ** 62:
        raise ShapeError(f"Пространство GF({field.order})^{dim} слишком велико для кодирования")
    weights = np.array([field.order ** (dim - 1 - i) for i in range(dim)], dtype=np.int64)
    return V @ weights


def stacked_kernel(field: FieldGF, blocks: Sequence[np.ndarray], dim: int) -> Subspace:
    """Пересечение ядер матриц из blocks"""
    if not blocks:
        return Subspace(field, dim, np.eye(dim, dtype=np.int64))
    stacked = np.concatenate([np.asarray(b, dtype=np.int64) for b in blocks], axis=0)
    return Subspace.kernel_of(MatrixGF(field, stacked))


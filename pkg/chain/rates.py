"""
Матрицы интенсивностей непрерывных цепей Маркова.

Соглашение о столбцах: q[j][i] - интенсивность перехода из состояния i в
состояние j. Столбцы суммируются в ноль, внедиагональные элементы
неотрицательны. Большинство библиотек хранят генератор по строкам;
здесь генератором является транспонированная матрица q.T.
"""
import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from config import Config
from errors import ColumnSumNonzero, DimensionMismatch, NegativeOffDiagonal, NonFinite

logger = logging.getLogger(__name__)

StateIndex = int


@dataclass(frozen=True, eq=False)
class RateMatrix:
    n: int
    q: np.ndarray
    state_names: tuple[str, ...] = field(default=())

    @property
    def max_exit_rate(self) -> float:
        return float(np.max(np.abs(np.diag(self.q)))) if self.n else 0.0

    def column(self, x: StateIndex) -> np.ndarray:
        return self.q[:, x]

    def check_state(self, x: StateIndex) -> StateIndex:
        if not 0 <= int(x) < self.n:
            raise DimensionMismatch(f"Состояние {x} вне диапазона [0, {self.n})", state=int(x), n=self.n)
        return int(x)

    def states_reaching(self, target) -> set[int]:
        """
        Множество состояний, из которых цель достижима по носителю матрицы
        (обратный поиск в ширину от целевых состояний).
        """
        reached = {self.check_state(x) for x in target}
        queue = deque(reached)
        while queue:
            j = queue.popleft()
            for i in np.nonzero(self.q[j, :] > 0)[0]:
                i = int(i)
                if i != j and i not in reached:
                    reached.add(i)
                    queue.append(i)
        return reached


def validate_rate_matrix(q, state_names=None, tol: float = Config.COLUMN_SUM_TOL,
                         renormalize_tol: float = Config.RENORMALIZE_TOL) -> RateMatrix:
    """
    Проверяет и возвращает матрицу интенсивностей.
    Невязки сумм столбцов меньше renormalize_tol поглощаются диагональю,
    большие невязки считаются ошибкой модели.
    """
    arr = np.array(q, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"Ожидалась квадратная матрица, получена форма {arr.shape}", shape=list(arr.shape))
    n = arr.shape[0]

    bad = np.argwhere(~np.isfinite(arr))
    if len(bad):
        raise NonFinite(int(bad[0][0]), int(bad[0][1]))

    off = arr - np.diag(np.diag(arr))
    negative = np.argwhere(off < 0)
    if len(negative):
        i, j = (int(v) for v in negative[0])
        raise NegativeOffDiagonal(i, j, float(arr[i, j]))

    residuals = arr.sum(axis=0)
    for col, residual in enumerate(residuals):
        if abs(residual) <= tol:
            continue
        if abs(residual) < renormalize_tol:
            arr[col, col] -= residual
            logger.debug("Столбец %s перенормирован на %.3e", col, residual)
        else:
            raise ColumnSumNonzero(col, float(residual))

    names = tuple(str(s) for s in state_names) if state_names else ()
    if names and len(names) != n:
        raise DimensionMismatch(f"Имён состояний {len(names)}, а состояний {n}")

    arr.setflags(write=False)
    return RateMatrix(n=n, q=arr, state_names=names)


def _same_dimension(a: RateMatrix, b: RateMatrix):
    if a.n != b.n:
        raise DimensionMismatch(f"Размерности матриц не совпадают: {a.n} и {b.n}", left=a.n, right=b.n)


def gamma_controlled(a: RateMatrix, b: RateMatrix, gamma: float, columns=None,
                     tol: float = Config.COLUMN_SUM_TOL) -> bool:
    """
    Проверяет, что B γ-контролируется матрицей A: B − γA является матрицей
    интенсивностей и её диагональ не превосходит −γ.
    columns ограничивает проверку заданными столбцами.
    """
    _same_dimension(a, b)
    cols = range(a.n) if columns is None else [int(c) for c in columns]
    diff = b.q - gamma * a.q
    for x in cols:
        column = diff[:, x]
        off = np.delete(column, x)
        if np.any(off < -tol):
            return False
        if column[x] > -gamma + tol:
            return False
    return True


def gamma_equivalent(a: RateMatrix, b: RateMatrix, gamma: float, columns=None) -> bool:
    return gamma_controlled(a, b, gamma, columns) and gamma_controlled(b, a, gamma, columns)


def max_gamma(a: RateMatrix, bs: list[RateMatrix], columns=None, tol: float = Config.GAMMA_TOL) -> float:
    """
    Наибольшее γ ∈ (0, 1], при котором A ∼_γ B для всех B из списка.
    Допустимое множество имеет вид (0, γ*], поэтому годится бисекция.
    Возвращает 0, если подходящего γ нет.
    """
    for b in bs:
        _same_dimension(a, b)

    def feasible(gamma: float) -> bool:
        return all(gamma_equivalent(a, b, gamma, columns) for b in bs)

    if feasible(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def psi_matrix(a: RateMatrix, x: StateIndex) -> np.ndarray:
    """
    ψ = diag(A e_x) − A diag(e_x) − diag(e_x) A*.
    """
    x = a.check_state(x)
    e = np.zeros(a.n)
    e[x] = 1.0
    return np.diag(a.q @ e) - a.q @ np.diag(e) - np.diag(e) @ a.q.T


def seminorm_sq(a: RateMatrix, x: StateIndex, z) -> float:
    """
    ‖z‖²_M в состоянии x: Σ_{j≠x} (z_j − z_x)² q[j][x].
    """
    x = a.check_state(x)
    z = np.asarray(z, dtype=float)
    rates = a.q[:, x].copy()
    rates[x] = 0.0
    return float(np.sum((z - z[x]) ** 2 * rates))

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from chain.rates import RateMatrix, max_gamma
from errors import DimensionMismatch, EmptyControlSet, NotCertified

logger = logging.getLogger(__name__)

CostFn = Callable[[float, float, int, int], float]


@dataclass(frozen=True, eq=False)
class ControlSet:
    """
    Конечное множество управлений U: метки, матрицы A^u и стоимость L(t, y, x, u)
    (u - индекс управления). reference - опорная матрица A.
    columns ограничивает проверку A^u ∼_γ A живыми (нецелевыми) состояниями.
    """
    labels: tuple[str, ...]
    matrices: tuple[RateMatrix, ...]
    reference: RateMatrix
    cost: CostFn | None = None
    c: float = 0.0
    beta_hat: float = 0.0
    columns: tuple[int, ...] | None = None
    cost_table: np.ndarray | None = None
    cost_depends_on_t: bool | None = None
    cost_depends_on_y: bool | None = None
    gamma: float = field(init=False)

    def __post_init__(self):
        if not self.matrices:
            raise EmptyControlSet()
        if len(self.labels) != len(self.matrices):
            raise DimensionMismatch("Число меток не совпадает с числом матриц управлений")
        for m in self.matrices:
            if m.n != self.reference.n:
                raise DimensionMismatch(f"Матрица управления размерности {m.n}, ожидалась {self.reference.n}")
        if self.cost_table is not None and self.cost_table.shape != (self.reference.n, len(self.matrices)):
            raise DimensionMismatch("Таблица стоимостей должна иметь форму n × |U|")
        gamma = max_gamma(self.reference, list(self.matrices), self.columns)
        if gamma <= 0:
            raise NotCertified("Матрицы управлений не γ-эквивалентны опорной матрице ни при каком γ > 0")
        object.__setattr__(self, "gamma", gamma)
        # Вызываемая стоимость без явных флагов считается зависящей от t и y
        opaque = self.cost is not None and self.cost_table is None
        for flag in ("cost_depends_on_t", "cost_depends_on_y"):
            if getattr(self, flag) is None:
                object.__setattr__(self, flag, opaque)
        logger.debug("Множество управлений %s: γ = %.6f", self.labels, gamma)

    @classmethod
    def from_table(cls, labels, matrices, reference: RateMatrix, costs=None, columns=None) -> "ControlSet":
        """
        Декларативная форма: L(t, y, x, u) = costs[x][u] (по умолчанию 0).
        """
        table = np.zeros((reference.n, len(matrices))) if costs is None else np.asarray(costs, dtype=float)
        return cls(labels=tuple(str(s) for s in labels), matrices=tuple(matrices), reference=reference,
                   c=float(np.abs(table).max(initial=0.0)), columns=None if columns is None else tuple(columns),
                   cost_table=table)

    def __len__(self):
        return len(self.matrices)

    @property
    def y_free(self) -> bool:
        return self.cost_table is not None or not self.cost_depends_on_y

    def cost_value(self, t: float, y: float, x: int, u: int) -> float:
        if self.cost_table is not None:
            return float(self.cost_table[x, u])
        if self.cost is None:
            return 0.0
        return float(self.cost(t, y, x, u))

    def negated(self) -> "ControlSet":
        """
        То же множество со стоимостью −L.
        """
        if self.cost_table is not None:
            return ControlSet.from_table(self.labels, self.matrices, self.reference, -self.cost_table, self.columns)
        base = self.cost
        return ControlSet(labels=self.labels, matrices=self.matrices, reference=self.reference,
                          cost=(lambda t, y, x, u: -base(t, y, x, u)) if base else None, c=self.c,
                          beta_hat=self.beta_hat, columns=self.columns, cost_depends_on_t=self.cost_depends_on_t,
                          cost_depends_on_y=self.cost_depends_on_y)


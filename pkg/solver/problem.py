"""
Задача BSDE с терминальным моментом τ - первым попаданием цепи в множество Ξ.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from builders.matrices import MatrixBuilder
from chain.rates import RateMatrix
from drivers.base import MarkovianDriver
from errors import DimensionMismatch, NotCertified, UnreachableTarget

logger = logging.getLogger(__name__)


class Terminal:
    """
    Терминальная функция φ(t, x). values - таблица для не зависящей от
    времени φ, иначе fn(t, x).
    """

    def __init__(self, fn: Callable[[float, int], float], n: int, time_dependent: bool = True):
        self._fn = fn
        self.n = n
        self.time_dependent = time_dependent

    def __call__(self, t: float, x: int) -> float:
        return float(self._fn(float(t), int(x)))

    def vector(self, t: float) -> np.ndarray:
        return np.array([self(t, x) for x in range(self.n)])


def constant_terminal(values) -> Terminal:
    table = np.asarray(values, dtype=float)
    return Terminal(lambda _t, x: table[x], len(table), time_dependent=False)


def polynomial_terminal(coefficients) -> Terminal:
    """
    φ(t, x) = Σ_k c[x][k]·t^k.
    """
    table = np.asarray(coefficients, dtype=float)
    if table.ndim != 2:
        raise DimensionMismatch("Коэффициенты многочлена должны образовывать таблицу n × (степень + 1)")
    # np.polyval ждёт старшие коэффициенты первыми
    reversed_table = table[:, ::-1]
    dependent = bool(np.any(table[:, 1:] != 0))
    return Terminal(lambda t, x: np.polyval(reversed_table[x], t), table.shape[0], time_dependent=dependent)


def indicator_terminal(n: int, states) -> Terminal:
    values = np.zeros(n)
    values[list(states)] = 1.0
    return constant_terminal(values)


@dataclass(frozen=True, eq=False)
class HittingProblem:
    """
    Y_t = φ(τ, X_τ) + ∫_{]t,τ]} f(X_{u−}, u, Y_{u−}, Z_u) du − ∫ Z dM.

    Константы c, beta, beta_hat, beta_tilde, k - заявленные оценки роста
    |φ(t, x)| ≤ k(1 + t^β), |f(t, 0, 0)| ≤ c(1 + t^β̂) и показатель β̃ для K̃.
    strict=False отключает проверку достижимости цели (нужно только для задач
    на конечном горизонте).
    """
    chain: RateMatrix
    target: frozenset[int]
    terminal: Terminal
    driver: MarkovianDriver
    c: float = 0.0
    beta: float = 1.0
    beta_hat: float = 0.0
    beta_tilde: float = 0.0
    k: float = 1.0
    strict: bool = True
    absorbed_chain: RateMatrix = field(init=False, repr=False)

    def __post_init__(self):
        target = frozenset(self.chain.check_state(x) for x in self.target)
        object.__setattr__(self, "target", target)
        if not target:
            raise DimensionMismatch("Целевое множество пусто")
        if self.driver.n != self.chain.n or self.terminal.n != self.chain.n:
            raise DimensionMismatch(f"Драйвер и терминальная функция должны иметь размерность {self.chain.n}",
                                    driver=self.driver.n, terminal=self.terminal.n, chain=self.chain.n)
        if self.strict:
            reaching = self.chain.states_reaching(target)
            unreachable = sorted(set(range(self.chain.n)) - reaching)
            if unreachable:
                raise UnreachableTarget(unreachable)
        if not self.beta_hat < self.beta:
            raise NotCertified(f"Нужно β̂ < β, заявлено β̂ = {self.beta_hat}, β = {self.beta}")
        object.__setattr__(self, "absorbed_chain", MatrixBuilder.absorbed(self.chain, target))
        logger.debug("Задача: n = %d, цель %s, драйвер %s", self.chain.n, sorted(target), self.driver.name)

    @property
    def n(self) -> int:
        return self.chain.n

    @property
    def live(self) -> list[int]:
        return [x for x in range(self.chain.n) if x not in self.target]

    @property
    def target_list(self) -> list[int]:
        return sorted(self.target)

    @property
    def time_homogeneous(self) -> bool:
        return not self.driver.time_dependent and not self.terminal.time_dependent

    def with_terminal(self, terminal: Terminal) -> "HittingProblem":
        return replace(self, terminal=terminal)

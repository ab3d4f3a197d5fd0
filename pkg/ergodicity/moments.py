"""
Моменты времени достижения цели для конечных цепей: прямые линейные решения
на блоке живых состояний транспонированного генератора.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from chain.rates import RateMatrix
from errors import InvalidArgument, SingularSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MomentReport:
    """
    h[x] = E[e^{βτ} | X_0 = x]; worst_case - супремум по семейству Q_γ.
    При finite = False значения на живых состояниях равны inf.
    """
    beta: float
    values: np.ndarray
    finite: bool
    worst_case: bool = False
    gamma: float = 1.0
    iterations: int = 0
    policy: dict = field(default_factory=dict)

    def sup(self) -> float:
        return float(np.max(self.values))

    def rows(self) -> list[tuple]:
        return [(x, float(v)) for x, v in enumerate(self.values)]


def split_states(n: int, target) -> tuple[list[int], list[int]]:
    target = sorted({int(x) for x in target})
    if not target:
        raise InvalidArgument("Целевое множество пусто")
    live = [x for x in range(n) if x not in target]
    return live, target


def expected_hitting_times(a: RateMatrix, target) -> np.ndarray:
    """
    m = E[τ | X_0 = x]: (A*m)_x = −1 вне цели, m = 0 на цели.
    """
    live, target = split_states(a.n, target)
    unreachable = sorted(set(range(a.n)) - a.states_reaching(target))
    if unreachable:
        raise SingularSystem(unreachable)
    m = np.zeros(a.n)
    if not live:
        return m
    at = a.q.T
    try:
        m[live] = scipy.linalg.solve(at[np.ix_(live, live)], -np.ones(len(live)))
    except (np.linalg.LinAlgError, ValueError):
        raise SingularSystem(live)
    return m


def live_abscissa(q: np.ndarray, live: list[int]) -> float:
    """
    −max Re λ(Q*_LL): граница сходимости экспоненциального момента.
    """
    if not live:
        return np.inf
    block = q.T[np.ix_(live, live)]
    return float(-np.max(scipy.linalg.eigvals(block).real))


def solve_moment(q: np.ndarray, live: list[int], target: list[int], beta: float) -> np.ndarray | None:
    """
    Решение (Q*_LL + βI)h_L = −Q*_LT·𝟙, h = 1 на цели, для матрицы q в
    соглашении столбцов. None, если момент бесконечен.
    """
    n = q.shape[0]
    h = np.ones(n)
    if not live:
        return h
    if beta >= live_abscissa(q, live):
        return None
    qt = q.T
    system = qt[np.ix_(live, live)] + beta * np.eye(len(live))
    rhs = -qt[np.ix_(live, target)].sum(axis=1)
    try:
        h[live] = scipy.linalg.solve(system, rhs)
    except (np.linalg.LinAlgError, ValueError):
        return None
    if not np.all(np.isfinite(h)) or np.any(h[live] <= 0):
        return None
    return h


def moment_residual(a: RateMatrix, target, beta: float, h) -> float:
    """
    max |β·h_x + Σ_j q_jx (h_j − h_x)| по живым состояниям.
    """
    live, _ = split_states(a.n, target)
    h = np.asarray(h, dtype=float)
    residual = beta * h + a.q.T @ h
    return float(np.abs(residual[live]).max(initial=0.0))


def exp_moment(a: RateMatrix, target, beta: float) -> MomentReport:
    if beta <= 0:
        raise InvalidArgument(f"beta должно быть положительным, получено {beta}")
    live, target = split_states(a.n, target)
    h = solve_moment(a.q, live, target, beta)
    if h is None:
        logger.info("E[exp(%.4g τ)] бесконечно", beta)
        values = np.ones(a.n)
        values[live] = np.inf
        return MomentReport(beta, values, finite=False)
    return MomentReport(beta, h, finite=True)

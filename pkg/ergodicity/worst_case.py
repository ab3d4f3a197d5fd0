"""
Наихудший экспоненциальный момент по семейству Q_γ.

Компенсатор под мерой из Q_γ в состоянии x имеет интенсивности b_jx из
отрезков [γ·a_jx, a_jx/γ] (j ≠ x), диагональ дополняет столбец до нуля.
Ограничения разделяются по столбцам, поэтому уравнение Беллмана
sup_B {β h_x + Σ_j b_jx (h_j − h_x)} = 0 решается итерацией по стратегиям,
где стратегия - выбор вершины многогранника в каждом живом столбце.
"""
import itertools
import logging

import numpy as np
from scipy.optimize import linprog

from chain.rates import RateMatrix
from config import Config
from ergodicity.moments import MomentReport, exp_moment, live_abscissa, solve_moment, split_states
from errors import InvalidArgument, NoConvergence

logger = logging.getLogger(__name__)

IMPROVEMENT_SLACK = 1e-12


def column_bounds(a: RateMatrix, x: int, gamma: float):
    """
    Индексы j ≠ x с a_jx > 0 и границы отрезков для b_jx.
    """
    col = a.q[:, x]
    support = [j for j in range(a.n) if j != x and col[j] > 0]
    lo = np.array([gamma * col[j] for j in support])
    hi = np.array([col[j] / gamma for j in support])
    return support, lo, hi


def column_vertices(a: RateMatrix, x: int, gamma: float) -> np.ndarray:
    """
    Все вершины многогранника столбца x: массив (число вершин, n).
    """
    support, lo, hi = column_bounds(a, x, gamma)
    corners = []
    for choice in itertools.product((0, 1), repeat=len(support)):
        col = np.zeros(a.n)
        for k, j in enumerate(support):
            col[j] = hi[k] if choice[k] else lo[k]
        col[x] = -col.sum()
        corners.append(col)
    return np.array(corners)


def _best_column(a: RateMatrix, x: int, gamma: float, h: np.ndarray, vertices) -> np.ndarray:
    """
    Столбец многогранника, максимизирующий Σ_j b_jx (h_j − h_x).
    """
    diff = h - h[x]
    if vertices is not None:
        return np.array(vertices[int(np.argmax(vertices @ diff))])
    support, lo, hi = column_bounds(a, x, gamma)
    result = linprog(-diff[support], bounds=list(zip(lo, hi)), method="highs")
    col = np.zeros(a.n)
    col[support] = result.x if result.success else lo
    col[x] = -col.sum()
    return col


def worst_case_exp_moment(a: RateMatrix, gamma: float, target, beta: float, max_iter: int = 200,
                          vertex_limit: int = Config.VERTEX_LIMIT) -> MomentReport:
    """
    sup_{B ∼ Q_γ} E^B[e^{βτ}] итерацией по стратегиям из стартовой B = A.
    Столбцы с числом рёбер больше vertex_limit улучшаются через LP.
    """
    if not 0 < gamma <= 1:
        raise InvalidArgument(f"gamma должно лежать в (0, 1], получено {gamma}")
    if beta <= 0:
        raise InvalidArgument(f"beta должно быть положительным, получено {beta}")
    if gamma == 1.0:
        nominal = exp_moment(a, target, beta)
        return MomentReport(beta, nominal.values, nominal.finite, worst_case=True, gamma=1.0)

    live, target = split_states(a.n, target)
    vertices = {}
    for x in live:
        support, _, _ = column_bounds(a, x, gamma)
        vertices[x] = column_vertices(a, x, gamma) if len(support) <= vertex_limit else None

    b = np.array(a.q)
    for iteration in range(1, max_iter + 1):
        h = solve_moment(b, live, target, beta)
        if h is None:
            logger.info("Наихудший момент бесконечен при β = %.4g, γ = %.4g", beta, gamma)
            values = np.ones(a.n)
            values[live] = np.inf
            return MomentReport(beta, values, finite=False, worst_case=True, gamma=gamma, iterations=iteration)
        changed = False
        for x in live:
            candidate = _best_column(a, x, gamma, h, vertices[x])
            diff = h - h[x]
            if candidate @ diff > b[:, x] @ diff + IMPROVEMENT_SLACK * max(1.0, float(np.abs(h).max())):
                b[:, x] = candidate
                changed = True
        if not changed:
            policy = {x: b[:, x].tolist() for x in live}
            logger.debug("Итерация по стратегиям сошлась за %d шагов", iteration)
            return MomentReport(beta, h, finite=True, worst_case=True, gamma=gamma, iterations=iteration,
                                policy=policy)
    raise NoConvergence(float("nan"), max_iter)


def abscissa(a: RateMatrix, target, gamma: float | None = None,
             bisections: int = Config.ABSCISSA_BISECTIONS) -> float:
    """
    Граница сходимости sup{β : момент конечен}, номинальная (gamma=None)
    или наихудшая по Q_γ. Бисекция на [0, max|q_xx|/γ].
    """
    live, target = split_states(a.n, target)
    if not live:
        return np.inf
    scale = 1.0 if gamma is None else gamma

    def finite(beta: float) -> bool:
        if gamma is None:
            return solve_moment(a.q, live, target, beta) is not None
        return worst_case_exp_moment(a, gamma, target, beta).finite

    lo, hi = 0.0, a.max_exit_rate / scale
    if hi <= 0 or live_abscissa(a.q, live) <= 0:
        return 0.0
    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        if finite(mid):
            lo = mid
        else:
            hi = mid
    return lo

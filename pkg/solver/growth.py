import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from errors import BoundViolated
from solver.fields import SolutionField
from solver.problem import HittingProblem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GrowthReport:
    checked_points: int
    max_ratio: float
    worst_time: float
    worst_state: int


def bounded_regime_bound(k: float) -> float:
    """
    Оценка |u| ≤ k(1 + k) для ограниченных задач, где |φ| ≤ k,
    |f(t, 0, 0)| ≤ k и E^Q[(τ − t)^+ | F_t] ≤ k.
    """
    return k * (1.0 + k)


def growth_bound_check(p: HittingProblem, sol: SolutionField, K: Callable[[float], float],
                       c: float | None = None) -> GrowthReport:
    """
    Проверяет |u(t, x)| ≤ (1 + c)·K(t) во всех узлах и состояниях.
    """
    c = p.c if c is None else c
    worst = (0.0, 0.0, 0)
    count = 0
    for t, u in sol.grid():
        bound = (1.0 + c) * float(K(t))
        for x, value in enumerate(u):
            count += 1
            if abs(value) > bound * (1 + 1e-12):
                raise BoundViolated(float(t), x, float(value), bound)
            ratio = abs(value) / bound if bound > 0 else 0.0
            if ratio > worst[0]:
                worst = (ratio, float(t), x)
    logger.debug("Оценка роста выполнена: max |u|/bound = %.4f", worst[0])
    return GrowthReport(count, worst[0], worst[1], worst[2])

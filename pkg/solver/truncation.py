"""
Последовательность задач на конечном горизонте n:
Y^n_t = ξ·I{τ ≤ n} + ∫_{]t,n]} f(u, Y^n_u, Z^n_u)·I{u < τ} du − ∫ (Z^n)* dM.
"""
import logging
from dataclasses import dataclass

import numpy as np

from errors import InvalidArgument
from solver.backward import solve_backward_grid, steps_for
from solver.problem import HittingProblem

logger = logging.getLogger(__name__)

GAP_SLACK = 1e-12


@dataclass(frozen=True)
class TruncationDiagnostics:
    horizons: list[float]
    values_at_zero: np.ndarray
    successive_gaps: np.ndarray
    state_gaps: np.ndarray

    @property
    def fitted_exponent(self) -> float | None:
        """
        Наклон прямой log(gap) по log(n) (n - меньший горизонт пары).
        None, если положительных разрывов меньше двух.
        """
        horizons = np.asarray(self.horizons[:-1], dtype=float)
        positive = self.successive_gaps > 0
        if positive.sum() < 2:
            return None
        slope, _ = np.polyfit(np.log(horizons[positive]), np.log(self.successive_gaps[positive]), 1)
        return float(slope)

    def eventually_monotone(self, slack: float = GAP_SLACK) -> bool:
        """
        Разрывы не возрастают начиная с наибольшего.
        """
        gaps = self.successive_gaps
        if len(gaps) < 2:
            return True
        start = int(np.argmax(gaps))
        return bool(np.all(np.diff(gaps[start:]) <= slack))

    def rows(self) -> list[tuple]:
        rows = []
        for i, n in enumerate(self.horizons):
            gap = float(self.successive_gaps[i - 1]) if i > 0 else float("nan")
            for x, value in enumerate(self.values_at_zero[i]):
                rows.append((n, x, float(value), gap))
        return rows


def truncation_sequence(p: HittingProblem, horizons, refine: int = 4) -> TruncationDiagnostics:
    """
    Для каждого n решает задачу на сетке [0, n] с терминальным значением
    φ(n, x) на цели и 0 на живых состояниях; refine - во сколько раз шаг
    мельче предельно допустимого.
    """
    horizons = [float(n) for n in horizons]
    if not horizons or any(b <= a for a, b in zip(horizons, horizons[1:])) or horizons[0] <= 0:
        raise InvalidArgument(f"Горизонты должны быть положительными и возрастать: {horizons}")

    values = []
    for n in horizons:
        terminal = np.zeros(p.n)
        for x in p.target_list:
            terminal[x] = p.terminal(n, x)
        sol = solve_backward_grid(p, n, steps_for(p, n, refine), terminal_values=terminal)
        values.append(np.array(sol.initial))
        logger.debug("Горизонт %.4g: Y_0 = %s", n, values[-1])

    values = np.array(values)
    state_gaps = np.abs(np.diff(values, axis=0))
    gaps = state_gaps.max(axis=1) if len(state_gaps) else np.zeros(0)
    diagnostics = TruncationDiagnostics(horizons, values, gaps, state_gaps)
    logger.info("Усечение: разрывы %s, показатель %s", np.array2string(gaps, precision=3),
                diagnostics.fitted_exponent)
    return diagnostics

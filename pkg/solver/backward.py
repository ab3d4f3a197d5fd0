"""
Обратная система ОДУ d𝐮_t = −(𝐟(t, 𝐮_t) + Â*𝐮_t) dt на равномерной сетке.
"""
import logging

import numpy as np

from config import Config
from errors import InvalidArgument, NonFiniteState, StepTooLarge
from solver.fields import TIME_GRID, SolutionField
from solver.problem import HittingProblem

logger = logging.getLogger(__name__)


def _derivative(p: HittingProblem, t: float, u: np.ndarray) -> np.ndarray:
    # du/dt; на цели Â обнулена, поэтому производная там равна нулю
    out = -(p.absorbed_chain.q.T @ u + p.driver.field(t, u, p.live))
    out[p.target_list] = 0.0
    return out


def _project(p: HittingProblem, t: float, u: np.ndarray) -> np.ndarray:
    u = np.array(u)
    for x in p.target_list:
        u[x] = p.terminal(t, x)
    return u


def rk4_step(p: HittingProblem, t: float, u: np.ndarray, h: float) -> np.ndarray:
    """
    Шаг классического метода Рунге–Кутты 4 от t к t − h. Значения на цели
    проектируются на φ в каждой стадии.
    """
    stage = -h
    aux0 = stage * _derivative(p, t, _project(p, t, u))
    mid = t - 0.5 * h
    aux1 = stage * _derivative(p, mid, _project(p, mid, u + 0.5 * aux0))
    aux2 = stage * _derivative(p, mid, _project(p, mid, u + 0.5 * aux1))
    aux3 = stage * _derivative(p, t - h, _project(p, t - h, u + aux2))
    return _project(p, t - h, u + (aux0 + 2 * aux1 + 2 * aux2 + aux3) / 6)


def stability_bound(p: HittingProblem) -> float:
    """
    Наибольший допустимый шаг: h·max|q_ii| ≤ RK4_STABILITY (по поглощённой цепи).
    """
    rate = p.absorbed_chain.max_exit_rate
    return np.inf if rate == 0 else Config.RK4_STABILITY / rate


def steps_for(p: HittingProblem, horizon: float, refine: int = 1) -> int:
    """
    Наименьшее число шагов, допустимое для горизонта, умноженное на refine.
    """
    bound = stability_bound(p)
    minimal = 1 if not np.isfinite(bound) else int(np.ceil(horizon / bound - 1e-9))
    return max(1, minimal) * refine


def solve_backward_grid(p: HittingProblem, horizon: float, steps: int, terminal_values=None) -> SolutionField:
    """
    Интегрирует систему назад от horizon до 0.
    terminal_values заменяет u(horizon, ·) (по умолчанию φ(horizon, ·));
    на цели значения всё равно равны φ(horizon, x).
    """
    if horizon <= 0 or steps < 1:
        raise InvalidArgument(f"Нужны horizon > 0 и steps ≥ 1, получено {horizon}, {steps}")
    h = horizon / steps
    bound = stability_bound(p)
    if h > bound * (1 + 1e-12):
        raise StepTooLarge(h, bound)

    times = horizon * np.arange(steps + 1) / steps
    values = np.empty((steps + 1, p.n))
    start = p.terminal.vector(horizon) if terminal_values is None else np.asarray(terminal_values, dtype=float)
    values[-1] = _project(p, horizon, start)
    for k in range(steps, 0, -1):
        values[k - 1] = rk4_step(p, times[k], values[k], times[k] - times[k - 1])
        if not np.all(np.isfinite(values[k - 1])):
            raise NonFiniteState(float(times[k - 1]))
    logger.debug("Сетка: горизонт %.4g, %d шагов, шаг %.3e", horizon, steps, h)
    return SolutionField(TIME_GRID, values, iterations=steps, times=times, method="rk4",
                         metadata={"horizon": horizon, "steps": steps})

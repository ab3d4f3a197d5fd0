"""
Оптимальное управление до момента попадания: Y - функция ценности,
κ - стратегия обратной связи из argmin гамильтониана.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from chain.rates import RateMatrix
from config import Config
from drivers.controls import ControlSet
from drivers.hamiltonian import HamiltonianDriver, hamiltonian_inf
from errors import InvalidArgument, PolicyValueMismatch, SingularSystem
from solver.backward import solve_backward_grid, steps_for
from solver.fields import SolutionField
from solver.homogeneous import solve_homogeneous
from solver.problem import HittingProblem, Terminal

logger = logging.getLogger(__name__)

POLICY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ControlSolution:
    """
    policy - индексы управлений по живым состояниям (стационарная стратегия)
    или список таких словарей по узлам сетки; labels переводят индексы в метки.
    """
    value: SolutionField
    policy: dict | list | None
    labels: tuple[str, ...] = ()
    verification_gap: float | None = None
    gamma: float | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def stationary(self) -> bool:
        return isinstance(self.policy, dict)

    def label(self, x: int, step: int = 0) -> str | None:
        if self.policy is None:
            return None
        chosen = self.policy if self.stationary else self.policy[step]
        return self.labels[chosen[x]] if x in chosen else None

    def policy_labels(self) -> dict[int, str]:
        if not self.stationary:
            raise InvalidArgument("Стратегия зависит от времени")
        return {x: self.labels[u] for x, u in self.policy.items()}


def policy_value(cs: ControlSet, chain: RateMatrix, target, terminal: Terminal, policy, discount=None,
                 offset=None) -> np.ndarray:
    """
    Ценность фиксированной стационарной стратегии прямым линейным решением
    ((A^π)* − diag r)v = −(L_π + g) вне цели, v = φ на цели.
    policy - словарь или последовательность индексов управлений по состояниям.
    """
    n = chain.n
    target = sorted({int(x) for x in target})
    live = [x for x in range(n) if x not in target]
    r = np.zeros(n) if discount is None else np.asarray(discount, dtype=float)
    g = np.zeros(n) if offset is None else np.asarray(offset, dtype=float)
    choice = dict(policy) if isinstance(policy, dict) else dict(enumerate(policy))

    q = np.zeros((n, n))
    source = np.zeros(n)
    for x in live:
        u = int(choice[x])
        q[:, x] = cs.matrices[u].q[:, x]
        source[x] = cs.cost_value(0.0, 0.0, x, u) + g[x]
    phi = terminal.vector(0.0)
    qt = q.T
    system = qt[np.ix_(live, live)] - np.diag(r[live])
    rhs = -source[live] - qt[np.ix_(live, target)] @ phi[target]
    v = np.array(phi)
    try:
        v[live] = scipy.linalg.solve(system, rhs)
    except (np.linalg.LinAlgError, ValueError):
        raise SingularSystem(live)
    return v


def _verify(cs: ControlSet, problem: HittingProblem, driver: HamiltonianDriver, value: SolutionField,
            policy: dict) -> float:
    if not cs.y_free:
        logger.warning("Стоимость зависит от y; проверка стратегии линейным решением пропущена")
        return float("nan")
    direct = policy_value(cs, problem.chain, problem.target, problem.terminal, policy,
                          discount=driver.discount, offset=driver.offset)
    gap = float(np.abs(direct - value.u).max())
    if gap > POLICY_TOL:
        raise PolicyValueMismatch(gap)
    return gap


def solve_control(cs: ControlSet, chain: RateMatrix, target, terminal: Terminal, discount=None,
                  horizon: float | None = None, steps: int | None = None, tol: float = Config.RESIDUAL_TOL,
                  driver: HamiltonianDriver | None = None, **constants) -> ControlSolution:
    """
    Решает уравнение Беллмана с гамильтонианом inf_u {L + z*(A^u − A)x}.
    Без horizon - однородная задача и проверка извлечённой стратегии;
    с horizon - задача на сетке и стратегия в каждом узле.
    """
    driver = driver or hamiltonian_inf(cs, chain, discount=discount)
    problem = HittingProblem(chain, frozenset(target), terminal, driver,
                             **{"c": driver.c, "beta_hat": cs.beta_hat, **constants})
    if horizon is None:
        value = solve_homogeneous(problem, tol=tol)
        policy = dict(zip(problem.live, driver.policy(0.0, value.u, problem.live)))
        gap = _verify(cs, problem, driver, value, policy)
        logger.info("Стратегия %s, расхождение с прямым решением %.2e",
                    {x: cs.labels[u] for x, u in policy.items()}, gap)
        return ControlSolution(value, policy, cs.labels, verification_gap=gap, gamma=cs.gamma)

    steps = steps or steps_for(problem, horizon, refine=2)
    value = solve_backward_grid(problem, horizon, steps)
    policy = [dict(zip(problem.live, driver.policy(t, u, problem.live))) for t, u in value.grid()]
    return ControlSolution(value, policy, cs.labels, gamma=cs.gamma)

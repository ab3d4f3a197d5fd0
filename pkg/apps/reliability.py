import logging

import numpy as np

from apps.control import POLICY_TOL, ControlSolution, policy_value
from chain.rates import RateMatrix
from config import Config
from drivers.affine import discount_driver
from drivers.controls import ControlSet
from drivers.hamiltonian import hamiltonian_sup
from errors import DimensionMismatch, PolicyValueMismatch
from solver.homogeneous import solve_homogeneous
from solver.problem import HittingProblem, indicator_terminal

logger = logging.getLogger(__name__)


def reliability(chain: RateMatrix, loss_rates, dead, target_node: int, controls: ControlSet | None = None,
                tol: float = Config.RESIDUAL_TOL) -> ControlSolution:
    """
    Вероятность доставки сообщения u(x) = E[e^{−∫_0^τ r ds}·I{X_τ = x₁}],
    τ - первое попадание в {x₁} ∪ dead. С управлениями драйвер
    −r_x·y + sup_u {z*(A^u − A)x}, стратегия - argmax.
    """
    r = np.asarray(loss_rates, dtype=float)
    if r.shape != (chain.n,) or np.any(r < 0) or not np.all(np.isfinite(r)):
        raise DimensionMismatch("Интенсивности потерь должны быть конечными, неотрицательными и длины n")
    target_node = chain.check_state(target_node)
    dead = {chain.check_state(x) for x in dead}
    if target_node in dead:
        raise DimensionMismatch(f"Узел {target_node} одновременно целевой и мёртвый")
    target = frozenset({target_node} | dead)
    terminal = indicator_terminal(chain.n, [target_node])

    if controls is None:
        driver = discount_driver(chain, r)
    else:
        driver = hamiltonian_sup(controls, chain, discount=r)
    problem = HittingProblem(chain, target, terminal, driver, c=float(r.max(initial=0.0)))
    value = solve_homogeneous(problem, tol=tol)
    if controls is None:
        return ControlSolution(value, None)

    policy = dict(zip(problem.live, driver.policy(0.0, value.u, problem.live)))
    direct = policy_value(controls, chain, target, terminal, policy, discount=r)
    gap = float(np.abs(direct - value.u).max())
    if gap > POLICY_TOL:
        raise PolicyValueMismatch(gap)
    logger.info("Надёжность: u = %s", np.array2string(value.u, precision=4))
    return ControlSolution(value, policy, controls.labels, verification_gap=gap, gamma=controls.gamma)

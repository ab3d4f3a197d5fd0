"""
Проверка решений методом Монте-Карло по представлению
Y_0 = E[∫_0^τ e^{−∫_0^s r} g(X_s) ds + e^{−∫_0^τ r}·φ(X_τ)]
под мерой, в которой цепь имеет интенсивности B (или A^π для стратегии π).
"""
import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from chain.rates import RateMatrix
from chain.simulate import simulate_paths
from config import Config
from drivers.affine import AffineDriver
from drivers.controls import ControlSet
from drivers.hamiltonian import HamiltonianDriver
from errors import DimensionMismatch, DriverTimeDependent
from solver.fields import SolutionField
from solver.problem import HittingProblem, Terminal

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Representation:
    rates_at: Callable[[int], RateMatrix]
    running: np.ndarray
    discount: np.ndarray
    terminal: np.ndarray
    target: frozenset[int]

    @property
    def n(self) -> int:
        return len(self.terminal)

    def path_value(self, path) -> float:
        integral, weight = path.discounted(self.running, self.discount)
        return integral + weight * self.terminal[path.final_state]


def _time_free_terminal(terminal: Terminal) -> np.ndarray:
    if terminal.time_dependent:
        raise DriverTimeDependent()
    return terminal.vector(0.0)


def representation_from_policy(cs: ControlSet, target, terminal: Terminal, policy, discount=None,
                               offset=None) -> Representation:
    n = cs.reference.n
    choice = dict(policy) if isinstance(policy, dict) else dict(enumerate(policy))
    running = np.zeros(n) if offset is None else np.array(offset, dtype=float)
    for x, u in choice.items():
        running[x] += cs.cost_value(0.0, 0.0, x, int(u))
    matrices = cs.matrices
    reference = cs.reference

    def rates_at(x: int) -> RateMatrix:
        return matrices[int(choice[x])] if x in choice else reference

    return Representation(rates_at, running, np.zeros(n) if discount is None else np.asarray(discount, dtype=float),
                          _time_free_terminal(terminal), frozenset(int(x) for x in target))


def representation_from_problem(p: HittingProblem, sol: SolutionField | None = None) -> Representation:
    """
    Аффинный драйвер задаёт представление напрямую (меру B, g и r);
    для гамильтониана нужна стратегия, извлечённая из решения sol.
    """
    d = p.driver
    if d.time_dependent:
        raise DriverTimeDependent()
    if isinstance(d, AffineDriver):
        b = d.b
        return Representation(lambda _x: b, np.array(d.offset(0.0)), np.array(d.r),
                              _time_free_terminal(p.terminal), p.target)
    if isinstance(d, HamiltonianDriver):
        if sol is None:
            raise DimensionMismatch("Для гамильтониана нужно решение, из которого извлекается стратегия")
        policy = dict(zip(p.live, d.policy(0.0, sol.initial, p.live)))
        return representation_from_policy(d.cs, p.target, p.terminal, policy, discount=d.discount,
                                          offset=d.offset)
    raise DimensionMismatch(f"Драйвер {d.name} не имеет представления для моделирования")


@dataclass
class McReport:
    estimates: np.ndarray
    standard_errors: np.ndarray
    z_scores: np.ndarray
    solver_values: np.ndarray
    paths: int
    seed: int
    z_threshold: float = Config.MC_Z_THRESHOLD
    states: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(np.all(np.abs(self.z_scores[self.states]) <= self.z_threshold))

    def rows(self) -> list[tuple]:
        return [(x, float(self.solver_values[x]), float(self.estimates[x]), float(self.standard_errors[x]),
                 float(self.z_scores[x])) for x in self.states]


def mc_validate(rep: Representation, solver_values, paths: int = 10_000, seed: int = 0, states=None,
                workers: int = 1, z_threshold: float = Config.MC_Z_THRESHOLD) -> McReport:
    """
    Оценивает Y_0 по каждому стартовому состоянию, сравнивает с решателем.
    На цели оценка точна: φ(x) без погрешности.
    """
    solver_values = np.asarray(solver_values, dtype=float)
    states = list(range(rep.n)) if states is None else [int(x) for x in states]
    estimates = np.array(rep.terminal, dtype=float)
    errors = np.zeros(rep.n)
    z = np.zeros(rep.n)
    for x in states:
        if x in rep.target:
            z[x] = 0.0 if abs(estimates[x] - solver_values[x]) <= 1e-12 else np.inf
            continue
        values = np.array([rep.path_value(path) for path in
                           simulate_paths(rep.rates_at, x, rep.target, paths, seed=seed, workers=workers)])
        estimates[x] = values.mean()
        errors[x] = values.std(ddof=1) / np.sqrt(paths) if paths > 1 else np.inf
        gap = estimates[x] - solver_values[x]
        if errors[x] > 0:
            z[x] = gap / errors[x]
        else:
            z[x] = 0.0 if abs(gap) <= 1e-12 else np.inf
    report = McReport(estimates, errors, z, solver_values, paths, seed, z_threshold, states)
    level = logging.INFO if report.passed else logging.WARNING
    logger.log(level, "Монте-Карло (%d траекторий): max |z| = %.2f", paths,
               float(np.abs(z[states]).max(initial=0.0)))
    return report

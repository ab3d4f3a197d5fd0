"""
Потенциалы в цепях с резисторами и диодами.

Потенциал v - гармоническая функция блуждания с интенсивностями,
равными проводимостям рёбер. Для диода проводимость зависит от
напряжения: w(V) = I_s(e^{V/V_T} − 1)/V, поэтому v решает однородную
BSDE с драйвером f(x, z) = z*(A^z − A)x, где A - матрица той же цепи,
в которой каждый диод заменён резистором сопротивления V_T/I_s.
"""
import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from builders.matrices import MatrixBuilder
from chain.rates import RateMatrix
from config import Config
from drivers.base import MarkovianDriver
from errors import DimensionMismatch, DisconnectedNode, NoConvergence, SpecFormatError
from solver.fields import SolutionField
from solver.homogeneous import solve_homogeneous
from solver.problem import HittingProblem, constant_terminal

logger = logging.getLogger(__name__)

# Допустимое изменение напряжения на диоде за итерацию Ньютона, в единицах V_T
VOLTAGE_LOCK_FACTOR = 4.0


@dataclass(frozen=True)
class Resistor:
    ohms: float

    def __post_init__(self):
        if not self.ohms > 0:
            raise SpecFormatError(f"Сопротивление должно быть положительным, получено {self.ohms}")

    @property
    def reference_conductance(self) -> float:
        return 1.0 / self.ohms

    def conductance(self, _voltage: float) -> float:
        return 1.0 / self.ohms

    def current(self, voltage: float) -> float:
        return voltage / self.ohms

    def slope(self, _voltage: float) -> float:
        return 1.0 / self.ohms


@dataclass(frozen=True)
class Diode:
    """
    Закон Шокли I = I_s(e^{V/V_T} − 1), V - напряжение анод − катод.
    """
    i_s: float
    v_t: float

    def __post_init__(self):
        if not (self.i_s > 0 and self.v_t > 0):
            raise SpecFormatError(f"Параметры диода должны быть положительными: I_s = {self.i_s}, V_T = {self.v_t}")

    @property
    def reference_conductance(self) -> float:
        # Проводимость при нулевом смещении
        return self.i_s / self.v_t

    def current(self, voltage: float) -> float:
        with np.errstate(over="ignore"):
            return float(self.i_s * np.expm1(voltage / self.v_t))

    def slope(self, voltage: float) -> float:
        with np.errstate(over="ignore"):
            return float(self.i_s / self.v_t * np.exp(voltage / self.v_t))

    def conductance(self, voltage: float) -> float:
        """
        w(V) = I(V)/V; в окрестности нуля - ряд (I_s/V_T)(1 + V/(2V_T) + V²/(6V_T²)).
        """
        ratio = voltage / self.v_t
        if abs(ratio) < Config.DIODE_SERIES_BAND:
            w = self.reference_conductance * (1.0 + ratio / 2.0 + ratio * ratio / 6.0)
        else:
            w = self.current(voltage) / voltage
        return max(w, Config.CONDUCTANCE_FLOOR)

    def resistance(self, voltage: float) -> float:
        return 1.0 / self.conductance(voltage)


Component = Resistor | Diode


@dataclass(frozen=True, eq=False)
class CircuitSpec:
    """
    edges - тройки (i, j, компонент); у диода i - анод, j - катод.
    sources - потенциалы источников (множество Ξ и φ на нём).
    """
    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int, Component], ...]
    sources: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.nodes)
        for i, j, _component in self.edges:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise DimensionMismatch(f"Некорректное ребро ({i}, {j})", i=i, j=j)
        if not self.sources:
            raise SpecFormatError("В цепи нет источников напряжения")
        for node in self.sources:
            if not 0 <= node < n:
                raise DimensionMismatch(f"Источник в несуществующем узле {node}")
        unreached = sorted(set(range(n)) - self._connected_to_sources())
        if unreached:
            raise DisconnectedNode([self.nodes[x] for x in unreached])

    def _connected_to_sources(self) -> set[int]:
        neighbours = {x: set() for x in range(self.n)}
        for i, j, _component in self.edges:
            neighbours[i].add(j)
            neighbours[j].add(i)
        seen = set(self.sources)
        queue = deque(seen)
        while queue:
            x = queue.popleft()
            for y in neighbours[x] - seen:
                seen.add(y)
                queue.append(y)
        return seen

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def free_nodes(self) -> list[int]:
        return [x for x in range(self.n) if x not in self.sources]

    @property
    def has_diodes(self) -> bool:
        return any(isinstance(c, Diode) for _i, _j, c in self.edges)

    def source_vector(self) -> np.ndarray:
        values = np.zeros(self.n)
        for node, volts in self.sources.items():
            values[node] = volts
        return values

    def reference_conductances(self) -> np.ndarray:
        w = np.zeros((self.n, self.n))
        for i, j, component in self.edges:
            w[i, j] += component.reference_conductance
            w[j, i] += component.reference_conductance
        return w

    def conductances(self, v) -> np.ndarray:
        w = np.zeros((self.n, self.n))
        for i, j, component in self.edges:
            g = component.conductance(v[i] - v[j])
            w[i, j] += g
            w[j, i] += g
        return w

    def reference_chain(self) -> RateMatrix:
        return MatrixBuilder.from_conductances(self.reference_conductances())


class CircuitDriver(MarkovianDriver):
    """
    f(x, z) = z*(A^z − A)x = Σ_{рёбра x–j} (w(z) − w̄)(z_j − z_x).
    """
    kind = "diode_circuit"

    def __init__(self, circuit: CircuitSpec):
        self.circuit = circuit
        self._incident = {x: [] for x in range(circuit.n)}
        for i, j, component in circuit.edges:
            self._incident[i].append((j, component, 1.0))
            self._incident[j].append((i, component, -1.0))
        super().__init__(self._evaluate, circuit.n, monotone=True, name="diode_circuit")

    def _evaluate(self, x: int, t: float, y: float, z: np.ndarray) -> float:
        total = 0.0
        for j, component, orientation in self._incident[x]:
            # orientation = 1, если x - первый узел ребра (анод диода)
            voltage = orientation * (z[x] - z[j])
            total += (component.conductance(voltage) - component.reference_conductance) * (z[j] - z[x])
        return total


def kirchhoff_residuals(c: CircuitSpec, v) -> np.ndarray:
    """
    Суммарный ток, вытекающий из каждого узла; в источниках 0.
    """
    v = np.asarray(v, dtype=float)
    out = np.zeros(c.n)
    for i, j, component in c.edges:
        current = component.current(v[i] - v[j])
        out[i] += current
        out[j] -= current
    out[list(c.sources)] = 0.0
    return out


def diode_currents(c: CircuitSpec, v) -> list[dict]:
    v = np.asarray(v, dtype=float)
    report = []
    for i, j, component in c.edges:
        if isinstance(component, Diode):
            voltage = float(v[i] - v[j])
            report.append({"anode": c.nodes[i], "cathode": c.nodes[j], "voltage": voltage,
                           "current": component.current(voltage), "resistance": component.resistance(voltage)})
    return report


def nodal_analysis(c: CircuitSpec, tol: float = 1e-13, max_iter: int = 200) -> np.ndarray:
    """
    Независимое решение законов Кирхгофа методом Ньютона с аналитическим
    якобианом. Шаг ограничивается так, чтобы напряжение на каждом диоде
    менялось не более чем на VOLTAGE_LOCK_FACTOR·V_T за итерацию.
    """
    free = c.free_nodes
    index = {x: k for k, x in enumerate(free)}
    v = c.source_vector()
    if not free:
        return v
    v[free] = float(np.mean(list(c.sources.values())))

    for iteration in range(max_iter):
        residual = kirchhoff_residuals(c, v)[free]
        if np.abs(residual).max() < tol:
            logger.debug("Узловой анализ сошёлся за %d итераций", iteration)
            return v
        jac = np.zeros((len(free), len(free)))
        for i, j, component in c.edges:
            g = component.slope(v[i] - v[j])
            for a, b, sign in ((i, i, 1.0), (i, j, -1.0), (j, j, 1.0), (j, i, -1.0)):
                if a in index and b in index:
                    jac[index[a], index[b]] += sign * g
        try:
            step = scipy.linalg.solve(jac, -residual)
        except (np.linalg.LinAlgError, ValueError):
            raise NoConvergence(float(np.abs(residual).max()), iteration)

        dx = np.zeros(c.n)
        dx[free] = step
        damping = 1.0
        for i, j, component in c.edges:
            if isinstance(component, Diode):
                change = abs(dx[i] - dx[j])
                limit = VOLTAGE_LOCK_FACTOR * component.v_t
                if change > limit:
                    damping = min(damping, limit / change)
        v = v + damping * dx
    raise NoConvergence(float(np.abs(kirchhoff_residuals(c, v)[free]).max()), max_iter)


def circuit_problem(c: CircuitSpec) -> HittingProblem:
    a = c.reference_chain()
    return HittingProblem(a, frozenset(c.sources), constant_terminal(c.source_vector()), CircuitDriver(c))


def solve_circuit(c: CircuitSpec, tol: float = Config.RESIDUAL_TOL) -> SolutionField:
    """
    Потенциалы узлов как решение однородной BSDE.
    """
    sol = solve_homogeneous(circuit_problem(c), tol=tol)
    kirchhoff = float(np.abs(kirchhoff_residuals(c, sol.u)).max(initial=0.0))
    metadata = {
        "reference_resistances": [1.0 / comp.reference_conductance for _i, _j, comp in c.edges],
        "kirchhoff_max": kirchhoff,
    }
    logger.info("Цепь решена: v = %s, max невязка Кирхгофа %.2e", np.array2string(sol.u, precision=6), kirchhoff)
    return SolutionField(sol.mode, sol.u, residual=sol.residual, iterations=sol.iterations, method=sol.method,
                         metadata=metadata)

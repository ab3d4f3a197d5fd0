"""
Гамильтонианы: поточечный экстремум по конечному множеству управлений
f(x, t, y, z) = ext_u {L(t, y, x, u) + z*(A^u − A)x} + g_x − r_x·y.
"""
import numpy as np

from chain.rates import RateMatrix
from drivers.base import MarkovianDriver
from drivers.controls import ControlSet
from errors import DimensionMismatch, EmptyControlSet, InvalidArgument


class HamiltonianDriver(MarkovianDriver):
    kind = "hamiltonian"

    def __init__(self, cs: ControlSet, a: RateMatrix, sense: str = "inf", discount=None, offset=None,
                 name: str | None = None):
        if cs is None or len(cs) == 0:
            raise EmptyControlSet()
        if a.n != cs.reference.n:
            raise DimensionMismatch(f"Опорная матрица размерности {a.n}, управления - {cs.reference.n}")
        if sense not in ("inf", "sup"):
            raise InvalidArgument(f"Неизвестный экстремум {sense!r}")
        self.cs = cs
        self.a = a
        self.sense = sense
        self.discount = np.zeros(a.n) if discount is None else np.asarray(discount, dtype=float)
        self.offset = np.zeros(a.n) if offset is None else np.asarray(offset, dtype=float)
        # (|U|, n, n): разности A^u − A
        self._deltas = np.stack([m.q - a.q for m in cs.matrices])
        super().__init__(self._evaluate, a.n, c=cs.c + float(self.discount.max(initial=0.0)),
                         beta_hat=cs.beta_hat, monotone=bool(np.all(self.discount >= 0)),
                         time_dependent=cs.cost_depends_on_t,
                         y_dependent=cs.cost_depends_on_y or bool(np.any(self.discount != 0)), name=name)

    def candidates(self, x: int, t: float, y: float, z) -> np.ndarray:
        """
        L(t, y, x, u) + z*(A^u − A)x для всех u по порядку.
        """
        z = np.asarray(z, dtype=float)
        drift = self._deltas[:, :, x] @ z
        costs = np.array([self.cs.cost_value(t, y, x, u) for u in range(len(self.cs))])
        return costs + drift

    def argext(self, x: int, t: float, y: float, z) -> int:
        # При равенстве выбирается наименьший индекс
        values = self.candidates(x, t, y, z)
        return int(np.argmin(values) if self.sense == "inf" else np.argmax(values))

    def _evaluate(self, x: int, t: float, y: float, z: np.ndarray) -> float:
        values = self.candidates(x, t, y, z)
        best = values.min() if self.sense == "inf" else values.max()
        return float(best + self.offset[x] - self.discount[x] * y)

    def policy(self, t: float, u, states=None) -> list[int]:
        """
        Стратегия обратной связи κ: argext в каждом состоянии при Y = u_x, Z = u.
        """
        u = np.asarray(u, dtype=float)
        return [self.argext(x, t, u[x], u) for x in (range(self.n) if states is None else states)]


def hamiltonian_inf(cs: ControlSet, a: RateMatrix, discount=None, offset=None) -> HamiltonianDriver:
    return HamiltonianDriver(cs, a, "inf", discount=discount, offset=offset, name="hamiltonian_inf")


def hamiltonian_sup(cs: ControlSet, a: RateMatrix, discount=None, offset=None) -> HamiltonianDriver:
    return HamiltonianDriver(cs, a, "sup", discount=discount, offset=offset, name="hamiltonian_sup")

"""
Точное событийное моделирование траекторий цепи (без дискретизации времени).
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from chain.rates import RateMatrix, StateIndex
from errors import AbsorbedOutsideTarget, InvalidArgument
from utils.rng import path_rng

logger = logging.getLogger(__name__)

FeedbackControls = Callable[[StateIndex], RateMatrix]


@dataclass(frozen=True)
class ChainPath:
    jump_times: tuple[float, ...]
    states: tuple[int, ...]
    terminal_time: float
    absorbed: bool = True

    @property
    def final_state(self) -> int:
        return self.states[-1]

    def segments(self):
        """
        Пары (состояние, длительность пребывания) до terminal_time.
        """
        starts = (0.0, *self.jump_times)
        ends = (*self.jump_times, self.terminal_time)
        return [(x, end - start) for x, start, end in zip(self.states, starts, ends)]

    def integral(self, rates) -> float:
        """
        ∫_0^τ r_{X_s} ds по кусочно-постоянной траектории.
        """
        return float(sum(rates[x] * dt for x, dt in self.segments()))

    def discounted(self, running, discount) -> tuple[float, float]:
        """
        Возвращает (∫_0^τ e^{−∫_0^s r} g_{X_s} ds, e^{−∫_0^τ r}) точно по сегментам.
        """
        acc = 0.0
        spent = 0.0
        for x, dt in self.segments():
            r = discount[x]
            weight = math.exp(-spent)
            if r > 0:
                acc += weight * running[x] * (-math.expm1(-r * dt)) / r
            else:
                acc += weight * running[x] * dt
            spent += r * dt
        return acc, math.exp(-spent)

    def rows(self):
        """
        Строки CSV (t, state): момент входа в каждое посещённое состояние.
        """
        return list(zip((0.0, *self.jump_times), self.states))


def _walk(rates_at: FeedbackControls, x0: int, target: frozenset, horizon: float,
          rng: np.random.Generator) -> ChainPath:
    t = 0.0
    x = x0
    jump_times = []
    states = [x0]
    while x not in target:
        column = rates_at(x).q[:, x]
        total = -column[x]
        if total <= 0:
            if math.isfinite(horizon):
                return ChainPath(tuple(jump_times), tuple(states), horizon, absorbed=False)
            raise AbsorbedOutsideTarget(x, t)
        hold = rng.exponential(1.0 / total)
        if t + hold >= horizon:
            return ChainPath(tuple(jump_times), tuple(states), horizon, absorbed=False)
        t += hold
        probs = np.clip(column, 0.0, None)
        probs[x] = 0.0
        x = int(rng.choice(len(probs), p=probs / probs.sum()))
        jump_times.append(t)
        states.append(x)
    return ChainPath(tuple(jump_times), tuple(states), t, absorbed=True)


def _prepare(n: int, x0, target, horizon):
    if horizon is None:
        horizon = math.inf
    target = frozenset(int(s) for s in target)
    if not target and not math.isfinite(horizon):
        raise InvalidArgument("Нужно непустое целевое множество или конечный горизонт")
    if horizon <= 0 and not target:
        raise InvalidArgument("Горизонт должен быть положительным")
    return int(x0), target, float(horizon)


def simulate_path(a: RateMatrix, x0: StateIndex, target, horizon=None, seed: int = 0) -> ChainPath:
    """
    Траектория до первого попадания в target или до горизонта.
    """
    a.check_state(x0)
    x0, target, horizon = _prepare(a.n, x0, target, horizon)
    return _walk(lambda _x: a, x0, target, horizon, np.random.default_rng(seed))


def simulate_controlled_path(controls: FeedbackControls, x0: StateIndex, target, horizon=None,
                             seed: int = 0) -> ChainPath:
    """
    То же, но активная матрица интенсивностей выбирается обратной связью
    controls(текущее состояние).
    """
    x0, target, horizon = _prepare(0, x0, target, horizon)
    return _walk(controls, x0, target, horizon, np.random.default_rng(seed))


def simulate_paths(controls: FeedbackControls | RateMatrix, x0: StateIndex, target, count: int,
                   seed: int = 0, horizon=None, workers: int = 1) -> list[ChainPath]:
    """
    count независимых траекторий; поток i-й траектории зависит от (seed, x0, i).
    При workers > 1 траектории считаются в пуле потоков, порядок сохраняется.
    """
    if isinstance(controls, RateMatrix):
        matrix = controls
        controls = lambda _x: matrix  # noqa: E731
    x0, target, horizon = _prepare(0, x0, target, horizon)

    def one(index: int) -> ChainPath:
        return _walk(controls, x0, target, horizon, path_rng(seed, index, x0))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, range(count)))
    return [one(i) for i in range(count)]

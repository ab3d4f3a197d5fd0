"""
Проверка теоремы сравнения: f1 ≥ f2 и φ1 ≥ φ2 влекут u1 ≥ u2.
"""
import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from config import Config
from errors import ComparisonViolated, DimensionMismatch
from solver.fields import SolutionField
from solver.problem import HittingProblem

logger = logging.getLogger(__name__)


@dataclass
class ComparisonReport:
    ordered: bool
    min_gap: float
    hypotheses_hold: bool
    hypothesis_violations: list[dict] = field(default_factory=list)
    equality_states: list[int] = field(default_factory=list)
    strict_clause: bool = True


def _forward_reach(p: HittingProblem, x: int) -> set[int]:
    # Состояния, достижимые из x до попадания в цель (цель включается, но не продолжается)
    seen = {x}
    queue = deque([x])
    while queue:
        i = queue.popleft()
        if i in p.target:
            continue
        for j in np.nonzero(p.chain.q[:, i] > 0)[0]:
            j = int(j)
            if j != i and j not in seen:
                seen.add(j)
                queue.append(j)
    return seen


def _check_hypotheses(p1: HittingProblem, p2: HittingProblem, sol2: SolutionField, slack: float) -> list[dict]:
    """
    φ1 ≥ φ2 на цели и f1(Y′, Z′) ≥ f2(Y′, Z′) вдоль второго решения
    во всех узлах сетки.
    """
    violations = []
    for t, u in sol2.grid():
        for x in p1.target_list:
            gap = p1.terminal(t, x) - p2.terminal(t, x)
            if gap < -slack:
                violations.append({"kind": "terminal", "t": float(t), "x": x, "gap": gap})
        for x in p1.live:
            gap = p1.driver(x, t, u[x], u) - p2.driver(x, t, u[x], u)
            if gap < -slack:
                violations.append({"kind": "driver", "t": float(t), "x": x, "gap": gap})
    return violations


def check_comparison(p1: HittingProblem, p2: HittingProblem, sol1: SolutionField, sol2: SolutionField,
                     slack: float = Config.COMPARISON_SLACK) -> ComparisonReport:
    """
    Сравнивает решения двух задач на одной цепи с одной целью.
    Нарушение гипотез (f1 ≥ f2 на решении второй задачи, φ1 ≥ φ2) только
    сообщается. Если гипотезы выполнены, а порядок решений нарушен,
    выбрасывается ComparisonViolated.
    """
    if p1.n != p2.n or not np.array_equal(p1.chain.q, p2.chain.q) or p1.target != p2.target:
        raise DimensionMismatch("Для сравнения нужны одна цепь и одно целевое множество")
    if sol1.u.shape != sol2.u.shape:
        raise DimensionMismatch("Решения заданы на разных сетках", left=list(sol1.u.shape), right=list(sol2.u.shape))

    violations = _check_hypotheses(p1, p2, sol2, slack)
    diff = np.asarray(sol1.u) - np.asarray(sol2.u)
    min_gap = float(diff.min())
    ordered = min_gap >= -slack

    if not ordered and not violations:
        worst = int(np.unravel_index(np.argmin(diff), diff.shape)[-1])
        raise ComparisonViolated(worst, min_gap)
    if violations:
        logger.warning("Гипотезы сравнения нарушены в %d точках", len(violations))

    # Строгая часть: u1(x) = u2(x) тогда и только тогда, когда драйверы совпадают
    # на решении и φ совпадают на всём, что достижимо из x
    initial1, initial2 = sol1.initial, sol2.initial
    equal = [x for x in range(p1.n) if abs(initial1[x] - initial2[x]) <= slack]
    strict = True
    for x in range(p1.n):
        agree = True
        for y in _forward_reach(p1, x):
            if y in p1.target:
                agree &= abs(p1.terminal(0.0, y) - p2.terminal(0.0, y)) <= slack
            else:
                agree &= abs(p1.driver(y, 0.0, initial2[y], initial2)
                             - p2.driver(y, 0.0, initial2[y], initial2)) <= slack
        if agree != (x in equal):
            strict = False
    return ComparisonReport(ordered=ordered, min_gap=min_gap, hypotheses_hold=not violations,
                            hypothesis_violations=violations, equality_states=equal, strict_clause=strict)

import itertools

import numpy as np
import pytest

from apps.control import policy_value, solve_control
from builders.matrices import MatrixBuilder
from drivers.affine import AffineDriver
from drivers.controls import ControlSet
from drivers.hamiltonian import hamiltonian_inf, hamiltonian_sup
from errors import DriverTimeDependent
from solver.homogeneous import solve_homogeneous
from solver.problem import HittingProblem, constant_terminal


def _race(unit_chain):
    # Быстрое управление дороже в единицу времени, но в итоге дешевле
    fast = MatrixBuilder.two_state(2.0)
    return ControlSet.from_table(["slow", "fast"], [unit_chain, fast], unit_chain, costs=[[1.0, 1.5], [0.0, 0.0]],
                                 columns=[0])


def test_singleton_control_matches_uncontrolled_solution(unit_chain):
    cs = ControlSet.from_table(["walk"], [unit_chain], unit_chain, costs=[[1.0], [0.0]], columns=[0])
    terminal = constant_terminal([0.0, 2.0])
    solution = solve_control(cs, unit_chain, [1], terminal)
    plain = solve_homogeneous(HittingProblem(unit_chain, frozenset({1}), terminal, AffineDriver(unit_chain, g=[1.0, 0.0])))
    np.testing.assert_allclose(solution.value.u, plain.u, atol=1e-10)
    assert solution.policy == {0: 0}
    assert solution.stationary
    assert solution.verification_gap <= 1e-8


def test_race_prefers_fast_control(unit_chain):
    solution = solve_control(_race(unit_chain), unit_chain, [1], constant_terminal([0.0, 0.0]))
    assert solution.value.u[0] == pytest.approx(0.75, abs=1e-10)
    assert solution.policy_labels() == {0: "fast"}
    assert solution.label(0) == "fast"
    assert solution.label(1) is None
    assert solution.gamma == pytest.approx(1 / 3, abs=1e-8)


def test_policy_value_of_each_stationary_policy(unit_chain):
    cs = _race(unit_chain)
    terminal = constant_terminal([0.0, 0.0])
    assert policy_value(cs, unit_chain, [1], terminal, {0: 0})[0] == pytest.approx(1.0)
    assert policy_value(cs, unit_chain, [1], terminal, {0: 1})[0] == pytest.approx(0.75)


def test_time_grid_policy(unit_chain):
    solution = solve_control(_race(unit_chain), unit_chain, [1], constant_terminal([0.0, 0.0]), horizon=2.0)
    assert not solution.stationary
    assert len(solution.policy) == len(solution.value.times)
    # На горизонте u = 0, выбор там вырожден; до него выгоднее быстрое управление
    assert solution.label(0, step=0) == "fast"
    with pytest.raises(ValueError):
        solution.policy_labels()


def _random_instance(rng):
    n = int(rng.integers(2, 6))
    size = int(rng.integers(1, 4))
    a = MatrixBuilder.random(n, rng, absorbing=[0])
    live = list(range(1, n))
    matrices = [a] + [MatrixBuilder.random_in_box(a, 0.5, rng) for _ in range(size - 1)]
    costs = rng.uniform(0.0, 1.0, (n, size))
    cs = ControlSet.from_table([f"u{k}" for k in range(size)], matrices, a, costs=costs, columns=live)
    terminal = constant_terminal(rng.uniform(-1.0, 1.0, n))
    return cs, a, live, terminal


@pytest.mark.parametrize("seed", range(15))
def test_bellman_value_beats_every_stationary_policy(seed):
    rng = np.random.default_rng(500 + seed)
    cs, a, live, terminal = _random_instance(rng)
    solution = solve_control(cs, a, [0], terminal)
    assert solution.verification_gap <= 1e-8
    for choice in itertools.product(range(len(cs)), repeat=len(live)):
        value = policy_value(cs, a, [0], terminal, dict(zip(live, choice)))
        assert np.all(solution.value.u <= value + 1e-9)


@pytest.mark.slow
def test_bellman_value_on_many_instances():
    rng = np.random.default_rng(9000)
    for _ in range(100):
        cs, a, live, terminal = _random_instance(rng)
        solution = solve_control(cs, a, [0], terminal)
        values = [policy_value(cs, a, [0], terminal, dict(zip(live, choice)))
                  for choice in itertools.product(range(len(cs)), repeat=len(live))]
        assert np.all(solution.value.u <= np.min(values, axis=0) + 1e-9)


def _ramp_cost(unit_chain):
    # L = 1 + t: ожидаемая стоимость E[τ + τ²/2] = 2 при τ ~ Exp(1)
    return ControlSet(labels=("walk",), matrices=(unit_chain,), reference=unit_chain,
                      cost=lambda t, y, x, u: 1.0 + t, c=1.0, columns=(0,))


def test_callable_cost_is_time_dependent_by_default(unit_chain):
    cs = _ramp_cost(unit_chain)
    assert cs.cost_depends_on_t and cs.cost_depends_on_y
    assert hamiltonian_inf(cs, unit_chain).time_dependent
    with pytest.raises(DriverTimeDependent):
        solve_control(cs, unit_chain, [1], constant_terminal([0.0, 0.0]))


def test_callable_cost_on_time_grid(unit_chain):
    solution = solve_control(_ramp_cost(unit_chain), unit_chain, [1], constant_terminal([0.0, 0.0]),
                             horizon=20.0, steps=4000)
    assert solution.value.initial[0] == pytest.approx(2.0, abs=1e-3)


def test_explicit_flags_are_kept(unit_chain):
    cs = ControlSet(labels=("walk",), matrices=(unit_chain,), reference=unit_chain,
                    cost=lambda t, y, x, u: 1.0, columns=(0,), cost_depends_on_t=False, cost_depends_on_y=False)
    assert not cs.cost_depends_on_t and cs.y_free
    assert not _race(unit_chain).cost_depends_on_t


@pytest.mark.parametrize("seed", range(5))
def test_sup_is_minus_inf_of_negated_costs(seed):
    rng = np.random.default_rng(700 + seed)
    cs, a, live, _terminal = _random_instance(rng)
    upper = hamiltonian_sup(cs, a)
    lower = hamiltonian_inf(cs.negated(), a)
    for _ in range(10):
        z = rng.normal(size=a.n)
        y = float(rng.normal())
        for x in live:
            assert upper(x, 0.0, y, z) == pytest.approx(-lower(x, 0.0, -y, -z), abs=1e-12)


def test_negated_callable_cost_keeps_flags(unit_chain):
    flipped = _ramp_cost(unit_chain).negated()
    assert flipped.cost_depends_on_t
    assert flipped.cost_value(1.0, 0.0, 0, 0) == -2.0

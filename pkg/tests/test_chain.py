import numpy as np
import pytest
import scipy.stats

from builders.matrices import MatrixBuilder
from chain.rates import (
    gamma_controlled,
    gamma_equivalent,
    max_gamma,
    psi_matrix,
    seminorm_sq,
    validate_rate_matrix,
)
from chain.simulate import ChainPath, simulate_controlled_path, simulate_path, simulate_paths
from ergodicity.moments import expected_hitting_times
from errors import AbsorbedOutsideTarget, ColumnSumNonzero, DimensionMismatch, NegativeOffDiagonal, NonFinite

SYM = [[-1.0, 1.0], [1.0, -1.0]]


@pytest.mark.parametrize("q", [SYM, [[-1.0, 2.0], [1.0, -2.0]]])
def test_valid_rate_matrices(q):
    a = validate_rate_matrix(q)
    assert a.n == 2
    np.testing.assert_array_equal(a.q, np.array(q))


def test_column_sum_violation_names_column():
    with pytest.raises(ColumnSumNonzero) as err:
        validate_rate_matrix([[-1.0, 0.0], [1.0, -1.0]])
    assert err.value.fields["column"] == 1
    assert err.value.fields["residual"] == -1.0
    assert err.value.exit_code == 1


def test_negative_off_diagonal_and_non_finite():
    with pytest.raises(NegativeOffDiagonal):
        validate_rate_matrix([[1.0, 1.0], [-1.0, -1.0]])
    with pytest.raises(NonFinite):
        validate_rate_matrix([[-1.0, np.nan], [1.0, 0.0]])
    with pytest.raises(DimensionMismatch):
        validate_rate_matrix([[0.0, 0.0, 0.0]])


def test_tiny_column_residual_is_absorbed_by_diagonal():
    a = validate_rate_matrix([[-1.0, 1.0], [1.0 + 1e-11, -1.0]])
    np.testing.assert_allclose(a.q.sum(axis=0), 0.0, atol=1e-15)
    assert not a.q.flags.writeable


def test_gamma_controlled_examples():
    a = validate_rate_matrix(SYM)
    assert gamma_controlled(a, a, 0.5)
    assert not gamma_controlled(a, a, 0.6)
    b = validate_rate_matrix([[-2.0, 1.0], [2.0, -1.0]])
    assert gamma_controlled(a, b, 0.5)


def test_max_gamma_examples():
    a = validate_rate_matrix(SYM)
    assert max_gamma(a, [a]) == pytest.approx(0.5, abs=1e-8)
    assert max_gamma(a, []) == 1.0
    thinner = validate_rate_matrix([[-1.0, 0.0], [1.0, 0.0]])
    assert max_gamma(a, [thinner]) == 0.0


def test_max_gamma_restricted_to_live_columns(unit_chain):
    faster = MatrixBuilder.two_state(2.0)
    # Поглощающий столбец 1 обнулил бы γ
    assert max_gamma(unit_chain, [faster]) == 0.0
    assert max_gamma(unit_chain, [faster], columns=[0]) == pytest.approx(1 / 3, abs=1e-8)
    assert gamma_equivalent(unit_chain, faster, 0.3, columns=[0])


def test_seminorm_examples():
    a = validate_rate_matrix(SYM)
    assert seminorm_sq(a, 0, [0.0, 1.0]) == 1.0
    assert seminorm_sq(a, 1, [2.5, 2.5]) == 0.0
    b = validate_rate_matrix([[-2.0, 1.0], [2.0, -1.0]])
    assert seminorm_sq(b, 0, [0.0, 3.0]) == 18.0


def test_seminorm_matches_psi_matrix(rng):
    a = MatrixBuilder.random(5, rng)
    for x in range(5):
        z = rng.normal(size=5)
        assert z @ psi_matrix(a, x) @ z == pytest.approx(seminorm_sq(a, x, z), rel=1e-12)


def test_path_from_target_has_no_jumps(unit_chain):
    path = simulate_path(unit_chain, 1, {1}, seed=3)
    assert path.jump_times == ()
    assert path.terminal_time == 0.0
    assert path.final_state == 1


def test_controlled_path_with_constant_controls_is_the_same_path(symmetric_chain):
    plain = simulate_path(symmetric_chain, 0, {1}, seed=42)
    controlled = simulate_controlled_path(lambda _x: symmetric_chain, 0, {1}, seed=42)
    assert plain == controlled
    assert len(plain.jump_times) == 1


def test_absorption_outside_target_is_reported():
    stuck = MatrixBuilder.from_off_diagonal([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    with pytest.raises(AbsorbedOutsideTarget):
        simulate_path(stuck, 0, {2}, seed=0)
    path = simulate_path(stuck, 0, {2}, horizon=5.0, seed=0)
    assert not path.absorbed
    assert path.terminal_time == 5.0


def test_paths_do_not_depend_on_worker_count(symmetric_chain):
    serial = simulate_paths(symmetric_chain, 0, {1}, 200, seed=7)
    pooled = simulate_paths(symmetric_chain, 0, {1}, 200, seed=7, workers=4)
    assert serial == pooled


def test_exponential_hitting_time_mean(symmetric_chain):
    times = np.array([p.terminal_time for p in simulate_paths(symmetric_chain, 0, {1}, 20_000, seed=1)])
    assert abs(times.mean() - 1.0) < 4 * times.std(ddof=1) / np.sqrt(len(times))


def test_cycle_hitting_time_matches_linear_solve():
    a = MatrixBuilder.cycle(3)
    expected = expected_hitting_times(a, {2})
    times = np.array([p.terminal_time for p in simulate_paths(a, 0, {2}, 5_000, seed=2)])
    assert abs(times.mean() - expected[0]) < 3 * times.std(ddof=1) / np.sqrt(len(times))


@pytest.mark.slow
def test_exponential_hitting_time_mean_to_one_percent(symmetric_chain):
    times = np.array([p.terminal_time for p in simulate_paths(symmetric_chain, 0, {1}, 100_000, seed=11)])
    assert times.mean() == pytest.approx(1.0, abs=0.01)


def test_discounted_integrals_are_exact():
    path = ChainPath(jump_times=(1.0,), states=(0, 1), terminal_time=1.0)
    assert path.discounted([1.0, 0.0], [0.0, 0.0]) == (1.0, 1.0)
    integral, weight = path.discounted([1.0, 0.0], [1.0, 0.0])
    assert integral == pytest.approx(1 - np.exp(-1.0), rel=1e-14)
    assert weight == pytest.approx(np.exp(-1.0), rel=1e-14)
    assert path.integral([2.0, 5.0]) == 2.0
    assert path.rows() == [(0.0, 0), (1.0, 1)]


@pytest.mark.parametrize("seed", range(3))
def test_holding_times_are_exponential(seed):
    rng = np.random.default_rng(300 + seed)
    a = MatrixBuilder.random(4, rng, absorbing=[3])
    rate = -a.q[0, 0]
    holds = [p.jump_times[0] for p in simulate_paths(a, 0, {3}, 2_000, seed=seed)]
    # Время первого пребывания в 0 ~ Exp(−q_00)
    assert scipy.stats.kstest(holds, "expon", args=(0.0, 1.0 / rate)).pvalue > 1e-3


@pytest.mark.parametrize("seed", range(10))
def test_validator_rejects_perturbed_matrices(seed):
    rng = np.random.default_rng(400 + seed)
    n = int(rng.integers(2, 6))
    q = np.array(MatrixBuilder.random(n, rng).q)
    validate_rate_matrix(q)
    i, j = rng.choice(n, size=2, replace=False)

    shifted = q.copy()
    shifted[i, j] += rng.uniform(1e-6, 1.0)
    with pytest.raises(ColumnSumNonzero) as err:
        validate_rate_matrix(shifted)
    assert err.value.fields["column"] == j

    negative = q.copy()
    negative[i, j] = -rng.uniform(1e-6, 1.0)
    with pytest.raises(NegativeOffDiagonal):
        validate_rate_matrix(negative)

    broken = q.copy()
    broken[i, j] = np.inf
    with pytest.raises(NonFinite):
        validate_rate_matrix(broken)


def test_faster_controls_halve_mean_hitting_time():
    slow = MatrixBuilder.cycle(3)
    fast = MatrixBuilder.cycle(3, rate=2.0)
    expected = expected_hitting_times(slow, {2})[0]
    times = np.array([simulate_controlled_path(lambda x: fast if x == 0 else slow, 0, {2}, seed=s).terminal_time
                      for s in range(4_000)])
    # Под быстрой матрицей только первое пребывание короче вдвое
    assert expected == pytest.approx(2.0)
    assert abs(times.mean() - 1.5) < 4 * times.std(ddof=1) / np.sqrt(len(times))
    doubled = np.array([simulate_controlled_path(lambda _x: fast, 0, {2}, seed=s).terminal_time
                        for s in range(4_000)])
    assert abs(doubled.mean() - expected / 2) < 4 * doubled.std(ddof=1) / np.sqrt(len(doubled))

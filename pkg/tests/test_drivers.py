import math

import numpy as np
import pytest

from builders.matrices import MatrixBuilder
from drivers import (
    AffineDriver,
    ControlSet,
    MarkovianDriver,
    check_balanced,
    discount_driver,
    empirical_lipschitz,
    hamiltonian_inf,
    hamiltonian_sup,
    lipschitz_bound,
    lipschitz_constant,
    measure_change_driver,
    truncate_driver,
    zero_driver,
)
from errors import EmptyControlSet, NotCertified


def test_measure_change_driver_is_balanced_with_exact_witness(symmetric_chain, rng):
    b = MatrixBuilder.random_in_box(symmetric_chain, 0.5, rng)
    cert = check_balanced(measure_change_driver(symmetric_chain, b), symmetric_chain, 0.5, samples=500)
    assert cert.passed
    for sample in cert.witness_samples:
        np.testing.assert_array_equal(sample.lam, b.q[:, sample.x])


def test_zero_driver_is_balanced_with_unit_ratios(symmetric_chain):
    cert = check_balanced(zero_driver(symmetric_chain), symmetric_chain, 1.0, samples=200)
    assert cert.passed
    for sample in cert.witness_samples:
        np.testing.assert_array_equal(sample.lam, symmetric_chain.q[:, sample.x])


def test_cubic_driver_is_not_balanced(symmetric_chain):
    cubic = MarkovianDriver(lambda x, t, y, z: z[0] ** 3, 2, name="cubic")
    cert = check_balanced(cubic, symmetric_chain, 0.5, samples=200)
    assert not cert.passed
    assert cert.counterexample is not None


def test_hamiltonian_is_balanced_at_control_gamma(symmetric_chain):
    faster = MatrixBuilder.two_state(1.5, 1.0)
    cs = ControlSet.from_table(["walk", "fast"], [symmetric_chain, faster], symmetric_chain)
    assert cs.gamma == pytest.approx(0.4, abs=1e-8)
    cert = check_balanced(hamiltonian_inf(cs, symmetric_chain), symmetric_chain, cs.gamma, samples=300)
    assert cert.passed


def test_singleton_hamiltonian_is_zero(symmetric_chain, rng):
    cs = ControlSet.from_table(["only"], [symmetric_chain], symmetric_chain)
    d = hamiltonian_inf(cs, symmetric_chain)
    for _ in range(20):
        z = rng.normal(size=2)
        assert d(int(rng.integers(2)), 0.0, 0.0, z) == 0.0


def test_hamiltonian_picks_faster_matrix_for_negative_increment(unit_chain):
    faster = MatrixBuilder.two_state(2.0)
    cs = ControlSet.from_table(["slow", "fast"], [unit_chain, faster], unit_chain, columns=[0])
    inf = hamiltonian_inf(cs, unit_chain)
    assert inf(0, 0.0, 0.0, [0.0, -1.0]) == -1.0
    assert inf.argext(0, 0.0, 0.0, [0.0, -1.0]) == 1
    assert inf(0, 0.0, 0.0, [0.0, 1.0]) == 0.0
    assert inf.argext(0, 0.0, 0.0, [0.0, 1.0]) == 0
    sup = hamiltonian_sup(cs, unit_chain)
    assert sup(0, 0.0, 0.0, [0.0, 1.0]) == 1.0


def test_hamiltonian_ties_pick_lowest_index(unit_chain):
    cs = ControlSet.from_table(["a", "b"], [unit_chain, unit_chain], unit_chain, columns=[0])
    assert hamiltonian_inf(cs, unit_chain).policy(0.0, [3.0, 1.0]) == [0, 0]


def test_empty_control_set_is_rejected(unit_chain):
    with pytest.raises(EmptyControlSet):
        ControlSet.from_table([], [], unit_chain)


def test_hamiltonian_is_shift_invariant(symmetric_chain):
    faster = MatrixBuilder.two_state(1.5, 1.0)
    cs = ControlSet.from_table(["walk", "fast"], [symmetric_chain, faster], symmetric_chain, costs=[[0.0, 1.0]] * 2)
    assert hamiltonian_inf(cs, symmetric_chain).shift_invariance_defect() < 1e-12


def test_discount_driver_is_monotone(symmetric_chain):
    d = discount_driver(symmetric_chain, [1.0, 2.0])
    assert d.monotone and d.y_dependent
    assert d.c == 2.0
    assert d.monotonicity_violations() == []


def test_truncation_inside_box_is_identity(symmetric_chain, rng):
    b = MatrixBuilder.random_in_box(symmetric_chain, 0.5, rng)
    d = AffineDriver(symmetric_chain, b=b, g=[0.3, -0.2], r=[1.0, 0.5])
    truncated = truncate_driver(d, 10.0)
    for _ in range(50):
        x = int(rng.integers(2))
        y = float(rng.uniform(-5, 5))
        z = rng.uniform(-2, 2, size=2)
        assert truncated(x, 1.0, y, z) == pytest.approx(d(x, 1.0, y, z), abs=1e-14)


def test_truncation_clamps_y(symmetric_chain):
    d = discount_driver(symmetric_chain, [1.0, 1.0])
    assert truncate_driver(d, 1.0)(0, 0.0, 2.0, [0.0, 0.0]) == -1.0
    assert truncate_driver(d, 1.0)(0, 0.0, -3.0, [0.0, 0.0]) == 1.0


def test_truncation_level_must_be_positive(symmetric_chain):
    with pytest.raises(ValueError):
        truncate_driver(zero_driver(symmetric_chain), 0.0)


def test_lipschitz_constant_covers_small_gamma(symmetric_chain):
    assert lipschitz_constant(symmetric_chain, 0.5) == pytest.approx(math.sqrt(2.0))
    # При γ = 0.2 (1/γ − 1)² = 16 больше 1/γ = 5
    assert lipschitz_constant(symmetric_chain, 0.2) == pytest.approx(4.0)


def test_zero_driver_has_zero_empirical_ratio(symmetric_chain):
    assert empirical_lipschitz(zero_driver(symmetric_chain), symmetric_chain, samples=500) == 0.0


def test_measure_change_ratio_within_bound(symmetric_chain, rng):
    b = MatrixBuilder.random_in_box(symmetric_chain, 0.5, rng)
    d = measure_change_driver(symmetric_chain, b)
    assert empirical_lipschitz(d, symmetric_chain, samples=10_000) <= math.sqrt(2.0)
    cert = check_balanced(d, symmetric_chain, 0.5, samples=100)
    assert lipschitz_bound(d, symmetric_chain, 0.5, certificate=cert) == pytest.approx(math.sqrt(2.0))


def test_lipschitz_bound_requires_certificate(symmetric_chain):
    d = zero_driver(symmetric_chain)
    with pytest.raises(NotCertified):
        lipschitz_bound(d, symmetric_chain, 0.5)
    weak = check_balanced(d, symmetric_chain, 0.5, samples=10)
    with pytest.raises(NotCertified):
        lipschitz_bound(d, symmetric_chain, 0.8, certificate=weak)

import math

import numpy as np
import pytest

from apps.circuit import (
    CircuitDriver,
    CircuitSpec,
    Diode,
    Resistor,
    circuit_problem,
    diode_currents,
    kirchhoff_residuals,
    nodal_analysis,
    solve_circuit,
)
from errors import DisconnectedNode, SpecFormatError
from solver.homogeneous import homogeneous_residual

IS, VT = 1e-3, 0.3


def _divider(top: float, bottom: float) -> CircuitSpec:
    return CircuitSpec(("in", "mid", "gnd"), ((0, 1, Resistor(top)), (1, 2, Resistor(bottom))), {0: 1.0, 2: 0.0})


def test_equal_divider():
    sol = solve_circuit(_divider(1.0, 1.0))
    assert sol.u[1] == pytest.approx(0.5, abs=1e-10)
    assert sol.u[0] == 1.0 and sol.u[2] == 0.0
    assert sol.metadata["reference_resistances"] == [1.0, 1.0]


def test_unequal_divider():
    sol = solve_circuit(_divider(1e3, 2e3))
    assert sol.u[1] == pytest.approx(2 / 3, abs=1e-10)
    assert sol.metadata["kirchhoff_max"] < 1e-8


def _random_network(rng, n: int) -> CircuitSpec:
    edges = [(k, k + 1, Resistor(float(rng.uniform(10.0, 1000.0)))) for k in range(n - 1)]
    for _ in range(n):
        i, j = rng.choice(n, size=2, replace=False)
        edges.append((int(i), int(j), Resistor(float(rng.uniform(10.0, 1000.0)))))
    return CircuitSpec(tuple(f"n{k}" for k in range(n)), tuple(edges), {0: 1.0, n - 1: -0.5})


@pytest.mark.parametrize("seed", range(5))
def test_resistor_networks_match_nodal_analysis(seed):
    rng = np.random.default_rng(seed)
    c = _random_network(rng, int(rng.integers(3, 8)))
    sol = solve_circuit(c)
    np.testing.assert_allclose(sol.u, nodal_analysis(c), atol=1e-10)
    # Принцип максимума
    assert np.all(sol.u <= 1.0 + 1e-12)
    assert np.all(sol.u >= -0.5 - 1e-12)


def _series_diode():
    return CircuitSpec(("in", "mid", "gnd"), ((0, 1, Diode(IS, VT)), (1, 2, Resistor(100.0))), {0: 1.0, 2: 0.0})


DIODE_CIRCUITS = {
    "series": _series_diode(),
    "reverse": CircuitSpec(("in", "mid", "gnd"), ((1, 0, Diode(IS, VT)), (1, 2, Resistor(100.0))),
                           {0: 1.0, 2: 0.0}),
    "antiparallel": CircuitSpec(("in", "mid", "gnd"),
                                ((0, 1, Diode(IS, VT)), (1, 0, Diode(2 * IS, VT)), (1, 2, Resistor(100.0))),
                                {0: 1.0, 2: 0.0}),
    "two_in_series": CircuitSpec(("in", "m1", "m2", "gnd"),
                                 ((0, 1, Diode(IS, VT)), (1, 2, Diode(IS, VT)), (2, 3, Resistor(100.0))),
                                 {0: 1.0, 3: 0.0}),
    "bridge": CircuitSpec(("in", "a", "b", "gnd"),
                          ((0, 1, Resistor(100.0)), (0, 2, Resistor(200.0)), (1, 2, Diode(IS, VT)),
                           (1, 3, Resistor(150.0)), (2, 3, Resistor(100.0))),
                          {0: 1.0, 3: 0.0}),
}


@pytest.mark.parametrize("name", sorted(DIODE_CIRCUITS))
def test_diode_circuits_match_nodal_analysis(name):
    c = DIODE_CIRCUITS[name]
    sol = solve_circuit(c)
    np.testing.assert_allclose(sol.u, nodal_analysis(c), atol=1e-6)
    assert np.abs(kirchhoff_residuals(c, sol.u)).max() < 1e-8


def test_series_diode_carries_resistor_current():
    c = _series_diode()
    sol = solve_circuit(c)
    (report,) = diode_currents(c, sol.u)
    assert report["anode"] == "in" and report["cathode"] == "mid"
    assert report["current"] == pytest.approx(sol.u[1] / 100.0, abs=1e-9)
    assert report["resistance"] == pytest.approx(report["voltage"] / report["current"], rel=1e-9)
    assert 0.0 < sol.u[1] < 1.0


def test_homogeneous_residual_is_minus_kirchhoff_current():
    c = DIODE_CIRCUITS["bridge"]
    p = circuit_problem(c)
    v = np.array([1.0, 0.6, 0.4, 0.0])
    np.testing.assert_allclose(homogeneous_residual(p, v)[[1, 2]], -kirchhoff_residuals(c, v)[[1, 2]], atol=1e-14)


def test_disconnected_node_is_reported():
    with pytest.raises(DisconnectedNode) as err:
        CircuitSpec(("in", "gnd", "lost", "far"), ((0, 1, Resistor(1.0)), (2, 3, Resistor(1.0))), {0: 1.0, 1: 0.0})
    assert err.value.fields["nodes"] == ["lost", "far"]


def test_component_parameters_must_be_positive():
    with pytest.raises(SpecFormatError):
        Resistor(0.0)
    with pytest.raises(SpecFormatError):
        Diode(0.0, VT)
    with pytest.raises(SpecFormatError):
        CircuitSpec(("a", "b"), ((0, 1, Resistor(1.0)),), {})


def test_diode_conductance_at_zero_bias():
    d = Diode(IS, VT)
    assert d.conductance(0.0) == pytest.approx(IS / VT)
    assert d.conductance(1e-9) == pytest.approx(IS / VT, rel=1e-8)
    assert d.conductance(0.6) == pytest.approx(IS * math.expm1(2.0) / 0.6, rel=1e-12)


def test_circuit_driver_is_shift_invariant():
    driver = CircuitDriver(DIODE_CIRCUITS["bridge"])
    assert driver.shift_invariance_defect(scale=0.1) < 1e-12

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
from apps.control import ControlSolution, policy_value, solve_control
from apps.montecarlo import (
    McReport,
    Representation,
    mc_validate,
    representation_from_policy,
    representation_from_problem,
)
from apps.paths import GraphSpec, shortest_path_times, time_identity_gap
from apps.reliability import reliability

__all__ = [
    "ControlSolution", "CircuitSpec", "GraphSpec", "Resistor", "Diode", "CircuitDriver", "Representation",
    "McReport",
    "solve_control", "policy_value", "shortest_path_times", "time_identity_gap", "reliability",
    "solve_circuit", "circuit_problem", "nodal_analysis", "kirchhoff_residuals", "diode_currents",
    "mc_validate", "representation_from_problem", "representation_from_policy",
]

from chain.rates import (
    RateMatrix,
    StateIndex,
    gamma_controlled,
    gamma_equivalent,
    max_gamma,
    psi_matrix,
    seminorm_sq,
    validate_rate_matrix,
)
from chain.simulate import ChainPath, simulate_controlled_path, simulate_path, simulate_paths

__all__ = [
    "RateMatrix", "StateIndex", "ChainPath",
    "validate_rate_matrix", "gamma_controlled", "gamma_equivalent", "max_gamma",
    "psi_matrix", "seminorm_sq",
    "simulate_path", "simulate_controlled_path", "simulate_paths",
]

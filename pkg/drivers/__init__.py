from drivers.affine import AffineDriver, constant_driver, discount_driver, measure_change_driver, zero_driver
from drivers.balance import BalanceCertificate, WitnessSample, check_balanced
from drivers.base import MarkovianDriver
from drivers.controls import ControlSet
from drivers.hamiltonian import HamiltonianDriver, hamiltonian_inf, hamiltonian_sup
from drivers.transforms import (
    TruncatedDriver,
    empirical_lipschitz,
    lipschitz_bound,
    lipschitz_constant,
    truncate_driver,
)

__all__ = [
    "MarkovianDriver", "AffineDriver", "HamiltonianDriver", "TruncatedDriver", "ControlSet",
    "BalanceCertificate", "WitnessSample",
    "zero_driver", "constant_driver", "measure_change_driver", "discount_driver",
    "check_balanced", "hamiltonian_inf", "hamiltonian_sup", "truncate_driver",
    "lipschitz_bound", "lipschitz_constant", "empirical_lipschitz",
]

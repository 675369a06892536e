"""Work extraction from sudden-quench cycles of the Dicke model in its
Gaussian (Holstein-Primakoff) approximation."""

from .cycles import CycleProtocol, WorkBreakdown, run_cycle
from .entanglement import NegativityReport, log_negativity
from .errors import DickeError
from .gaussian import (
    GaussianState,
    entangled_polariton_state,
    local_thermal_state,
    polariton_thermal_state,
    quadrature_covariance,
    to_local,
    to_polariton,
)
from .model import DickeParams, DickePoint, solve_point
from .sweep import SweepConfig, run_sweep
from .thermo import EnergyReport, energy_report, ergotropy

__all__ = [
    "CycleProtocol", "WorkBreakdown", "run_cycle",
    "NegativityReport", "log_negativity",
    "DickeError",
    "GaussianState", "entangled_polariton_state", "local_thermal_state",
    "polariton_thermal_state", "quadrature_covariance", "to_local", "to_polariton",
    "DickeParams", "DickePoint", "solve_point",
    "SweepConfig", "run_sweep",
    "EnergyReport", "energy_report", "ergotropy",
]

__version__ = "0.1.0"

"""Energetics of Gaussian states: excitation energy, passive energy, ergotropy.

The passive energy is the minimum over Gaussian unitaries, obtained by
pairing the thermal occupations ``nu - 1/2`` of the symplectic spectrum in
descending order with the polariton energies in ascending order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cycles import WorkBreakdown
from .errors import ZeroDenominator
from .gaussian import GaussianState, occupations, symplectic_eigenvalues, to_polariton
from .model import DickePoint

# symplectic eigenvalues closer than this (relative to |sigma|) to 1/2 are pure
_NU_NOISE = 64.0 * np.finfo(float).eps

# ratios with a denominator below this fraction of the energy scale are absent
ZERO_RTOL = 1e-10


@dataclass(frozen=True)
class EnergyReport:
    excitation_energy: float
    absolute_energy: float
    passive_energy: float
    ergotropy: float


def excitation_energy(state: GaussianState, point: DickePoint) -> float:
    """Energy above the ground state of ``point``'s Hamiltonian."""
    n_d, n_c = occupations(to_polariton(state, point))
    return point.eps_minus * n_d + point.eps_plus * n_c


def passive_energy(state: GaussianState, point: DickePoint) -> float:
    nus = sorted(symplectic_eigenvalues(state), reverse=True)
    energies = sorted((point.eps_minus, point.eps_plus))
    # excess below the eigensolver's resolution is a pure mode, not a thermal one
    floor = _NU_NOISE * max(1.0, float(np.max(np.abs(state.sigma))))
    excess = [nu - 0.5 if nu - 0.5 > floor else 0.0 for nu in nus]
    return sum(e * x for e, x in zip(energies, excess))


def ergotropy(state: GaussianState, point: DickePoint) -> float:
    return excitation_energy(state, point) - passive_energy(state, point)


def energy_report(state: GaussianState, point: DickePoint) -> EnergyReport:
    exc = excitation_energy(state, point)
    passive = passive_energy(state, point)
    return EnergyReport(
        excitation_energy=exc,
        absolute_energy=exc + point.ground_energy,
        passive_energy=passive,
        ergotropy=exc - passive,
    )


def safe_ratio(num: float, den: float, scale: float) -> float:
    """``num / den``; raises ZeroDenominator when ``den`` is zero at ``scale``."""
    if not den > ZERO_RTOL * scale:
        raise ZeroDenominator(f"denominator {den:.3e} vanishes at scale {scale:.3e}")
    return num / den


def ratios(work: WorkBreakdown, energy: EnergyReport) -> tuple[float, float]:
    """``(work / excitation energy, work / ergotropy)``; NaN marks an absent value."""
    scale = max(abs(energy.excitation_energy), abs(energy.passive_energy), 1e-300)
    out = []
    for den in (energy.excitation_energy, energy.ergotropy):
        try:
            out.append(safe_ratio(work.total, den, scale))
        except ZeroDenominator:
            out.append(math.nan)
    return out[0], out[1]

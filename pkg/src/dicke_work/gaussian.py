"""Two-mode Gaussian states in the ladder representation.

A state is stored as a displacement ``disp`` and the centred, symmetrized
second-moment matrix ``sigma_ij = <{dx_i, dx_j}>/2`` of the ladder vector
``x = (m1, m1+, m2, m2+)``.  The modes are either the local fluctuation
modes ``(a, b)`` or the polaritons ``(d, c)`` of a given parameter point.
Quadrature covariances are derived views.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy import constants

from .errors import NegativeTemperature, NonNormalizable, NonSymplecticMatrix

if TYPE_CHECKING:
    from .model import DickeParams, DickePoint

LOCAL = "local_ab"
POLARITON = "polariton_dc"
BASES = (LOCAL, POLARITON)

# [x_i, x_j] for x = (m1, m1+, m2, m2+)
COMMUTATION_KERNEL = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])
# <x_i x_j> = sigma_ij + LAMBDA_ij + <x_i><x_j>
LAMBDA = COMMUTATION_KERNEL / 2.0

# u = QUADRATURE_MAP @ x with u = (X1, Y1, X2, Y2), X = (m + m+)/sqrt2, Y = i(m+ - m)/sqrt2
QUADRATURE_MAP = np.array([
    [1.0, 1.0, 0.0, 0.0],
    [-1j, 1j, 0.0, 0.0],
    [0.0, 0.0, 1.0, 1.0],
    [0.0, 0.0, -1j, 1j],
]) / math.sqrt(2.0)

_SWAP = np.array([1, 0, 3, 2])
VACUUM_SIGMA = np.array([
    [0.0, 0.5, 0.0, 0.0],
    [0.5, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.5],
    [0.0, 0.0, 0.5, 0.0],
], dtype=complex)


@dataclass(frozen=True, eq=False)
class GaussianState:
    basis: str
    params: "DickeParams | None"
    disp: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.basis == POLARITON and self.params is None:
            raise ValueError("a polariton-basis state needs the parameter point defining it")
        disp = np.asarray(self.disp, dtype=complex).reshape(4)
        sigma = np.asarray(self.sigma, dtype=complex)
        if sigma.shape != (4, 4):
            raise ValueError(f"sigma must be 4x4, got {sigma.shape}")
        scale = max(1.0, float(np.max(np.abs(sigma))))
        if np.max(np.abs(sigma - sigma.T)) > 1e-9 * scale:
            raise ValueError("sigma must be symmetric")
        object.__setattr__(self, "disp", disp)
        object.__setattr__(self, "sigma", 0.5 * (sigma + sigma.T))

    def pairing_defect(self) -> float:
        """Deviation from the conjugation pairing (1<->2, 3<->4)."""
        swapped = self.sigma[np.ix_(_SWAP, _SWAP)]
        return float(np.max(np.abs(swapped - self.sigma.conj())))

    def is_physical(self, tol: float = 1e-10) -> bool:
        return min(symplectic_eigenvalues(self)) >= 0.5 - tol


@dataclass(frozen=True, eq=False)
class QuadratureCovariance:
    """Real symmetric covariance of ``(X1, Y1, X2, Y2)``."""

    s: np.ndarray

    @property
    def p(self) -> np.ndarray:
        return self.s[:2, :2]

    @property
    def a(self) -> np.ndarray:
        return self.s[2:, 2:]

    @property
    def x(self) -> np.ndarray:
        return self.s[:2, 2:]


def bose_occupation(energy: float, temperature: float) -> float:
    """Mean thermal occupation of a mode of angular frequency ``energy`` (rad/s)
    at ``temperature`` kelvin."""
    if temperature < 0:
        raise NegativeTemperature(f"temperature must be >= 0 K, got {temperature}")
    if temperature == 0 or energy == math.inf:
        return 0.0
    x = constants.hbar * energy / (constants.k * temperature)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def beta_from_temperature(temperature: float) -> float:
    """Inverse temperature in units of 1/(hbar rad/s), i.e. seconds."""
    if temperature <= 0:
        raise NegativeTemperature(f"temperature must be > 0 K, got {temperature}")
    return constants.hbar / (constants.k * temperature)


def thermal_sigma(n1: float, n2: float) -> np.ndarray:
    sigma = np.zeros((4, 4), dtype=complex)
    sigma[0, 1] = sigma[1, 0] = n1 + 0.5
    sigma[2, 3] = sigma[3, 2] = n2 + 0.5
    return sigma


def product_thermal_state(basis: str, params, n1: float, n2: float) -> GaussianState:
    if n1 < 0 or n2 < 0:
        raise ValueError("occupations must be non-negative")
    return GaussianState(basis, params, np.zeros(4), thermal_sigma(n1, n2))


def vacuum(basis: str = LOCAL, params=None) -> GaussianState:
    return GaussianState(basis, params, np.zeros(4), VACUUM_SIGMA)


def local_thermal_state(p: "DickeParams", t_a: float, t_b: float) -> GaussianState:
    """Product of thermal states of the bare modes ``omega a+a`` and ``omega0 b+b``."""
    if t_a < 0 or t_b < 0:
        raise NegativeTemperature(f"temperatures must be >= 0 K, got {t_a}, {t_b}")
    n_a = bose_occupation(p.omega, t_a)
    n_b = bose_occupation(p.omega0, t_b)
    return product_thermal_state(LOCAL, p, n_a, n_b)


def polariton_thermal_state(point: "DickePoint", t_d: float, t_c: float) -> GaussianState:
    if t_d < 0 or t_c < 0:
        raise NegativeTemperature(f"temperatures must be >= 0 K, got {t_d}, {t_c}")
    n_d = bose_occupation(point.eps_minus, t_d)
    n_c = bose_occupation(point.eps_plus, t_c)
    return product_thermal_state(POLARITON, point.params, n_d, n_c)


def schmidt_weight(point: "DickePoint", beta_eff: float) -> float:
    if not beta_eff > 0:
        raise NonNormalizable(f"beta_eff must be positive, got {beta_eff}")
    return math.exp(-beta_eff * (point.eps_plus + point.eps_minus) / 4.0)


def two_mode_squeezed_sigma(q: float) -> np.ndarray:
    """sigma of sqrt(1-q^2) sum_n q^n |n>|n>."""
    if not 0.0 <= q < 1.0:
        raise NonNormalizable(f"Schmidt weight must lie in [0, 1), got {q}")
    one_minus = 1.0 - q * q
    nbar = q * q / one_minus
    corr = q / one_minus
    sigma = thermal_sigma(nbar, nbar)
    sigma[0, 2] = sigma[2, 0] = corr
    sigma[1, 3] = sigma[3, 1] = corr
    return sigma


def entangled_polariton_state(point: "DickePoint", beta_eff: float) -> GaussianState:
    """Pure two-mode squeezed polariton state with locally passive marginals."""
    q = schmidt_weight(point, beta_eff)
    return GaussianState(POLARITON, point.params, np.zeros(4), two_mode_squeezed_sigma(q))


def apply_symplectic(state: GaussianState, transform: np.ndarray, new_basis: str,
                     new_params=None, shift: np.ndarray | None = None,
                     check: bool = True) -> GaussianState:
    """Re-express ``state`` in new ladder operators ``x' = T (x + shift)``."""
    t = np.asarray(transform)
    if check:
        k = COMMUTATION_KERNEL
        defect = np.max(np.abs(t @ k @ t.T - k))
        if defect > 1e-9 * max(1.0, float(np.max(np.abs(t))) ** 2):
            raise NonSymplecticMatrix(f"transform violates the commutation kernel by {defect:.3e}")
    disp = state.disp if shift is None else state.disp + shift
    return GaussianState(new_basis, new_params, t @ disp, t @ state.sigma @ t.T)


def to_polariton(state: GaussianState, point: "DickePoint") -> GaussianState:
    """Express a local-basis state in the polaritons of ``point``."""
    from .errors import BasisMismatch

    if state.basis == POLARITON:
        if state.params != point.params:
            raise BasisMismatch("state lives in the polariton basis of another point")
        return state
    if point.diag.soft:
        raise BasisMismatch("no polariton basis at a zero-energy mode")
    return apply_symplectic(state, point.diag.m_inv, POLARITON, point.params, check=False)


def to_local(state: GaussianState, point: "DickePoint") -> GaussianState:
    from .errors import BasisMismatch

    if state.basis == LOCAL:
        return state
    if state.params != point.params:
        raise BasisMismatch("state lives in the polariton basis of another point")
    return apply_symplectic(state, point.diag.m, LOCAL, point.params, check=False)


def quadrature_covariance(state: GaussianState) -> QuadratureCovariance:
    s = QUADRATURE_MAP @ state.sigma @ QUADRATURE_MAP.T
    s = s.real
    return QuadratureCovariance(0.5 * (s + s.T))


def symplectic_eigenvalues(state: GaussianState) -> tuple[float, float]:
    ev = np.abs(np.linalg.eigvals(COMMUTATION_KERNEL @ state.sigma))
    ev = np.sort(ev)
    # eigenvalues come in +-nu pairs
    return float(0.5 * (ev[0] + ev[1])), float(0.5 * (ev[2] + ev[3]))


def occupations(state: GaussianState) -> tuple[float, float]:
    s, lam, m = state.sigma, LAMBDA, state.disp
    n1 = s[1, 0] + lam[1, 0] + m[1] * m[0]
    n2 = s[3, 2] + lam[3, 2] + m[3] * m[2]
    return float(n1.real), float(n2.real)

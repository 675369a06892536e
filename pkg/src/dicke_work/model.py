"""Static structure of the Dicke model at one parameter point.

Everything here works in units with hbar = 1, so energies and frequencies
share the unit rad/s.  The photon fluctuation mode is ``a`` and the
Holstein-Primakoff atomic mode is ``b``; the normal modes are ``d`` (energy
``eps_minus``, photon-like) and ``c`` (energy ``eps_plus``, the soft mode
when ``omega > omega0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import ImaginarySpectrum, InvalidParameters, NonNormalPhase
from .gaussian import COMMUTATION_KERNEL

TWO_PI = 2.0 * math.pi

# Relative floor below which the product of the two squared polariton
# energies is treated as an exact zero (rounding noise at criticality).
_DET_NOISE = 64.0 * np.finfo(float).eps


@dataclass(frozen=True)
class DickeParams:
    """One point of protocol parameter space (angular frequencies, rad/s)."""

    omega0: float
    omega: float
    lam: float
    n_atoms: float = 1e5

    def __post_init__(self):
        for name in ("omega0", "omega", "lam", "n_atoms"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value!r}")
        if self.omega0 <= 0 or self.omega <= 0:
            raise InvalidParameters("omega0 and omega must be positive")
        if self.lam < 0:
            raise InvalidParameters(f"lambda must be non-negative, got {self.lam}")
        if self.n_atoms < 1:
            raise InvalidParameters(f"n_atoms must be >= 1, got {self.n_atoms}")

    @classmethod
    def from_hz(cls, omega0_hz: float, omega_hz: float, lambda_hz: float = 0.0,
                n_atoms: float = 1e5) -> "DickeParams":
        """Build from ordinary frequencies (Hz); stored values are multiplied by 2 pi."""
        return cls(TWO_PI * omega0_hz, TWO_PI * omega_hz, TWO_PI * lambda_hz, n_atoms)

    @property
    def lambda_cr(self) -> float:
        return critical_coupling(self)

    @property
    def is_normal(self) -> bool:
        return self.lam < self.lambda_cr

    def with_(self, **changes) -> "DickeParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class MeanFields:
    alpha_s: float
    beta_s: float
    branch: int = 1


@dataclass(frozen=True)
class EffectiveQuadratic:
    omega0_tilde: float
    mu: float
    lambda_tilde: float
    e0: float


@dataclass(frozen=True, eq=False)
class Diagonalization:
    """Polariton spectrum and the ladder-basis map ``(da, da+, db, db+) = m (d, d+, c, c+)``.

    ``m`` and ``m_inv`` are ``None`` when a polariton energy is exactly zero,
    since no canonical transformation exists at a zero mode.
    """

    eps_minus: float
    eps_plus: float
    gamma_b: float
    m: np.ndarray | None
    m_inv: np.ndarray | None

    @property
    def soft(self) -> bool:
        return self.m is None


def critical_coupling(p: DickeParams) -> float:
    return math.sqrt(p.omega * p.omega0) / 2.0


def fixed_points(p: DickeParams, branch: int = 1) -> MeanFields:
    """Steady-state mean fields; ``branch`` (+1 or -1) picks one of the two
    degenerate superradiant solutions."""
    if branch not in (1, -1):
        raise InvalidParameters(f"branch must be +1 or -1, got {branch}")
    lam_cr = critical_coupling(p)
    if p.lam <= lam_cr:
        return MeanFields(0.0, 0.0, branch)
    f = math.sqrt(1.0 - (lam_cr / p.lam) ** 4)
    alpha = -branch * p.lam * math.sqrt(p.n_atoms) / p.omega * f
    beta = branch * 0.5 * p.n_atoms * f
    return MeanFields(alpha, beta, branch)


def effective_quadratic(p: DickeParams, mf: MeanFields) -> EffectiveQuadratic:
    n = p.n_atoms
    a, b = mf.alpha_s, mf.beta_s
    ratio2 = b * b / (n * n)
    if ratio2 >= 1.0:
        raise InvalidParameters(f"|beta_s| = {abs(b)} must be below N = {n}")
    root = math.sqrt(1.0 - ratio2)
    shift = p.lam * a * b / (n ** 1.5 * root)
    omega0_t = p.omega0 - 2.0 * shift
    mu = shift * (1.0 + b * b / (2.0 * (n * n - b * b)))
    lam_t = p.lam * (1.0 - 2.0 * ratio2) / root
    e0 = (p.omega * a * a + p.omega0 * (b * b / n - n / 2.0)
          + 4.0 * p.lam * a * b / math.sqrt(n) * root)
    return EffectiveQuadratic(omega0_t, mu, lam_t, e0)


def _sign(x: float) -> float:
    return 1.0 if x >= 0.0 else -1.0


def polariton_energies(eq: EffectiveQuadratic, p: DickeParams) -> tuple[float, float, float]:
    """Return ``(eps_minus, eps_plus, gamma_b)``.

    The larger squared energy comes from the closed form; the smaller one is
    obtained from the determinant of the potential matrix so that the soft
    mode keeps full relative precision near criticality.
    """
    w = p.omega
    w0t = eq.omega0_tilde
    if w0t <= 0:
        raise ImaginarySpectrum(f"renormalized atomic frequency {w0t} is not positive")
    atom_sq = w0t * w0t - 4.0 * eq.mu * w0t
    z = atom_sq - w * w
    g = 2.0 * eq.lambda_tilde * math.sqrt(w * w0t)
    radius = math.hypot(z, 2.0 * g)
    big = 0.5 * (atom_sq + w * w + radius)
    det = w * w * atom_sq - g * g
    if abs(det) <= _DET_NOISE * max(abs(w * w * atom_sq), g * g):
        det = 0.0
    if big <= 0.0 or det < 0.0:
        raise ImaginarySpectrum(
            f"negative polariton radicand at omega={w}, omega0~={w0t}, lambda~={eq.lambda_tilde}")
    small = det / big
    s = _sign(z)
    if s > 0:
        eps_plus_sq, eps_minus_sq = big, small
    else:
        eps_minus_sq, eps_plus_sq = big, small
    if eps_minus_sq <= 0.0:
        raise ImaginarySpectrum("eps_minus vanishes; the d polariton is not a bound mode")

    gamma = 0.5 * math.atan2(2.0 * g * s, abs(z))
    if gamma <= -math.pi / 4:
        gamma = math.pi / 4
    return math.sqrt(eps_minus_sq), math.sqrt(eps_plus_sq), gamma


def symplectic_matrix(eps_minus: float, eps_plus: float, gamma: float,
                      omega: float, omega0_tilde: float) -> np.ndarray:
    cg, sg = math.cos(gamma), math.sin(gamma)

    def pair(ref, eps):
        u, v = math.sqrt(ref / eps), math.sqrt(eps / ref)
        return 0.5 * (u + v), 0.5 * (u - v)

    ap, am = pair(omega, eps_minus)
    bp, bm = pair(omega, eps_plus)
    cp, cm = pair(omega0_tilde, eps_minus)
    dp, dm = pair(omega0_tilde, eps_plus)
    ap, am = cg * ap, cg * am
    bp, bm = sg * bp, sg * bm
    cp, cm = -sg * cp, -sg * cm
    dp, dm = cg * dp, cg * dm
    return np.array([
        [ap, am, bp, bm],
        [am, ap, bm, bp],
        [cp, cm, dp, dm],
        [cm, cp, dm, dp],
    ])


def symplectic_inverse(m: np.ndarray) -> np.ndarray:
    k = COMMUTATION_KERNEL
    return -k @ m.T @ k


def symplectic_defect(m: np.ndarray) -> float:
    """Max-norm of ``m K m^T - K``."""
    k = COMMUTATION_KERNEL
    return float(np.max(np.abs(m @ k @ m.T - k)))


def diagonalize(eq: EffectiveQuadratic, p: DickeParams) -> Diagonalization:
    eps_minus, eps_plus, gamma = polariton_energies(eq, p)
    if eps_plus == 0.0:
        return Diagonalization(eps_minus, eps_plus, gamma, None, None)
    m = symplectic_matrix(eps_minus, eps_plus, gamma, p.omega, eq.omega0_tilde)
    return Diagonalization(eps_minus, eps_plus, gamma, m, symplectic_inverse(m))


@dataclass(frozen=True, eq=False)
class DickePoint:
    """Everything known about the quadratic Hamiltonian at one parameter point."""

    params: DickeParams
    mean_fields: MeanFields
    quad: EffectiveQuadratic
    diag: Diagonalization

    @property
    def eps_minus(self) -> float:
        return self.diag.eps_minus

    @property
    def eps_plus(self) -> float:
        return self.diag.eps_plus

    @property
    def is_normal(self) -> bool:
        return self.mean_fields.alpha_s == 0.0 and self.mean_fields.beta_s == 0.0

    @property
    def ground_energy(self) -> float:
        """Constant part of the diagonal Hamiltonian: E0 + (eps- + eps+ - omega - omega0~)/2."""
        d, q = self.diag, self.quad
        return q.e0 + 0.5 * (d.eps_minus + d.eps_plus - self.params.omega - q.omega0_tilde)

    def local_displacement(self) -> np.ndarray:
        """Mean-field vector in the local ladder basis (zero in the normal phase)."""
        if not self.is_normal:
            # the atomic displacement normalization is ambiguous for superradiant points
            raise NonNormalPhase("mean-field displacement only defined in the normal phase")
        return np.zeros(4)


@lru_cache(maxsize=4096)
def solve_point(p: DickeParams, branch: int = 1) -> DickePoint:
    mf = fixed_points(p, branch)
    eq = effective_quadratic(p, mf)
    return DickePoint(p, mf, eq, diagonalize(eq, p))

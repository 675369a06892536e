"""Truncated Fock-space reference for the quadratic fluctuation Hamiltonian.

Used only to validate the Gaussian engine on small instances: the
Hamiltonian is built as a dense matrix on ``|n_a> (x) |n_b>`` with
``n < cutoff``, states are density matrices, and dwells are exact unitary
evolutions through the eigen-decomposition of each Hamiltonian.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .cycles import CycleProtocol
from .errors import CutoffTooSmall
from .model import DickeParams, MeanFields, effective_quadratic, fixed_points

log = logging.getLogger(__name__)

LEAKAGE_LIMIT = 1e-6


@dataclass(frozen=True)
class FockConfig:
    cutoff_per_mode: int | tuple[int, int] = 60
    leakage_limit: float = LEAKAGE_LIMIT
    # eigen-components of the initial density matrix lighter than this are dropped
    weight_floor: float = 1e-14

    def __post_init__(self):
        if min(self.cutoffs) < 2:
            raise ValueError("cutoff_per_mode must be >= 2")

    @property
    def cutoffs(self) -> tuple[int, int]:
        c = self.cutoff_per_mode
        return (c, c) if isinstance(c, int) else (int(c[0]), int(c[1]))

    @property
    def dim(self) -> int:
        na, nb = self.cutoffs
        return na * nb


def _lowering(n: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n, dtype=float)), 1, format="csr")


def build_hamiltonian(p: DickeParams, mf: MeanFields | None, cfg: FockConfig,
                      sparse: bool = False, include_e0: bool = True):
    """``omega a+a + w0~ b+b + l~ (a+a+)(b+b+) - mu (b+b+)^2 + E0``.

    This is the quadrature form ``w0~/2 (Ax^2+Ay^2) + w/2 (Px^2+Py^2)
    + 2 l~ Px Ax - 2 mu Ax^2`` with the zero-point constant
    ``-(omega + w0~)/2`` folded in, so that its ground energy equals
    ``E0 + (eps- + eps+ - omega - w0~)/2``.
    """
    if mf is None:
        mf = fixed_points(p)
    eq = effective_quadratic(p, mf)
    na, nb = cfg.cutoffs
    a1, b1 = _lowering(na), _lowering(nb)
    ia, ib = sp.identity(na, format="csr"), sp.identity(nb, format="csr")
    xa = a1 + a1.T
    xb = b1 + b1.T
    h = (p.omega * sp.kron(a1.T @ a1, ib)
         + eq.omega0_tilde * sp.kron(ia, b1.T @ b1)
         + eq.lambda_tilde * sp.kron(xa, xb)
         - eq.mu * sp.kron(ia, xb @ xb))
    if include_e0:
        h = h + eq.e0 * sp.identity(na * nb)
    h = h.tocsr()
    return h if sparse else h.toarray()


def lowest_levels(p: DickeParams, cfg: FockConfig, k: int = 6) -> np.ndarray:
    """Lowest ``k`` eigenvalues via shift-invert Lanczos (no E0 offset)."""
    h = build_hamiltonian(p, None, cfg, sparse=True, include_e0=False)
    if cfg.dim <= 2000:
        return np.linalg.eigvalsh(h.toarray())[:k]
    shift = -0.01 * min(p.omega, p.omega0)
    vals = eigsh(h.tocsc(), k=k, sigma=shift, which="LM", return_eigenvectors=False)
    return np.sort(vals)


def fock_index(n_a: int, n_b: int, cfg: FockConfig) -> int:
    return n_a * cfg.cutoffs[1] + n_b


def leakage(rho: np.ndarray, cfg: FockConfig) -> float:
    """Population in the top two Fock layers of either mode."""
    na, nb = cfg.cutoffs
    pops = np.real(np.diag(rho)).reshape(na, nb)
    edge = np.zeros((na, nb), dtype=bool)
    edge[na - 2:, :] = True
    edge[:, nb - 2:] = True
    return float(pops[edge].sum())


def _vector_leakage(vecs: np.ndarray, weights: np.ndarray, cfg: FockConfig) -> float:
    na, nb = cfg.cutoffs
    pops = (np.abs(vecs) ** 2 @ weights).reshape(na, nb)
    edge = np.zeros((na, nb), dtype=bool)
    edge[na - 2:, :] = True
    edge[:, nb - 2:] = True
    return float(pops[edge].sum())


def certify(value: float, cfg: FockConfig, what: str = "state") -> None:
    if value > cfg.leakage_limit:
        raise CutoffTooSmall(
            f"{what} leaks {value:.2e} into the top Fock layers (limit {cfg.leakage_limit:.0e})")


def thermal_occupation_density(n_a: float, n_b: float, cfg: FockConfig) -> np.ndarray:
    """Diagonal density matrix of a product of thermal states with mean numbers ``n_a``, ``n_b``."""
    na, nb = cfg.cutoffs

    def geometric(nbar, n):
        if nbar == 0:
            out = np.zeros(n)
            out[0] = 1.0
            return out
        x = nbar / (1.0 + nbar)
        return (1.0 - x) * x ** np.arange(n)

    pops = np.kron(geometric(n_a, na), geometric(n_b, nb))
    return np.diag(pops / pops.sum())


def gibbs_density(h: np.ndarray, beta: float) -> np.ndarray:
    vals, vecs = np.linalg.eigh(h)
    w = np.exp(-beta * (vals - vals[0]))
    w /= w.sum()
    return (vecs * w) @ vecs.conj().T


def _ensemble(rho: np.ndarray, cfg: FockConfig):
    weights, vecs = np.linalg.eigh(rho)
    keep = weights > cfg.weight_floor
    dropped = float(weights[~keep].clip(min=0).sum())
    return weights[keep], vecs[:, keep].astype(complex), dropped


def _energy(h: np.ndarray, vecs: np.ndarray, weights: np.ndarray) -> float:
    return float(np.real(np.einsum("ik,ik,k->", vecs.conj(), h @ vecs, weights)))


@dataclass
class OracleRun:
    stroke_works: list[float]
    total: float
    max_leakage: float
    trace_drift: float


def oracle_work(protocol: CycleProtocol, rho0: np.ndarray, cfg: FockConfig) -> OracleRun:
    """Average work of every quench, by brute-force evolution in Fock space.

    ``rho0`` is given in the local Fock basis.  The ensemble of its
    eigenvectors is evolved; dwell propagators come from the eigen-
    decomposition of each (real symmetric) Hamiltonian.
    """
    weights, vecs, dropped = _ensemble(rho0, cfg)
    leak = dropped + _vector_leakage(vecs, weights, cfg)
    certify(leak, cfg, "initial state")
    trace0 = float(weights.sum())

    hams = [build_hamiltonian(p, None, cfg) for p in protocol.params]
    works = []
    for i in range(len(hams) - 1):
        tau = protocol.dwells[i]
        if tau > 0.0:
            vals, basis = np.linalg.eigh(hams[i])
            # offset removes the E0 constant from the phases; it is a global phase
            phases = np.exp(-1j * (vals - vals[0]) * tau)
            vecs = basis @ (phases[:, None] * (basis.T @ vecs))
            leak = max(leak, _vector_leakage(vecs, weights, cfg))
            certify(leak, cfg, f"state after dwell {i}")
        works.append(_energy(hams[i + 1], vecs, weights) - _energy(hams[i], vecs, weights))
    norms = np.sum(np.abs(vecs) ** 2, axis=0)
    drift = float(abs((norms * weights).sum() - trace0))
    total = 0.0
    for w in works:
        total += w
    log.debug("oracle run: works=%s leakage=%.2e", works, leak)
    return OracleRun(works, total, leak, drift)


def oracle_ergotropy(rho: np.ndarray, h: np.ndarray) -> float:
    """``Tr(rho H)`` minus the energy of the eigenvalue-sorted passive state."""
    r = np.sort(np.linalg.eigvalsh(rho))[::-1]
    e = np.linalg.eigvalsh(h)
    energy = float(np.real(np.trace(rho @ h)))
    return energy - float(np.dot(r, e))


def level_near(p: DickeParams, cfg: FockConfig, target: float) -> float:
    """Excitation energy of the level closest to ``target`` above the ground state."""
    h = build_hamiltonian(p, None, cfg, sparse=True, include_e0=False).tocsc()
    ground = lowest_levels(p, cfg, 1)[0]
    vals = eigsh(h, k=3, sigma=ground + target, which="LM", return_eigenvectors=False)
    excit = vals - ground
    return float(excit[np.argmin(np.abs(excit - target))])


def compare_with_gaussian(lambda_rel: float = 0.5, cfg: FockConfig | None = None,
                          occupation: float = 2.0, omega_hz: float = 15e6,
                          omega0_hz: float = 8.3e3, tau_b: float = 0.003,
                          temperature_ratio: float = 10.0, n_atoms: float = 100.0) -> dict:
    """Run a two-stroke cycle (omega -> 2 omega) in both engines.

    The atomic temperature is chosen so that its thermal occupation equals
    ``occupation``; the photon temperature is ``temperature_ratio`` times
    larger, mirroring the ratio of the reference sweep.
    """
    from scipy import constants

    from .gaussian import local_thermal_state, occupations
    from .model import solve_point
    from .thermo import ergotropy

    cfg = cfg or FockConfig()
    base = DickeParams.from_hz(omega0_hz, omega_hz, 0.0, n_atoms)
    a = base.with_(lam=lambda_rel * base.lambda_cr)
    b = a.with_(omega=2.0 * a.omega)
    t_b = constants.hbar * a.omega0 / (constants.k * np.log1p(1.0 / occupation))
    state = local_thermal_state(a, temperature_ratio * t_b, t_b)
    n_a, n_b = occupations(state)
    protocol = CycleProtocol.two_stroke(a, b, tau_b)

    from .cycles import run_cycle

    gauss = run_cycle(protocol, state)
    rho = thermal_occupation_density(n_a, n_b, cfg)
    fock = oracle_work(protocol, rho, cfg)
    pt = solve_point(a)
    erg_gauss = ergotropy(state, pt)
    erg_fock = oracle_ergotropy(rho, build_hamiltonian(a, None, cfg))
    levels = lowest_levels(a, cfg, 2)
    gap_plus = levels[1] - levels[0]
    gap_minus = level_near(a, cfg, pt.eps_minus)
    return {
        "n_a": n_a,
        "n_b": n_b,
        "work_gaussian": gauss.total,
        "work_oracle": fock.total,
        "work_rel_err": abs(gauss.total - fock.total) / abs(gauss.total),
        "ergotropy_gaussian": erg_gauss,
        "ergotropy_oracle": erg_fock,
        "ergotropy_rel_err": abs(erg_gauss - erg_fock) / abs(erg_gauss),
        "eps_plus_rel_err": abs(gap_plus - pt.eps_plus) / pt.eps_plus,
        "eps_minus_rel_err": abs(gap_minus - pt.eps_minus) / pt.eps_minus,
        "leakage": fock.max_leakage,
    }

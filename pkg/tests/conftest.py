"""Shared random generators for protocols and states.

Frequencies are dimensionless (order one); every quantity in the engine is
homogeneous in the frequency scale, so this loses no generality while
keeping tolerances readable.
"""

import numpy as np
import pytest
from scipy.linalg import expm

from dicke_work.cycles import CycleProtocol
from dicke_work.gaussian import (
    LOCAL,
    POLARITON,
    QUADRATURE_MAP,
    GaussianState,
    thermal_sigma,
)
from dicke_work.model import DickeParams, solve_point

QUAD_OMEGA = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, max_rel=0.97, n_atoms=1e5) -> DickeParams:
    omega0 = rng.uniform(0.2, 2.0)
    omega = rng.uniform(0.2, 5.0)
    p = DickeParams(omega0, omega, 0.0, n_atoms)
    return p.with_(lam=rng.uniform(0.0, max_rel) * p.lambda_cr)


def random_protocol(rng, n_strokes=None, max_dwell=5.0, zero_dwell=False) -> CycleProtocol:
    """Closed protocol with 2-6 strokes through random normal-phase points."""
    if n_strokes is None:
        n_strokes = int(rng.integers(2, 7))
    first = random_params(rng)
    pts = [first] + [random_params(rng) for _ in range(n_strokes - 1)] + [first]
    dwells = np.zeros(len(pts)) if zero_dwell else rng.uniform(0.0, max_dwell, len(pts))
    return CycleProtocol(tuple(zip(pts, dwells)))


def global_thermal_state(point, beta) -> GaussianState:
    """Polariton-basis Gibbs state at one inverse temperature (a passive state)."""
    n_d = 1.0 / np.expm1(beta * point.eps_minus)
    n_c = 1.0 / np.expm1(beta * point.eps_plus)
    return GaussianState(POLARITON, point.params, np.zeros(4), thermal_sigma(n_d, n_c))


def ordered_thermal_state(rng, point) -> GaussianState:
    """Polariton-diagonal state with the larger occupation on the softer mode."""
    lo, hi = sorted(rng.exponential(1.5, 2))
    if point.eps_minus >= point.eps_plus:
        n_d, n_c = lo, hi
    else:
        n_d, n_c = hi, lo
    return GaussianState(POLARITON, point.params, np.zeros(4), thermal_sigma(n_d, n_c))


def random_quadrature_symplectic(rng, scale=0.6) -> np.ndarray:
    h = rng.normal(size=(4, 4)) * scale
    h = 0.5 * (h + h.T)
    return expm(QUAD_OMEGA @ h)


def ladder_from_quadrature(s: np.ndarray) -> np.ndarray:
    """Quadrature symplectic ``s`` rewritten as a transform of ladder operators."""
    lmap = QUADRATURE_MAP
    return np.linalg.inv(lmap) @ s @ lmap


def random_gaussian_state(rng, basis=LOCAL, params=None) -> GaussianState:
    """Thermal state dressed by a random Gaussian unitary (zero mean)."""
    n1, n2 = rng.exponential(1.0, 2)
    t = ladder_from_quadrature(random_quadrature_symplectic(rng))
    sigma = t @ thermal_sigma(n1, n2) @ t.T
    return GaussianState(basis, params, np.zeros(4), sigma)


def point_of(p):
    return solve_point(p)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[2])):
            terminalreporter.write_line(line)

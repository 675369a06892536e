"""Logarithmic negativity of two-mode Gaussian states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComplexNuMinus, UnphysicalCovariance
from .gaussian import QuadratureCovariance

_OMEGA = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])


@dataclass(frozen=True)
class NegativityReport:
    sigma_tilde: float
    nu_minus: float
    e_n: float


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def quadrature_symplectic_eigenvalues(s: np.ndarray) -> np.ndarray:
    ev = np.sort(np.abs(np.linalg.eigvals(_OMEGA @ s)))
    return np.array([0.5 * (ev[0] + ev[1]), 0.5 * (ev[2] + ev[3])])


_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])


def _transposed_spectrum(s: np.ndarray) -> np.ndarray:
    """Squared symplectic eigenvalues of the partial transpose, ascending.

    They are the eigenvalues of ``R Omega^T S~ Omega R`` with ``R = sqrt(S~)``,
    a symmetric matrix, so each comes out to absolute machine precision.
    """
    st = _FLIP @ s @ _FLIP
    w, v = np.linalg.eigh(st)
    if w.min() <= 0.0:
        raise UnphysicalCovariance("covariance is not positive definite")
    root = (v * np.sqrt(w)) @ v.T
    g = root @ _OMEGA.T @ st @ _OMEGA @ root
    ev = np.linalg.eigvalsh(0.5 * (g + g.T))
    return np.array([0.5 * (ev[0] + ev[1]), 0.5 * (ev[2] + ev[3])])


def log_negativity(cov: QuadratureCovariance, base: float = math.e,
                   tol: float = 1e-9) -> NegativityReport:
    """Negativity from the partially transposed symplectic spectrum.

    ``base`` selects the logarithm (``math.e`` or ``2``).
    """
    s = np.asarray(cov.s, dtype=float)
    scale = max(1.0, float(np.max(np.abs(s))))
    if quadrature_symplectic_eigenvalues(s).min() < 0.5 - tol * scale:
        raise UnphysicalCovariance("covariance violates the uncertainty principle")
    sig = _det2(cov.p) + _det2(cov.a) - 2.0 * _det2(cov.x)
    det_s = float(np.linalg.det(s))
    disc = sig * sig - 4.0 * det_s
    if disc < 0.0:
        if disc < -tol * sig * sig:
            raise ComplexNuMinus(f"Sigma^2 - 4 det S = {disc:.3e} is negative")
        disc = 0.0
    if sig <= 0.0:
        raise UnphysicalCovariance(f"Sigma = {sig:.3e} must be positive")
    # (Sigma - sqrt(disc)) / 2 loses half the digits when the two transposed
    # eigenvalues nearly coincide; take them from a symmetric eigenproblem instead
    nu_minus = math.sqrt(_transposed_spectrum(s)[0])
    if not np.any(cov.x):
        # uncorrelated modes: the transpose of a product state is itself a state
        return NegativityReport(sig, nu_minus, 0.0)
    e_n = max(0.0, -math.log(2.0 * nu_minus, base))
    return NegativityReport(sig, nu_minus, e_n)

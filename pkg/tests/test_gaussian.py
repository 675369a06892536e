import math

import numpy as np
import pytest
from conftest import (
    ladder_from_quadrature,
    random_gaussian_state,
    random_params,
    random_quadrature_symplectic,
)

from dicke_work.errors import (
    BasisMismatch,
    NegativeTemperature,
    NonNormalizable,
    NonSymplecticMatrix,
)
from dicke_work.gaussian import (
    LOCAL,
    POLARITON,
    GaussianState,
    apply_symplectic,
    bose_occupation,
    entangled_polariton_state,
    local_thermal_state,
    occupations,
    polariton_thermal_state,
    quadrature_covariance,
    symplectic_eigenvalues,
    thermal_sigma,
    to_local,
    to_polariton,
    two_mode_squeezed_sigma,
    vacuum,
)
from dicke_work.model import DickeParams, solve_point

LAB = DickeParams.from_hz(8.3e3, 15e6)


def test_bose_occupation_limits():
    assert bose_occupation(1.0, 0.0) == 0.0
    assert bose_occupation(2 * math.pi * 15e6, 1e-6) == 0.0
    # kT >> hbar omega: n ~ kT / (hbar omega) - 1/2
    from scipy import constants
    w, t = 1e3, 1.0
    x = constants.hbar * w / (constants.k * t)
    assert bose_occupation(w, t) == pytest.approx(1 / x - 0.5, rel=1e-6)
    with pytest.raises(NegativeTemperature):
        bose_occupation(1.0, -1.0)


def test_vacuum_has_zero_occupation_and_half_nu():
    v = vacuum()
    assert occupations(v) == (0.0, 0.0)
    assert symplectic_eigenvalues(v) == pytest.approx((0.5, 0.5), abs=1e-15)
    s = quadrature_covariance(v).s
    assert np.allclose(s, 0.5 * np.eye(4))


def test_thermal_quadratures():
    st = GaussianState(LOCAL, None, np.zeros(4), thermal_sigma(1.5, 0.25))
    s = quadrature_covariance(st).s
    assert np.allclose(np.diag(s), [2.0, 2.0, 0.75, 0.75])
    assert symplectic_eigenvalues(st) == pytest.approx((0.75, 2.0))


def test_symplectic_eigenvalues_invariant(rng):
    for _ in range(300):
        st = random_gaussian_state(rng)
        t = ladder_from_quadrature(random_quadrature_symplectic(rng))
        out = apply_symplectic(st, t, LOCAL)
        assert symplectic_eigenvalues(out) == pytest.approx(symplectic_eigenvalues(st), rel=1e-10)


def test_physicality_and_occupations(rng):
    for _ in range(200):
        st = random_gaussian_state(rng)
        assert st.is_physical()
        assert min(occupations(st)) >= -1e-12
        assert st.pairing_defect() < 1e-10


def test_non_symplectic_transform_rejected():
    with pytest.raises(NonSymplecticMatrix):
        apply_symplectic(vacuum(), 2 * np.eye(4), LOCAL)


def test_asymmetric_sigma_rejected():
    bad = thermal_sigma(1.0, 1.0)
    bad[0, 2] = 0.3
    with pytest.raises(ValueError):
        GaussianState(LOCAL, None, np.zeros(4), bad)


def test_basis_round_trip(rng):
    for _ in range(50):
        p = random_params(rng)
        pt = solve_point(p)
        st = random_gaussian_state(rng, LOCAL, p)
        back = to_local(to_polariton(st, pt), pt)
        assert np.allclose(back.sigma, st.sigma, atol=1e-10)


def test_polariton_state_of_another_point_rejected():
    a = solve_point(LAB.with_(lam=0.3 * LAB.lambda_cr))
    b = solve_point(LAB.with_(lam=0.4 * LAB.lambda_cr))
    st = polariton_thermal_state(a, 1e-3, 1e-3)
    with pytest.raises(BasisMismatch):
        to_polariton(st, b)


def test_entangled_state_is_pure_with_thermal_marginals():
    for rel in np.linspace(0.05, 0.95, 7):
        pt = solve_point(LAB.with_(lam=rel * LAB.lambda_cr))
        for beta in (1e-6, 1e-5, 1e-4):
            st = entangled_polariton_state(pt, beta)
            assert symplectic_eigenvalues(st) == pytest.approx((0.5, 0.5), abs=1e-10)
            q = math.exp(-beta * (pt.eps_plus + pt.eps_minus) / 4)
            nbar = q * q / (1 - q * q)
            n_d, n_c = occupations(st)
            assert n_d == pytest.approx(nbar, rel=1e-12)
            assert n_c == pytest.approx(nbar, rel=1e-12)


def test_tmsv_weight_guard():
    with pytest.raises(NonNormalizable):
        two_mode_squeezed_sigma(1.0)
    pt = solve_point(LAB.with_(lam=0.3 * LAB.lambda_cr))
    with pytest.raises(NonNormalizable):
        entangled_polariton_state(pt, -1.0)


def test_local_thermal_state_is_correlated_in_polaritons():
    for rel in np.linspace(0.01, 0.99, 100):
        p = LAB.with_(lam=rel * LAB.lambda_cr)
        st = to_polariton(local_thermal_state(p, 0.1, 0.01), solve_point(p))
        off = st.sigma[np.ix_([0, 1], [2, 3])]
        assert np.max(np.abs(off)) > 0


def test_local_thermal_occupations():
    p = LAB.with_(lam=0.5 * LAB.lambda_cr)
    st = local_thermal_state(p, 0.1, 0.01)
    n_a, n_b = occupations(st)
    assert n_a == pytest.approx(bose_occupation(p.omega, 0.1))
    assert n_b == pytest.approx(bose_occupation(p.omega0, 0.01))
    assert st.basis == LOCAL
    assert to_polariton(st, solve_point(p)).basis == POLARITON

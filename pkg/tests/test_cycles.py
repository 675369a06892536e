import numpy as np
import pytest
from conftest import (
    QUAD_OMEGA,
    global_thermal_state,
    ordered_thermal_state,
    random_gaussian_state,
    random_params,
    random_protocol,
)
from scipy.linalg import expm

from dicke_work.cycles import (
    CycleProtocol,
    constant_shift,
    run_cycle,
    stroke_map,
)
from dicke_work.errors import NegativeDwell, NonNormalPhase, OpenProtocol
from dicke_work.gaussian import (
    LOCAL,
    POLARITON,
    GaussianState,
    local_thermal_state,
    occupations,
    quadrature_covariance,
    symplectic_eigenvalues,
    thermal_sigma,
    to_local,
    vacuum,
)
from dicke_work.model import DickeParams, effective_quadratic, fixed_points, solve_point
from dicke_work.thermo import ergotropy, excitation_energy


def _hessian(p):
    eq = effective_quadratic(p, fixed_points(p))
    h = np.array([
        [p.omega, 0, 2 * eq.lambda_tilde, 0],
        [0, p.omega, 0, 0],
        [2 * eq.lambda_tilde, 0, eq.omega0_tilde - 4 * eq.mu, 0],
        [0, 0, 0, eq.omega0_tilde],
    ])
    return h, eq.e0 - 0.5 * (p.omega + eq.omega0_tilde)


def quadrature_oracle(protocol, s0):
    """Work by evolving the local quadrature covariance with exp(Omega h tau)."""
    s = s0.copy()
    works = []
    for i, (p, tau) in enumerate(protocol.points[:-1]):
        h, c = _hessian(p)
        if tau > 0:
            f = expm(QUAD_OMEGA @ h * tau)
            s = f @ s @ f.T
        h2, c2 = _hessian(protocol.points[i + 1][0])
        works.append(0.5 * np.trace((h2 - h) @ s) + (c2 - c))
    return works


def _scale(res):
    return max(abs(res.total), sum(abs(w) for w in res.stroke_works))


def test_matches_quadrature_oracle(rng):
    for _ in range(200):
        prot = random_protocol(rng)
        st = random_gaussian_state(rng, LOCAL, prot.params[0])
        res = run_cycle(prot, st)
        ref = quadrature_oracle(prot, quadrature_covariance(st).s)
        for w, r in zip(res.stroke_works, ref):
            assert w == pytest.approx(r, rel=1e-8, abs=1e-9 * _scale(res))


def test_method_equivalence(rng):
    for _ in range(300):
        prot = random_protocol(rng)
        st = random_gaussian_state(rng, LOCAL, prot.params[0])
        a = run_cycle(prot, st, "accumulated")
        b = run_cycle(prot, st, "stepwise")
        assert abs(a.total - b.total) <= 1e-9 * _scale(a)


def test_thomson_passive_inputs(rng):
    for i in range(300):
        prot = random_protocol(rng)
        pt = solve_point(prot.params[0])
        if i % 2:
            st = global_thermal_state(pt, rng.uniform(0.2, 5.0))
        else:
            st = ordered_thermal_state(rng, pt)
        res = run_cycle(prot, st)
        assert res.total >= -1e-10 * pt.eps_minus


def test_zero_dwell_loops_do_nothing(rng):
    for _ in range(100):
        prot = random_protocol(rng, zero_dwell=True)
        pt = solve_point(prot.params[0])
        st = random_gaussian_state(rng, LOCAL, prot.params[0])
        assert abs(run_cycle(prot, st).total) < 1e-10 * pt.eps_minus


def test_ergotropy_bound(rng):
    for _ in range(200):
        prot = random_protocol(rng)
        pt = solve_point(prot.params[0])
        st = random_gaussian_state(rng, LOCAL, prot.params[0])
        res = run_cycle(prot, st)
        assert res.total >= -ergotropy(st, pt) - 1e-9 * max(_scale(res), excitation_energy(st, pt))


def test_unitarity_and_bookkeeping(rng):
    for _ in range(100):
        prot = random_protocol(rng)
        pt = solve_point(prot.params[0])
        st = random_gaussian_state(rng, LOCAL, prot.params[0])
        res = run_cycle(prot, st)
        assert symplectic_eigenvalues(res.final_state) == pytest.approx(symplectic_eigenvalues(st), rel=1e-10)
        e_final = excitation_energy(res.final_state, pt)
        assert res.total == pytest.approx(e_final - excitation_energy(st, pt), rel=1e-9,
                                          abs=1e-9 * e_final)
        assert res.total == sum(res.stroke_works) or res.total == np.cumsum(res.stroke_works)[-1]


def test_total_is_sum_in_protocol_order(rng):
    prot = random_protocol(rng, n_strokes=6)
    res = run_cycle(prot, random_gaussian_state(rng, LOCAL, prot.params[0]))
    acc = 0.0
    for w in res.stroke_works:
        acc += w
    assert res.total == acc


def test_omega_quench_without_coupling_is_trivial():
    # with no coupling the polaritons are the bare modes for every omega, so the
    # stroke map is the identity and vacuum work vanishes
    a = DickeParams(1.0, 1.0, 0.0)
    b = a.with_(omega=2.0)
    sm = stroke_map(solve_point(a), solve_point(b))
    assert np.allclose(sm.q, np.eye(4), atol=1e-15)
    res = run_cycle(CycleProtocol.two_stroke(a, b, 0.7), vacuum(LOCAL, a))
    assert res.stroke_works == [0.0, 0.0]


def test_uncoupled_thermal_work_is_frequency_shift():
    a = DickeParams(1.0, 1.0, 0.0)
    b = a.with_(omega=2.5)
    st = GaussianState(LOCAL, a, np.zeros(4), thermal_sigma(0.8, 0.3))
    res = run_cycle(CycleProtocol.two_stroke(a, b, 1.3), st)
    assert res.stroke_works[0] == pytest.approx(1.5 * 0.8)
    assert res.stroke_works[1] == pytest.approx(-1.5 * 0.8)


def test_constant_shift_vanishes_for_equal_points():
    p = DickeParams(1.0, 2.0, 0.3)
    assert constant_shift(solve_point(p), solve_point(p)) == 0.0


def test_single_quench_from_ground_costs_at_least_the_gap(rng):
    # after the quench the energy cannot lie below the new ground energy
    for _ in range(50):
        a, b = random_params(rng), random_params(rng)
        pa, pb = solve_point(a), solve_point(b)
        res = run_cycle(CycleProtocol.two_stroke(a, b, 0.0), vacuum(POLARITON, a))
        gap = pb.ground_energy - pa.ground_energy
        assert res.stroke_works[0] >= gap - 1e-9 * abs(gap)
        assert abs(res.total) < 1e-10 * max(1.0, abs(res.stroke_works[0]))


def test_protocol_validation():
    a = DickeParams(1.0, 2.0, 0.2)
    b = a.with_(omega=3.0)
    with pytest.raises(NegativeDwell):
        CycleProtocol(((a, -1.0), (b, 0.0), (a, 0.0)))
    with pytest.raises(OpenProtocol):
        CycleProtocol(((a, 0.0), (b, 0.0)))
    with pytest.raises(NonNormalPhase):
        CycleProtocol(((a, 0.0), (a.with_(lam=2 * a.lambda_cr), 0.0), (a, 0.0)))
    with pytest.raises(ValueError):
        run_cycle(CycleProtocol.two_stroke(a, b, 1.0), vacuum(LOCAL, a), "euler")


def test_final_state_occupations_consistent(rng):
    prot = random_protocol(rng)
    st = random_gaussian_state(rng, LOCAL, prot.params[0])
    res = run_cycle(prot, st)
    local_final = to_local(res.final_state, solve_point(prot.params[0]))
    assert min(occupations(local_final)) >= -1e-12


def test_methods_agree_at_lab_frequencies():
    base = DickeParams.from_hz(8.3e3, 15e6)
    for rel in (0.1, 0.5, 0.95):
        a = base.with_(lam=rel * base.lambda_cr)
        prot = CycleProtocol.two_stroke(a, a.with_(omega=2 * a.omega), 0.003)
        st = local_thermal_state(a, 0.1, 0.01)
        x, y = run_cycle(prot, st, "accumulated"), run_cycle(prot, st, "stepwise")
        assert abs(x.total - y.total) <= 1e-9 * _scale(x)

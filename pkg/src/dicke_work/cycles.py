"""Sudden-quench cycles: stroke maps, dwell phases, accumulated frames and work.

A protocol is a list of ``(params, dwell)`` points.  The state is prepared at
the first point, then for every point in turn it dwells there for ``dwell``
seconds and is suddenly quenched to the next point.  The dwell of the final
point is never applied: the cycle closes with an instantaneous re-quench.

Two independent evaluations of the average work are provided.  The
``accumulated`` method keeps the initial covariance fixed and pushes the
polariton operators forward through ``R = Q D ... Q`` and ``S``; the
``stepwise`` method evolves the covariance explicitly.  Negative work means
energy was extracted from the medium.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BasisMismatch,
    ImaginarySpectrum,
    NegativeDwell,
    NonNormalPhase,
    OpenProtocol,
)
from .gaussian import LAMBDA, POLARITON, GaussianState, occupations, to_polariton
from .model import DickeParams, DickePoint, solve_point

METHODS = ("accumulated", "stepwise")


@dataclass(frozen=True)
class CycleProtocol:
    points: tuple[tuple[DickeParams, float], ...]
    closed: bool = True

    def __post_init__(self):
        pts = tuple((p, float(tau)) for p, tau in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ValueError("a protocol needs at least two points")
        for p, tau in pts:
            if not tau >= 0.0:
                raise NegativeDwell(f"dwell time must be >= 0 s, got {tau}")
            if not p.is_normal:
                raise NonNormalPhase(
                    f"lambda={p.lam:.6g} is not below lambda_cr={p.lambda_cr:.6g}; "
                    "work protocols are restricted to the normal phase")
        if self.closed and pts[0][0] != pts[-1][0]:
            raise OpenProtocol("closed protocol must end at its starting parameters")

    @classmethod
    def two_stroke(cls, a: DickeParams, b: DickeParams, tau_b: float,
                   tau_a: float = 0.0) -> "CycleProtocol":
        """Quench A -> B, dwell ``tau_b`` at B, quench back to A."""
        return cls(((a, tau_a), (b, tau_b), (a, 0.0)))

    @property
    def params(self) -> list[DickeParams]:
        return [p for p, _ in self.points]

    @property
    def dwells(self) -> list[float]:
        return [tau for _, tau in self.points]


@dataclass(frozen=True, eq=False)
class StrokeMap:
    q: np.ndarray
    v: np.ndarray


@dataclass(frozen=True, eq=False)
class PropagatedFrame:
    r: np.ndarray
    s: np.ndarray


@dataclass(eq=False)
class WorkBreakdown:
    stroke_works: list[float]
    total: float
    initial_excitation_energy: float
    final_state: GaussianState
    method: str = "accumulated"
    points: list[DickePoint] = field(default_factory=list, repr=False)


def _require_basis(point: DickePoint) -> None:
    if point.diag.soft:
        raise ImaginarySpectrum("zero-energy polariton: no normal-mode basis at this point")


def stroke_map(src: DickePoint, dst: DickePoint) -> StrokeMap:
    """Polariton operators of ``dst`` in terms of those of ``src``: ``x_dst = q x_src + v``."""
    _require_basis(src)
    _require_basis(dst)
    if src.params == dst.params and src.mean_fields == dst.mean_fields:
        return StrokeMap(np.eye(4), np.zeros(4))
    q = dst.diag.m_inv @ src.diag.m
    v = dst.diag.m_inv @ (src.local_displacement() - dst.local_displacement())
    return StrokeMap(q, v)


def dwell_phases(point: DickePoint, tau: float) -> np.ndarray:
    if not tau >= 0.0:
        raise NegativeDwell(f"dwell time must be >= 0 s, got {tau}")
    if tau == 0.0:
        return np.eye(4, dtype=complex)
    em = np.exp(-1j * point.eps_minus * tau)
    ep = np.exp(-1j * point.eps_plus * tau)
    return np.diag([em, em.conjugate(), ep, ep.conjugate()])


def initial_frame() -> PropagatedFrame:
    return PropagatedFrame(np.eye(4, dtype=complex), np.zeros(4, dtype=complex))


def propagate_frame(frame: PropagatedFrame, dwell: np.ndarray, nxt: StrokeMap) -> PropagatedFrame:
    qd = nxt.q @ dwell
    return PropagatedFrame(qd @ frame.r, qd @ frame.s + nxt.v)


def frame_occupations(frame: PropagatedFrame, initial: GaussianState) -> tuple[float, float]:
    """Polariton numbers of the current point evaluated on the initial state."""
    r = frame.r
    second = initial.sigma + LAMBDA
    mean = r @ initial.disp + frame.s
    n1 = r[1] @ second @ r[0] + mean[1] * mean[0]
    n2 = r[3] @ second @ r[2] + mean[3] * mean[2]
    return float(n1.real), float(n2.real)


def constant_shift(src: DickePoint, dst: DickePoint) -> float:
    """Difference of the c-number parts of the two diagonal Hamiltonians."""
    if src.params == dst.params:
        return 0.0
    ps, pd = src.params, dst.params
    return ((dst.quad.e0 - src.quad.e0)
            + 0.5 * ((dst.eps_minus - src.eps_minus) + (dst.eps_plus - src.eps_plus)
                     - (pd.omega - ps.omega) - (dst.quad.omega0_tilde - src.quad.omega0_tilde)))


def _mode_energy(point: DickePoint, n: tuple[float, float]) -> float:
    return point.eps_minus * n[0] + point.eps_plus * n[1]


def stroke_work(frame_before: PropagatedFrame, frame_after: PropagatedFrame,
                src: DickePoint, dst: DickePoint, initial: GaussianState) -> float:
    """Average work of the quench ``src -> dst``.

    ``frame_before`` maps the initial polaritons to those of ``src`` (before
    any dwell there); ``frame_after`` maps them to those of ``dst``.
    """
    if initial.basis != POLARITON:
        raise BasisMismatch("initial state must be given in the polariton basis of the first point")
    e_src = _mode_energy(src, frame_occupations(frame_before, initial))
    e_dst = _mode_energy(dst, frame_occupations(frame_after, initial))
    return (e_dst - e_src) + constant_shift(src, dst)


def _solve(protocol: CycleProtocol) -> list[DickePoint]:
    points = [solve_point(p) for p in protocol.params]
    for pt in points:
        _require_basis(pt)
    return points


def _accumulated(points, dwells, initial):
    frame = initial_frame()
    works = []
    for i in range(len(points) - 1):
        src, dst = points[i], points[i + 1]
        nxt = propagate_frame(frame, dwell_phases(src, dwells[i]), stroke_map(src, dst))
        works.append(stroke_work(frame, nxt, src, dst, initial))
        frame = nxt
    final = GaussianState(POLARITON, points[-1].params,
                          frame.r @ initial.disp + frame.s,
                          frame.r @ initial.sigma @ frame.r.T)
    return works, final


def _stepwise(points, dwells, initial):
    state = initial
    works = []
    for i in range(len(points) - 1):
        src, dst = points[i], points[i + 1]
        d = dwell_phases(src, dwells[i])
        state = GaussianState(POLARITON, src.params, d @ state.disp, d @ state.sigma @ d.T)
        before = _mode_energy(src, occupations(state))
        sm = stroke_map(src, dst)
        state = GaussianState(POLARITON, dst.params, sm.q @ state.disp + sm.v,
                              sm.q @ state.sigma @ sm.q.T)
        after = _mode_energy(dst, occupations(state))
        works.append((after - before) + constant_shift(src, dst))
    return works, state


def run_cycle(protocol: CycleProtocol, initial: GaussianState,
              method: str = "accumulated") -> WorkBreakdown:
    """Average work of every quench of a closed protocol.

    ``initial`` may be given in the local basis or in the polariton basis of
    the first point.  Stroke works are summed in protocol order.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if not protocol.closed:
        raise OpenProtocol("work totals are only defined for closed protocols")
    points = _solve(protocol)
    start = to_polariton(initial, points[0])
    runner = _accumulated if method == "accumulated" else _stepwise
    works, final = runner(points, protocol.dwells, start)
    total = _ordered_sum(works)
    return WorkBreakdown(
        stroke_works=works,
        total=total,
        initial_excitation_energy=_mode_energy(points[0], occupations(start)),
        final_state=final,
        method=method,
        points=points,
    )


def _ordered_sum(values: Sequence[float]) -> float:
    total = 0.0
    for v in values:
        total += v
    return total

"""Parameter sweeps over the initial coupling and deterministic CSV output."""

from __future__ import annotations

import dataclasses
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cycles import CycleProtocol, run_cycle
from .entanglement import log_negativity
from .errors import ConfigError, ImaginarySpectrum
from .gaussian import (
    beta_from_temperature,
    entangled_polariton_state,
    local_thermal_state,
    polariton_thermal_state,
    quadrature_covariance,
    to_local,
    to_polariton,
)
from .model import DickeParams, solve_point
from .thermo import energy_report, ratios

log = logging.getLogger(__name__)

HEADER = ("lambda_rel", "work_total", "energy_initial", "ergotropy", "w_over_e",
          "w_over_ergo", "log_neg_ab", "log_neg_dc", "status")
CYCLES = ("ab", "cd", "custom")
STATES = ("local_thermal", "polariton_thermal", "entangled_dc")
METHOD_CHOICES = ("accumulated", "stepwise", "both")

# (delta_omega_rel, delta_lambda_rel, lambda_rel_min, lambda_rel_max)
CYCLE_DEFAULTS = {
    "ab": (1.0, 0.0, 0.02, 0.98),
    "cd": (0.1, -0.1, 0.1, 0.88),
}


@dataclass
class SweepConfig:
    cycle_kind: str = "ab"
    omega_hz: float = 15e6
    omega0_hz: float = 8.3e3
    n_atoms: float = 1e5
    delta_omega_rel: float | None = None
    delta_lambda_rel: float | None = None
    omega_b_hz: float | None = None
    tau_a_s: float = 0.0
    tau_b_s: float = 0.003
    state_kind: str = "local_thermal"
    t_a_k: float = 0.1
    t_b_k: float = 0.01
    t_d_k: float = 0.01
    t_c_k: float = 0.01
    beta_eff: float | None = None
    t_ent_k: float = 1e-4
    lambda_rel_min: float | None = None
    lambda_rel_max: float | None = None
    points: int = 400
    log_base: str = "e"
    method: str = "accumulated"
    workers: int = 1
    out_path: str | None = None

    def resolved(self) -> "SweepConfig":
        """Copy with every cycle-dependent default filled in."""
        cfg = dataclasses.replace(self)
        if cfg.cycle_kind not in CYCLES:
            raise ConfigError(f"cycle_kind must be one of {CYCLES}, got {cfg.cycle_kind!r}")
        d_w, d_l, lo, hi = CYCLE_DEFAULTS.get(cfg.cycle_kind, CYCLE_DEFAULTS["ab"])
        if cfg.cycle_kind == "custom" and (cfg.delta_omega_rel is None or cfg.delta_lambda_rel is None):
            raise ConfigError("custom cycles need delta_omega_rel and delta_lambda_rel")
        if cfg.delta_omega_rel is None:
            cfg.delta_omega_rel = d_w
        if cfg.delta_lambda_rel is None:
            cfg.delta_lambda_rel = d_l
        if cfg.lambda_rel_min is None:
            cfg.lambda_rel_min = lo
        if cfg.lambda_rel_max is None:
            cfg.lambda_rel_max = hi
        if cfg.beta_eff is None and cfg.state_kind == "entangled_dc":
            cfg.beta_eff = beta_from_temperature(cfg.t_ent_k)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.state_kind not in STATES:
            raise ConfigError(f"state_kind must be one of {STATES}, got {self.state_kind!r}")
        if self.log_base not in ("e", "2"):
            raise ConfigError(f"log_base must be 'e' or '2', got {self.log_base!r}")
        if self.method not in METHOD_CHOICES:
            raise ConfigError(f"method must be one of {METHOD_CHOICES}, got {self.method!r}")
        if self.points < 2:
            raise ConfigError(f"points must be >= 2, got {self.points}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        for name in ("omega_hz", "omega0_hz"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("tau_a_s", "tau_b_s", "t_a_k", "t_b_k", "t_d_k", "t_c_k"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.beta_eff is not None and not self.beta_eff > 0:
            raise ConfigError("beta_eff must be positive")
        if not 0 <= self.lambda_rel_min < self.lambda_rel_max:
            raise ConfigError("need 0 <= lambda_rel_min < lambda_rel_max")
        bad = [r for r in self.grid() if not _cycle_is_normal(self, r)]
        if bad:
            listed = ", ".join(f"{r:.6g}" for r in bad[:5])
            more = f" (+{len(bad) - 5} more)" if len(bad) > 5 else ""
            raise ConfigError(
                f"{len(bad)} grid point(s) leave the normal phase or make lambda negative: "
                f"lambda_rel = {listed}{more}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.lambda_rel_min, self.lambda_rel_max, self.points)

    def base_params(self) -> DickeParams:
        return DickeParams.from_hz(self.omega0_hz, self.omega_hz, 0.0, self.n_atoms)

    def cycle_points(self, lambda_rel: float) -> tuple[DickeParams, DickeParams]:
        base = self.base_params()
        lam_cr = base.lambda_cr
        a = base.with_(lam=lambda_rel * lam_cr)
        if self.omega_b_hz is not None:
            omega_b = 2.0 * math.pi * self.omega_b_hz
        else:
            omega_b = base.omega * (1.0 + self.delta_omega_rel)
        lam_b = a.lam + self.delta_lambda_rel * lam_cr
        if lam_b < 0 or omega_b <= 0:
            raise ConfigError(f"quenched point is unphysical at lambda_rel={lambda_rel:.6g}")
        return a, base.with_(omega=omega_b, lam=lam_b)

    def echo(self) -> list[str]:
        """Comment lines describing the run; execution-only settings are left out
        so that output does not depend on them."""
        skip = {"workers", "out_path"}
        return [f"# {f.name} = {getattr(self, f.name)!r}" for f in fields(self) if f.name not in skip]


def _cycle_is_normal(cfg: SweepConfig, lambda_rel: float) -> bool:
    try:
        a, b = cfg.cycle_points(lambda_rel)
    except ConfigError:
        return False
    return a.is_normal and b.is_normal


def initial_state(cfg: SweepConfig, a: DickeParams):
    if cfg.state_kind == "local_thermal":
        return local_thermal_state(a, cfg.t_a_k, cfg.t_b_k)
    pt = solve_point(a)
    if cfg.state_kind == "polariton_thermal":
        return polariton_thermal_state(pt, cfg.t_d_k, cfg.t_c_k)
    return entangled_polariton_state(pt, cfg.beta_eff)


def _nan_row(lambda_rel: float, status: str) -> tuple:
    return (lambda_rel,) + (math.nan,) * 7 + (status,)


def compute_row(cfg: SweepConfig, lambda_rel: float) -> tuple:
    """One CSV row for the two-stroke cycle starting at ``lambda_rel``."""
    a, b = cfg.cycle_points(lambda_rel)
    try:
        pt = solve_point(a)
        state = initial_state(cfg, a)
        protocol = CycleProtocol.two_stroke(a, b, cfg.tau_b_s, cfg.tau_a_s)
        method = "accumulated" if cfg.method == "both" else cfg.method
        work = run_cycle(protocol, state, method)
        if cfg.method == "both":
            check = run_cycle(protocol, state, "stepwise")
            scale = max(abs(work.total), sum(abs(w) for w in work.stroke_works), 1e-300)
            if abs(check.total - work.total) > 1e-9 * scale:
                log.warning("methods disagree at lambda_rel=%g: %r vs %r",
                            lambda_rel, work.total, check.total)
        energy = energy_report(state, pt)
    except ImaginarySpectrum:
        return _nan_row(lambda_rel, "imaginary_spectrum")
    w_e, w_erg = ratios(work, energy)
    base = math.e if cfg.log_base == "e" else 2.0
    en_ab = log_negativity(quadrature_covariance(to_local(state, pt)), base).e_n
    en_dc = log_negativity(quadrature_covariance(to_polariton(state, pt)), base).e_n
    status = "zero_denominator" if math.isnan(w_e) or math.isnan(w_erg) else "ok"
    return (lambda_rel, work.total, energy.excitation_energy, energy.ergotropy,
            w_e, w_erg, en_ab, en_dc, status)


def _row_task(args):
    cfg, lambda_rel = args
    return compute_row(cfg, lambda_rel)


def run_sweep(cfg: SweepConfig) -> list[tuple]:
    cfg = cfg.resolved()
    tasks = [(cfg, float(r)) for r in cfg.grid()]
    if cfg.workers == 1:
        return [_row_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        chunk = max(1, len(tasks) // (4 * cfg.workers))
        return list(pool.map(_row_task, tasks, chunksize=chunk))


def format_value(value) -> str:
    if isinstance(value, str):
        return value
    return "%.11e" % value


def render_csv(rows: Iterable[Sequence], comments: Sequence[str] = ()) -> str:
    lines = list(comments)
    lines.append(",".join(HEADER))
    for row in rows:
        if len(row) != len(HEADER):
            raise ValueError(f"row has {len(row)} fields, expected {len(HEADER)}")
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def emit_csv(rows: Iterable[Sequence], path, comments: Sequence[str] = ()) -> None:
    """Write ``rows`` under the fixed header; LF line endings, 12 significant digits."""
    Path(path).write_text(render_csv(rows, comments), encoding="utf-8", newline="\n")

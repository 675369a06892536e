"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 runtime physics error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import math
import sys
import typing
from pathlib import Path

import numpy as np

from .errors import ConfigError, DickeError
from .sweep import (
    CYCLES,
    METHOD_CHOICES,
    STATES,
    SweepConfig,
    emit_csv,
    render_csv,
    run_sweep,
)

log = logging.getLogger("dicke_work")

_FLAG_TO_FIELD = {
    "points": "points",
    "cycle": "cycle_kind",
    "state": "state_kind",
    "ta_k": "t_a_k",
    "tb_k": "t_b_k",
    "beta_eff": "beta_eff",
    "log_base": "log_base",
    "workers": "workers",
    "method": "method",
    "out": "out_path",
    "tau_b": "tau_b_s",
    "lambda_min": "lambda_rel_min",
    "lambda_max": "lambda_rel_max",
    "omega_hz": "omega_hz",
    "omega0_hz": "omega0_hz",
}


def _field_caster(name: str):
    hints = typing.get_type_hints(SweepConfig)
    hint = hints[name]
    args = [a for a in typing.get_args(hint) if a is not type(None)]
    base = args[0] if args else hint
    optional = type(None) in typing.get_args(hint)

    def cast(text: str):
        if optional and text.strip().lower() in ("none", ""):
            return None
        if base is int:
            return int(text)
        if base is float:
            return float(text)
        return text.strip().strip("'\"")

    return cast


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    known = {f.name for f in dataclasses.fields(SweepConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _field_caster(key)(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from None
    return values


def load_config(path: str | None, overrides: dict) -> SweepConfig:
    values = {}
    if path:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        values.update(parse_config_text(text, path))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SweepConfig(**values).resolved()


def _overrides(args: argparse.Namespace) -> dict:
    return {field: getattr(args, flag, None) for flag, field in _FLAG_TO_FIELD.items()}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="key = value configuration file")
    p.add_argument("--cycle", choices=CYCLES)
    p.add_argument("--state", choices=STATES)
    p.add_argument("--ta-k", type=float, dest="ta_k", metavar="X")
    p.add_argument("--tb-k", type=float, dest="tb_k", metavar="X")
    p.add_argument("--beta-eff", type=float, dest="beta_eff", metavar="X",
                   help="inverse energy of the entangled state, in s (hbar = 1)")
    p.add_argument("--log-base", choices=("e", "2"), dest="log_base")
    p.add_argument("--method", choices=METHOD_CHOICES)
    p.add_argument("--tau-b", type=float, dest="tau_b", metavar="S")
    p.add_argument("--omega-hz", type=float, dest="omega_hz")
    p.add_argument("--omega0-hz", type=float, dest="omega0_hz")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dicke-work", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="sweep the initial coupling and write CSV")
    _add_common(sweep)
    sweep.add_argument("--out", metavar="PATH")
    sweep.add_argument("--points", type=int, metavar="N")
    sweep.add_argument("--workers", type=int, metavar="N")
    sweep.add_argument("--lambda-min", type=float, dest="lambda_min")
    sweep.add_argument("--lambda-max", type=float, dest="lambda_max")

    for name, text in (("cycle", "run one cycle and print the work breakdown"),
                       ("negativity", "logarithmic negativity of the initial state"),
                       ("diag", "polariton spectrum and symplectic matrix")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        p.add_argument("--lambda-rel", type=float, dest="lambda_rel", default=0.5,
                       help="lambda / lambda_cr of the initial point (default 0.5)")

    oracle = sub.add_parser("oracle", help="validate against the truncated Fock-space oracle")
    oracle.add_argument("--cutoff", type=int, default=60)
    oracle.add_argument("--lambda-rel", type=float, dest="lambda_rel", default=0.5)
    oracle.add_argument("--occupation", type=float, default=2.0,
                        help="thermal occupation of the atomic mode (default 2)")
    return parser


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    rows = run_sweep(cfg)
    out = cfg.out_path or "-"
    if out == "-":
        sys.stdout.write(render_csv(rows, cfg.echo()))
    else:
        emit_csv(rows, out, cfg.echo())
        log.info("wrote %d rows to %s", len(rows), out)
    return 0


def _single_point(args):
    from .model import solve_point

    cfg = load_config(args.config, _overrides(args))
    a, b = cfg.cycle_points(args.lambda_rel)
    return cfg, a, b, solve_point(a)


def _cmd_diag(args) -> int:
    cfg, a, _, pt = _single_point(args)
    d = pt.diag
    print(f"lambda/lambda_cr = {args.lambda_rel:.6g}  (lambda_cr = {a.lambda_cr:.12e} rad/s)")
    print(f"eps_minus = {d.eps_minus:.12e} rad/s")
    print(f"eps_plus  = {d.eps_plus:.12e} rad/s")
    print(f"gamma_b   = {d.gamma_b:.12e} rad")
    print(f"E0        = {pt.quad.e0:.12e} rad/s")
    if d.m is not None:
        print("M =")
        print(np.array2string(d.m, precision=12, max_line_width=120))
    return 0


def _cmd_cycle(args) -> int:
    from .cycles import CycleProtocol, run_cycle
    from .sweep import initial_state
    from .thermo import energy_report, ratios

    cfg, a, b, pt = _single_point(args)
    state = initial_state(cfg, a)
    protocol = CycleProtocol.two_stroke(a, b, cfg.tau_b_s, cfg.tau_a_s)
    methods = ("accumulated", "stepwise") if cfg.method == "both" else (cfg.method,)
    for method in methods:
        work = run_cycle(protocol, state, method)
        print(f"[{method}]")
        for i, w in enumerate(work.stroke_works):
            print(f"  stroke {i}: {w:.12e}")
        print(f"  total: {work.total:.12e}")
    energy = energy_report(state, pt)
    w_e, w_erg = ratios(work, energy)
    print(f"excitation_energy = {energy.excitation_energy:.12e}")
    print(f"ergotropy         = {energy.ergotropy:.12e}")
    print(f"w_over_e          = {w_e:.12e}")
    print(f"w_over_ergo       = {w_erg:.12e}")
    return 0


def _cmd_negativity(args) -> int:
    from .entanglement import log_negativity
    from .gaussian import quadrature_covariance, to_local, to_polariton
    from .sweep import initial_state

    cfg, a, _, pt = _single_point(args)
    state = initial_state(cfg, a)
    base = math.e if cfg.log_base == "e" else 2.0
    for label, view in (("ab", to_local(state, pt)), ("dc", to_polariton(state, pt))):
        rep = log_negativity(quadrature_covariance(view), base)
        print(f"{label}: Sigma = {rep.sigma_tilde:.12e}  nu_minus = {rep.nu_minus:.12e}  "
              f"E_N = {rep.e_n:.12e}")
    return 0


def _cmd_oracle(args) -> int:
    from .oracle import FockConfig, compare_with_gaussian

    report = compare_with_gaussian(args.lambda_rel, FockConfig(args.cutoff), args.occupation)
    for key, value in report.items():
        print(f"{key:>24s} = {value:.12e}")
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "diag": _cmd_diag,
    "cycle": _cmd_cycle,
    "negativity": _cmd_negativity,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DickeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

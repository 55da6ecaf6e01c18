"""Command-line front end.

Subcommands: `entropy` (marginal and collective entropies), `bounds`
(every lower bound next to the measured entropy), `sweep` (tables of
entropy and bounds against a swept parameter), `minimize` (search for the
minimal-entropy state) and `verify` (run the self-check suites).

Output is CSV or JSON with fixed, documented field order; identical
configuration and seed produce byte-identical output.  Exit codes:
0 success, 1 failed verification, 2 configuration error, 3 numerical
failure, 4 optimizer non-convergence.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .apparatus import MeasurementSetup, NoiseTerms, noise_terms
from .bounds import (BoundParams, minimal_variance, optimal_bound, report,
                     single_param_bound, wehrl_constant)
from .entropy import marginal_entropies
from .exceptions import NonConvergenceError, PointerEntropyError
from .minimizer import (OptimizerConfig, fidelity_with_squeezed,
                        find_minimal_entropy_state)
from .selfcheck import SUITES, run_suites
from .states import FockSuperposition, Grid, SqueezedVacuum

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NO_CONVERGENCE = 4

_SWEEP_PARAMS = ("product", "sigma2", "lambda")


class CliConfigError(Exception):
    """Invalid command line or run configuration."""


@dataclass
class RunConfig:
    command: str
    state_spec: tuple | None = None
    noise: NoiseTerms | None = None
    sweep: tuple | None = None          # (param, lo, hi, count)
    lambda_value: float = 0.5
    fmt: str = "csv"
    out: str | None = None
    seed: int = 0
    grid: Grid | None = None
    suites: list | None = None
    n_max: int = 12
    restarts: int = 8
    max_iters: int = 5000


def _fmt_float(value: float) -> str:
    return format(float(value), ".12g")


def _round12(value: float) -> float:
    return float(_fmt_float(value))


def _parse_floats(text: str, count: int | None, what: str) -> list[float]:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise CliConfigError(f"cannot parse {what} {text!r}: {exc}") from None
    if count is not None and len(parts) != count:
        raise CliConfigError(f"{what} needs {count} comma-separated values, "
                             f"got {len(parts)} in {text!r}")
    return parts


def parse_state_spec(text: str) -> tuple:
    """Parse 'squeezed:<sigma2>', 'squeezed:min' or 'fock:<c0,c1,...>'."""
    kind, sep, payload = text.partition(":")
    if not sep or not payload:
        raise CliConfigError(f"state spec {text!r} needs the form kind:params")
    if kind == "squeezed":
        if payload == "min":
            return ("squeezed", "min")
        try:
            sigma2 = float(payload)
        except ValueError:
            raise CliConfigError(f"bad squeezed variance {payload!r}") from None
        return ("squeezed", sigma2)
    if kind == "fock":
        return ("fock", _parse_floats(payload, None, "fock coefficients"))
    raise CliConfigError(f"unknown state kind {kind!r} (use squeezed or fock)")


def parse_grid_spec(text: str) -> Grid:
    parts = text.split(":")
    if len(parts) != 3:
        raise CliConfigError(f"grid spec {text!r} needs the form min:max:count")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        return Grid(lo, hi, count)
    except (ValueError, PointerEntropyError) as exc:
        raise CliConfigError(f"bad grid spec {text!r}: {exc}") from None


def parse_sweep_spec(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 4:
        raise CliConfigError(f"sweep spec {text!r} needs the form param:min:max:count")
    param = parts[0]
    if param not in _SWEEP_PARAMS:
        raise CliConfigError(f"sweep parameter must be one of {_SWEEP_PARAMS}, "
                             f"got {param!r}")
    try:
        lo, hi, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise CliConfigError(f"bad sweep spec {text!r}: {exc}") from None
    if count < 2:
        raise CliConfigError(f"sweep needs at least 2 points, got {count}")
    if not lo < hi:
        raise CliConfigError(f"sweep needs min < max, got {lo} and {hi}")
    return (param, lo, hi, count)


def _resolve_noise(args) -> NoiseTerms | None:
    if args.noise is not None and args.setup is not None:
        raise CliConfigError("give either --noise or --setup, not both")
    try:
        if args.noise is not None:
            dx, dp = _parse_floats(args.noise, 2, "--noise")
            return NoiseTerms(dx, dp)
        if args.setup is not None:
            k1, k2, t, s1, s2 = _parse_floats(args.setup, 5, "--setup")
            return noise_terms(MeasurementSetup(k1, k2, t, s1, s2))
    except PointerEntropyError as exc:
        raise CliConfigError(str(exc)) from None
    return None


def build_config(args) -> RunConfig:
    config = RunConfig(command=args.command)
    config.noise = _resolve_noise(args)
    if getattr(args, "state", None) is not None:
        config.state_spec = parse_state_spec(args.state)
    if getattr(args, "grid", None) is not None:
        config.grid = parse_grid_spec(args.grid)
    if getattr(args, "sweep", None) is not None:
        config.sweep = parse_sweep_spec(args.sweep)
    if getattr(args, "lambda_value", None) is not None:
        if not (0.0 <= args.lambda_value <= 1.0):
            raise CliConfigError(f"--lambda must lie in [0, 1], got {args.lambda_value}")
        config.lambda_value = args.lambda_value
    config.fmt = getattr(args, "format", "csv")
    config.out = getattr(args, "out", None)
    config.seed = getattr(args, "seed", 0)
    if getattr(args, "suite", None):
        config.suites = list(args.suite)
    for name in ("n_max", "restarts", "max_iters"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    return config


def realize_state(spec: tuple, noise: NoiseTerms | None):
    kind, payload = spec
    if kind == "squeezed":
        if payload == "min":
            if noise is None:
                raise CliConfigError("squeezed:min needs noise terms")
            sigma2 = minimal_variance(noise)
        else:
            sigma2 = payload
        try:
            return SqueezedVacuum(sigma2), f"squeezed:{_fmt_float(sigma2)}"
        except PointerEntropyError as exc:
            raise CliConfigError(str(exc)) from None
    try:
        state = FockSuperposition(payload)
    except PointerEntropyError as exc:
        raise CliConfigError(str(exc)) from None
    label = "fock:" + ",".join(_fmt_float(c) for c in payload)
    return state, label


def render_rows(rows: list[dict], fmt: str, single: bool) -> str:
    """Fixed-order CSV or JSON rendering; floats carry 12 significant digits."""
    if fmt == "json":
        def convert(row):
            out = {}
            for key, value in row.items():
                if isinstance(value, bool) or isinstance(value, (str, int)):
                    out[key] = value
                elif isinstance(value, float):
                    out[key] = _round12(value)
                elif isinstance(value, (list, tuple)):
                    out[key] = [_round12(v) for v in value]
                else:
                    out[key] = value
            return out
        payload = convert(rows[0]) if single and len(rows) == 1 else [convert(r) for r in rows]
        return json.dumps(payload, indent=2) + "\n"

    def cell(value) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return _fmt_float(value)
        if isinstance(value, (list, tuple)):
            return ";".join(_fmt_float(v) for v in value)
        return str(value)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(rows[0].keys())
    for row in rows:
        writer.writerow(cell(v) for v in row.values())
    return buffer.getvalue()


def emit(text: str, out_path: str | None) -> None:
    sys.stdout.write(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CliConfigError(message)


def _bound_columns(noise: NoiseTerms, lam: float) -> dict:
    opt, opt_lam = optimal_bound(noise)
    omega = wehrl_constant()
    return {
        "delta_x": noise.delta_x,
        "delta_p": noise.delta_p,
        "noise_product": noise.product,
        "lambda": lam,
        "omega": omega,
        "noise_bound": single_param_bound(noise, 0.0),
        "single_param": single_param_bound(noise, lam),
        "optimal": opt,
        "optimal_lambda": opt_lam,
        "optimal_equals_omega": abs(opt - omega) <= 1e-12,
    }


def cmd_entropy(config: RunConfig) -> int:
    _require(config.state_spec is not None, "entropy needs --state")
    _require(config.noise is not None, "entropy needs --noise or --setup")
    state, label = realize_state(config.state_spec, config.noise)
    result = marginal_entropies(state, config.noise, config.grid)
    row = {
        "state": label,
        "delta_x": config.noise.delta_x,
        "delta_p": config.noise.delta_p,
        "noise_product": config.noise.product,
        "s_x": result.s_x,
        "s_p": result.s_p,
        "collective": result.collective,
    }
    emit(render_rows([row], config.fmt, single=True), config.out)
    return EXIT_OK


def cmd_bounds(config: RunConfig) -> int:
    _require(config.noise is not None, "bounds needs --noise or --setup")
    lam = config.lambda_value
    row = {}
    if config.state_spec is not None:
        state, label = realize_state(config.state_spec, config.noise)
        full = report(state, config.noise, BoundParams(lam, lam))
        row["state"] = label
    row.update(_bound_columns(config.noise, lam))
    if config.state_spec is not None:
        row.update({
            "system_bound": full.system_bound,
            "balanced_bound": full.balanced_bound,
            "lambda_family": full.lambda_family,
            "collective": full.collective,
        })
    emit(render_rows([row], config.fmt, single=True), config.out)
    return EXIT_OK


def _sweep_noise(config: RunConfig, product: float) -> NoiseTerms:
    # Keep the width ratio of the configured noise while moving the product.
    ratio = config.noise.delta_x / config.noise.delta_p if config.noise else 1.0
    return NoiseTerms(math.sqrt(product * ratio), math.sqrt(product / ratio))


def cmd_sweep(config: RunConfig) -> int:
    _require(config.sweep is not None, "sweep needs --sweep param:min:max:count")
    param, lo, hi, count = config.sweep
    values = np.linspace(lo, hi, count)
    if param in ("sigma2", "lambda"):
        _require(config.noise is not None, f"{param} sweep needs --noise or --setup")

    rows = []
    for value in values:
        value = float(value)
        if param == "product":
            _require(value > 0.0, f"noise product must be positive, got {value}")
            noise = _sweep_noise(config, value)
            lam = config.lambda_value
            spec = config.state_spec
        elif param == "sigma2":
            _require(value > 0.0, f"sigma2 must be positive, got {value}")
            noise = config.noise
            lam = config.lambda_value
            spec = ("squeezed", value)
        else:
            _require(0.0 <= value <= 1.0, f"lambda must lie in [0, 1], got {value}")
            noise = config.noise
            lam = value
            spec = config.state_spec

        row = {"sweep_param": param, "sweep_value": value}
        row.update(_bound_columns(noise, lam))
        if spec is not None:
            state, label = realize_state(spec, noise)
            full = report(state, noise, BoundParams(lam, lam))
            row.update({
                "state": label,
                "system_bound": full.system_bound,
                "balanced_bound": full.balanced_bound,
                "lambda_family": full.lambda_family,
                "collective": full.collective,
                "gap_to_optimal": full.collective - full.optimal,
            })
        rows.append(row)
    emit(render_rows(rows, config.fmt, single=False), config.out)
    return EXIT_OK


def cmd_minimize(config: RunConfig) -> int:
    _require(config.noise is not None, "minimize needs --noise or --setup")
    optimizer = OptimizerConfig(n_max=config.n_max, max_iters=config.max_iters,
                                restarts=config.restarts, seed=config.seed)
    status = EXIT_OK
    try:
        result = find_minimal_entropy_state(config.noise, optimizer)
    except NonConvergenceError as exc:
        result = exc.result
        status = EXIT_NO_CONVERGENCE
        print("warning: no restart converged", file=sys.stderr)
    opt, _ = optimal_bound(config.noise)
    sigma2_min = minimal_variance(config.noise)
    row = {
        "delta_x": config.noise.delta_x,
        "delta_p": config.noise.delta_p,
        "noise_product": config.noise.product,
        "n_max": optimizer.n_max,
        "restarts": optimizer.restarts,
        "seed": optimizer.seed,
        "entropy": result.entropy,
        "optimal": opt,
        "gap": result.entropy - opt,
        "sigma2_min": sigma2_min,
        "fidelity": fidelity_with_squeezed(result.coeffs, sigma2_min),
        "iterations": result.iterations,
        "converged": result.converged,
        "coeffs_re": list(result.coeffs.real),
        "coeffs_im": list(result.coeffs.imag),
    }
    emit(render_rows([row], config.fmt, single=True), config.out)
    return status


def cmd_verify(config: RunConfig) -> int:
    try:
        results = run_suites(config.suites, injected_noise=config.noise,
                             seed=config.seed)
    except KeyError as exc:
        raise CliConfigError(str(exc.args[0])) from None
    rows = [{"suite": r.name, "passed": r.passed, "margin": r.margin,
             "detail": r.detail} for r in results]
    emit(render_rows(rows, config.fmt, single=False), config.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pointer-entropy",
        description="Collective entropy and entropic uncertainty bounds of "
                    "pointer-based simultaneous position/momentum measurements.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, state=True, noise=True):
        if state:
            p.add_argument("--state", help="squeezed:<sigma2>, squeezed:min or "
                                           "fock:<c0,c1,...>")
        if noise:
            p.add_argument("--noise", help="direct noise widths dX,dP")
            p.add_argument("--setup", help="physical setup k1,k2,T,s1(sq),s2(sq)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="also write the output to this file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--grid", help="override grid as min:max:count")

    p = sub.add_parser("entropy", help="marginal and collective entropies")
    add_common(p)

    p = sub.add_parser("bounds", help="all lower bounds, with entropies if a "
                                      "state is given")
    add_common(p)
    p.add_argument("--lambda", dest="lambda_value", type=float, default=0.5,
                   help="weight for the parameterized bounds (default 0.5)")

    p = sub.add_parser("sweep", help="table of entropies and bounds over one "
                                     "swept parameter")
    add_common(p)
    p.add_argument("--sweep", required=True,
                   help="param:min:max:count with param one of product, sigma2, lambda")
    p.add_argument("--lambda", dest="lambda_value", type=float, default=0.5)

    p = sub.add_parser("minimize", help="search for the minimal-entropy state")
    add_common(p, state=False)
    p.add_argument("--n-max", dest="n_max", type=int, default=12)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=5000)

    p = sub.add_parser("verify", help="run the self-check suites")
    add_common(p, state=False)
    p.add_argument("--suite", action="append", choices=sorted(SUITES),
                   help="run only this suite (repeatable)")
    return parser


_COMMANDS = {
    "entropy": cmd_entropy,
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
    "minimize": cmd_minimize,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        return _COMMANDS[args.command](config)
    except CliConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except PointerEntropyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end.

Subcommands: ``truncate`` (polynomial truncation solutions), ``table``
(convergence tables), ``figure`` (spectral curves plus truncation points as a
plot-ready JSON dataset), ``physical`` (self-consistent energies) and
``permitted`` (the discrete field values forced by truncation, flagged as
artifacts).

All numeric output is serialized with 10 significant digits and identical
invocations produce byte-identical output.  Exit codes: 0 success, 1 usage,
2 domain or numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import frobenius, spectral, variational
from .exceptions import (
    ConditioningError,
    CoverageError,
    DivergentIntegralError,
    DomainError,
    NoSolutionError,
    RootFindingError,
)
from .model import PhysicalParameters, RadialProblem

SCHEMA_VERSION = 1

_THETA_TOKENS = {
    "sqrt2": math.sqrt(2.0),
    "-sqrt2": -math.sqrt(2.0),
    "sqrt6": math.sqrt(6.0),
    "-sqrt6": -math.sqrt(6.0),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # Usage problems exit 1 (argparse default would be 2, reserved here for
    # domain errors).
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def fmt_sig10(x: float) -> str:
    """Positional decimal with exactly 10 significant digits."""
    if x == 0:
        x = 0.0
    return np.format_float_positional(float(x), precision=10, unique=False, fractional=False)


def sig10(x: float) -> float:
    """Float rounded to 10 significant digits, for JSON number output."""
    return float(f"{float(x):.10g}")


def parse_theta(text: str) -> float:
    """Decimal or one of the exact tokens sqrt2, -sqrt2, sqrt6, -sqrt6."""
    token = text.strip().lower()
    if token in _THETA_TOKENS:
        return _THETA_TOKENS[token]
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid theta {text!r} (decimal or sqrt2/-sqrt2/sqrt6/-sqrt6)"
        ) from None


def _parse_bool(text: str) -> bool:
    token = text.strip().lower()
    if token in ("1", "true", "yes", "on"):
        return True
    if token in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"invalid boolean {text!r} in config file")


_FIELD_PARSERS = {
    "n": int,
    "s": float,
    "i": int,
    "j": int,
    "k": int,
    "nmax": int,
    "jmax": int,
    "basis": int,
    "theta": parse_theta,
    "theta_min": parse_theta,
    "theta_max": parse_theta,
    "theta_step": float,
    "m": float,
    "pz": float,
    "alpha": float,
    "l": int,
    "g": float,
    "b": float,
    "chi": float,
    "format": str,
    "output": str,
    "roundtrip_check": _parse_bool,
}


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                values[key.strip().lower().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    return values


def _merge_config(args: argparse.Namespace, fields: list[str]) -> None:
    """Fill unset options from the config file; flags always win."""
    if getattr(args, "config", None) is None:
        return
    cfg = _load_config(args.config)
    unknown = sorted(set(cfg) - set(fields))
    if unknown:
        raise UsageError(f"unknown config key(s): {', '.join(unknown)}")
    for name in fields:
        if getattr(args, name, None) is None and name in cfg:
            try:
                setattr(args, name, _FIELD_PARSERS[name](cfg[name]))
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {name}: {exc}") from None


def _require(args: argparse.Namespace, names: list[str]) -> None:
    missing = ["--" + n.replace("_", "-") for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join(missing)}")


def _emit(text: str, output: str | None) -> None:
    """Write to stdout, or atomically to a file."""
    if output is None:
        output = os.environ.get("SPECURVE_OUTPUT")
    if output is None or output == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".specurve-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _params_block(args, with_chi: bool) -> PhysicalParameters:
    chi = args.chi if with_chi else None
    return PhysicalParameters(
        m=args.m, p_z=args.pz, alpha=args.alpha, l=args.l, g=args.g, b=args.b, chi=chi
    )


def _params_json(params: PhysicalParameters) -> dict:
    out = {
        "m": sig10(params.m),
        "p_z": sig10(params.p_z),
        "alpha": sig10(params.alpha),
        "l": params.l,
        "g": sig10(params.g),
        "b": sig10(params.b),
    }
    if params.chi is not None:
        out["chi"] = sig10(params.chi)
    return out


def cmd_truncate(args) -> None:
    _merge_config(args, ["n", "s", "format", "output"])
    _require(args, ["n", "s"])
    fmt = args.format or "csv"
    sol = frobenius.truncate(args.n, args.s)
    nodes = [
        frobenius.count_nodes(frobenius.eigenfunction(sol, i)) for i in range(1, sol.n + 2)
    ]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["n", "s", "W", "i", "theta_root"]
            + [f"a_{j}" for j in range(sol.n + 1)]
            + ["node_count"]
        )
        for i in range(sol.n + 1):
            writer.writerow(
                [sol.n, fmt_sig10(sol.s), fmt_sig10(sol.w), i + 1, fmt_sig10(sol.roots[i])]
                + [fmt_sig10(c) for c in sol.coeff_table[i]]
                + [nodes[i]]
            )
        _emit(buf.getvalue(), args.output)
    elif fmt == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "truncation_solution",
            "n": sol.n,
            "s": sig10(sol.s),
            "w": sig10(sol.w),
            "roots": [
                {
                    "i": i + 1,
                    "theta": sig10(sol.roots[i]),
                    "coefficients": [sig10(c) for c in sol.coeff_table[i]],
                    "node_count": nodes[i],
                }
                for i in range(sol.n + 1)
            ],
        }
        _emit(_json_text(payload), args.output)
    else:
        raise UsageError(f"unknown format {fmt!r} (csv or json)")


def cmd_table(args) -> None:
    _merge_config(args, ["s", "theta", "nmax", "k", "format", "output"])
    _require(args, ["s", "theta"])
    nmax = args.nmax or 10
    k = args.k or 4
    fmt = args.format or "csv"
    table = variational.convergence_study(RadialProblem(s=args.s, theta=args.theta), nmax, k)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["N"] + [f"W_{j}" for j in range(k)])
        for n_basis, values in table.rows:
            cells = [fmt_sig10(v) for v in values] + [""] * (k - len(values))
            writer.writerow([n_basis] + cells)
        _emit(buf.getvalue(), args.output)
    elif fmt == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "convergence_table",
            "s": sig10(args.s),
            "theta": sig10(args.theta),
            "k": k,
            "rows": [
                {"N": n_basis, "w": [sig10(v) for v in values]}
                for n_basis, values in table.rows
            ],
            "converged": list(table.converged),
        }
        _emit(_json_text(payload), args.output)
    else:
        raise UsageError(f"unknown format {fmt!r} (csv or json)")


def cmd_figure(args) -> None:
    _merge_config(
        args,
        ["s", "theta_min", "theta_max", "theta_step", "jmax", "nmax", "basis", "output"],
    )
    _require(args, ["s"])
    step = args.theta_step if args.theta_step is not None else 0.05
    if step <= 0:
        raise UsageError(f"--theta-step must be positive, got {step}")
    n_max = args.nmax if args.nmax is not None else 6
    j_max = args.jmax if args.jmax is not None else n_max
    n_basis = args.basis or 16
    if j_max < n_max:
        raise UsageError("--jmax must be at least --nmax so every point has a curve")

    solutions = [frobenius.truncate(n, args.s) for n in range(n_max + 1)]
    all_roots = np.concatenate([sol.roots for sol in solutions])
    auto_range = args.theta_min is None and args.theta_max is None
    lo = args.theta_min if args.theta_min is not None else float(all_roots.min() - 1.0)
    hi = args.theta_max if args.theta_max is not None else float(all_roots.max() + 1.0)
    if hi <= lo:
        raise UsageError(f"need --theta-max > --theta-min, got [{lo}, {hi}]")
    grid = np.arange(lo, hi + 0.5 * step, step)
    outside = [float(r) for r in all_roots if r < grid[0] or r > grid[-1]]
    if outside:
        raise CoverageError(
            f"truncation roots outside the requested range: {outside}", points=tuple(outside)
        )

    curves = spectral.sweep(args.s, j_max, grid, n_basis)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "figure_dataset",
        "s": sig10(args.s),
        "basis_size": n_basis,
        "n_max": n_max,
        "theta_grid": {
            "min": sig10(grid[0]),
            "max": sig10(grid[-1]),
            "step": sig10(step),
            "count": int(len(grid)),
            "auto_range": auto_range,
        },
        "curves": [
            {
                "level": c.level,
                "theta": [sig10(t) for t in c.thetas],
                "w": [sig10(v) for v in c.values],
            }
            for c in curves
        ],
        "points": [
            {"n": sol.n, "i": i + 1, "theta": sig10(sol.roots[i]), "w": sig10(sol.w)}
            for sol in solutions
            for i in range(sol.n + 1)
        ],
    }
    _emit(_json_text(payload), args.output)


def cmd_physical(args) -> None:
    _merge_config(args, ["m", "pz", "alpha", "l", "g", "b", "chi", "j", "basis", "output"])
    _require(args, ["m", "pz", "alpha", "l", "g", "b", "chi"])
    level = args.j if args.j is not None else 0
    n_basis = args.basis or 16
    params = _params_block(args, with_chi=True)
    energy, info = spectral.physical_energy(params, level, n_basis, full_output=True)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "self_consistent_energy",
        "params": _params_json(params),
        "level": level,
        "basis_size": n_basis,
        "energy": sig10(energy),
        "theta": sig10(info.theta),
        "w": sig10(info.w),
        "residual": sig10(info.residual),
        "iterations": info.iterations,
    }
    _emit(_json_text(payload), args.output)


def cmd_permitted(args) -> None:
    _merge_config(
        args, ["m", "pz", "alpha", "l", "g", "b", "n", "i", "roundtrip_check", "output"]
    )
    _require(args, ["m", "pz", "alpha", "l", "g", "b", "n", "i"])
    params = _params_block(args, with_chi=False)
    value = spectral.permitted_chi(params, args.n, args.i, acknowledge_artifact=True)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "permitted_field_value",
        "artifact_of_truncation": True,
        "params": _params_json(params),
        "n": value.n,
        "i": value.i,
        "s": sig10(value.s),
        "theta_root": sig10(value.theta),
        "w": sig10(value.w),
        "energy": sig10(value.energy),
        "tau": sig10(value.tau),
        "chi": sig10(value.chi),
    }
    if args.roundtrip_check:
        payload["roundtrip_residual"] = sig10(
            spectral.reduce_roundtrip_residual(value, params)
        )
    _emit(_json_text(payload), args.output)


def _add_common(sub) -> None:
    sub.add_argument("--config", help="key=value config file; flags override")
    sub.add_argument("--output", help="output path ('-' or omitted: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specurve", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", metavar="command")

    p = commands.add_parser("truncate", help="polynomial truncation solution at order n")
    p.add_argument("--n", type=int, help="truncation order (>= 0)")
    p.add_argument("--s", type=float, help="exponent s (>= 0)")
    p.add_argument("--format", choices=["csv", "json"], help="output format (default csv)")
    _add_common(p)
    p.set_defaults(func=cmd_truncate)

    p = commands.add_parser("table", help="eigenvalue convergence table over basis size")
    p.add_argument("--s", type=float, help="exponent s (>= 0)")
    p.add_argument("--theta", type=parse_theta, help="Coulomb coefficient (or sqrt2 tokens)")
    p.add_argument("--nmax", type=int, help="largest basis size (default 10)")
    p.add_argument("--k", type=int, help="levels per row (default 4)")
    p.add_argument("--format", choices=["csv", "json"], help="output format (default csv)")
    _add_common(p)
    p.set_defaults(func=cmd_table)

    p = commands.add_parser("figure", help="spectral curves plus truncation points (JSON)")
    p.add_argument("--s", type=float, help="exponent s (>= 0)")
    p.add_argument("--theta-min", type=parse_theta, help="grid start (default: cover roots)")
    p.add_argument("--theta-max", type=parse_theta, help="grid end (default: cover roots)")
    p.add_argument("--theta-step", type=float, help="grid spacing (default 0.05)")
    p.add_argument("--jmax", type=int, help="highest curve level (default --nmax)")
    p.add_argument("--nmax", type=int, help="highest truncation order (default 6)")
    p.add_argument("--basis", type=int, help="variational basis size (default 16)")
    _add_common(p)
    p.set_defaults(func=cmd_figure)

    p = commands.add_parser("physical", help="self-consistent energy of one level")
    for name, typ, help_text in [
        ("--m", float, "mass"),
        ("--pz", float, "longitudinal momentum"),
        ("--alpha", float, "Coulomb strength (>= 0)"),
        ("--l", int, "rotational quantum number"),
        ("--g", float, "coupling constant (> 0)"),
        ("--b", float, "tensor-background component (> 0)"),
        ("--chi", float, "magnetic-field parameter"),
    ]:
        p.add_argument(name, type=typ, help=help_text)
    p.add_argument("--j", type=int, help="level index (default 0)")
    p.add_argument("--basis", type=int, help="variational basis size (default 16)")
    _add_common(p)
    p.set_defaults(func=cmd_physical)

    p = commands.add_parser(
        "permitted", help="discrete field value forced by truncation (artifact)"
    )
    for name, typ, help_text in [
        ("--m", float, "mass"),
        ("--pz", float, "longitudinal momentum"),
        ("--alpha", float, "Coulomb strength (>= 0)"),
        ("--l", int, "rotational quantum number"),
        ("--g", float, "coupling constant (> 0)"),
        ("--b", float, "tensor-background component (> 0)"),
    ]:
        p.add_argument(name, type=typ, help=help_text)
    p.add_argument("--n", type=int, help="truncation order")
    p.add_argument("--i", type=int, help="root index (1-based)")
    p.add_argument(
        "--roundtrip-check",
        action="store_true",
        default=None,
        help="recompute theta from the output and report the residual",
    )
    _add_common(p)
    p.set_defaults(func=cmd_permitted)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        args.func(args)
    except UsageError as exc:
        print(f"specurve: error: {exc}", file=sys.stderr)
        return 1
    except (
        DomainError,
        NoSolutionError,
        CoverageError,
        DivergentIntegralError,
        ConditioningError,
        RootFindingError,
    ) as exc:
        print(f"specurve: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

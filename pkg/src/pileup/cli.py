"""Command-line surface: minimisation runs, boundary-layer solves, scaling
tables, and the self-verification suite.

Every command writes one CSV file with a ``# meta:`` comment line echoing
the configuration, so figure data can be regenerated byte-identically from
the file alone.  Exit codes: 0 success, 2 usage error, 3 solver failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, boundary_layer, continuum, discrete, scaling, verification
from .errors import PileupError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4


@dataclass
class RunConfig:
    """Echoable configuration of a single CLI run; two runs with equal
    configs produce byte-identical output."""

    command: str
    n: int = 128
    gamma_rule: str = "1/2"
    newton_tol: float = 1e-10
    a1: float = 3e-5
    width_at_one: float = 0.1
    reach: float = 200.0
    rules: list[str] = field(default_factory=lambda: ["1/4", "1/2", "3/4"])
    n_min: int = 8
    n_max: int = 256
    output_path: str = ""

    def meta(self, **extra) -> str:
        parts = [f"command={self.command}", f"version={__version__}"]
        if self.command in ("minimize", "matched"):
            parts += [
                f"n={self.n}",
                f"gamma_rule={self.gamma_rule}",
                f"gamma={scaling.gamma_for(self.gamma_rule, self.n)!r}",
                f"newton_tol={self.newton_tol!r}",
            ]
        elif self.command == "boundary-layer":
            parts += [
                f"a1={self.a1!r}",
                f"width_at_one={self.width_at_one!r}",
                f"reach={self.reach!r}",
            ]
        elif self.command == "scaling-table":
            parts += [
                f"rules={','.join(self.rules)}",
                f"n_min={self.n_min}",
                f"n_max={self.n_max}",
                f"newton_tol={self.newton_tol!r}",
            ]
        parts += [f"{k}={v}" for k, v in extra.items()]
        return "# meta: " + " ".join(parts)


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip decimal
    return str(value)


def write_csv(rows, path: str, header: list[str], meta: str | None = None) -> None:
    """Write rows as RFC-4180-style CSV with LF line endings, a header row,
    and shortest-roundtrip float formatting."""
    rows = list(rows)
    width = len(header)
    for row in rows:
        if len(row) != width:
            raise ValueError("rows must be rectangular and match the header")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if meta:
            fh.write(meta + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])


def _parse_count(text: str) -> int:
    """Wall counts accept plain integers or powers like 2^8."""
    if "^" in text:
        base, exponent = text.split("^", 1)
        return int(base) ** int(exponent)
    return int(text)


def _thread_count() -> int:
    raw = os.environ.get("PILEUP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _cmd_minimize(config: RunConfig) -> int:
    gamma = scaling.gamma_for(config.gamma_rule, config.n)
    sol = discrete.newton_minimize(config.n, gamma, tol=config.newton_tol)
    rho = discrete.discrete_density(sol)
    nu = discrete.rescaled_nu_samples(sol)
    rows = []
    for i, x in enumerate(sol.positions):
        interior = 1 <= i <= config.n - 1
        rows.append(
            [
                i,
                float(x),
                float(continuum.rho_star(x)),
                float(rho.values[i - 1]) if interior else "",
                float(nu.locations[i - 1]) if interior else "",
                float(nu.values[i - 1]) if interior else "",
            ]
        )
    write_csv(
        rows,
        config.output_path,
        header=["index", "position", "rho_star", "density", "nu_location", "nu_value"],
        meta=config.meta(),
    )
    return EXIT_OK


def _cmd_boundary_layer(config: RunConfig) -> int:
    grid = boundary_layer.build_grid(
        a1=config.a1, width_at_one=config.width_at_one, reach=config.reach
    )
    sol = boundary_layer.solve_nu_star(grid)
    dip = boundary_layer.dip_metrics(sol)
    lam = sol.nu_star.values
    # affine interpolation through (y_j, lambda_j), sampled at cell right edges
    affine_right = np.interp(grid.breakpoints[1:], grid.midpoints, lam)
    rows = []
    for i in range(grid.N):
        rows.append(
            [
                float(grid.breakpoints[i]),
                float(grid.breakpoints[i + 1]),
                float(grid.midpoints[i]),
                float(lam[i]),
                float(sol.residual_report[i, 1]),
                float(affine_right[i]),
            ]
        )
    write_csv(
        rows,
        config.output_path,
        header=["a_left", "a_right", "y_mid", "lambda", "residual_mid", "lambda_affine_right"],
        meta=config.meta(
            C=repr(grid.C),
            b=repr(grid.b),
            N=grid.N,
            mass=repr(sol.nu_star.mass()),
            dip_min=repr(dip["min_value"]),
            dip_location=repr(dip["min_location"]),
            sign_changes=dip["sign_changes"],
        ),
    )
    return EXIT_OK


def _cmd_matched(config: RunConfig) -> int:
    gamma = scaling.gamma_for(config.gamma_rule, config.n)
    sol = discrete.newton_minimize(config.n, gamma, tol=config.newton_tol)
    rho = discrete.discrete_density(sol)
    bl = boundary_layer.solve_nu_star(boundary_layer.build_grid())
    matched = boundary_layer.matched_density(bl, gamma, rho.locations)
    rows = [
        [
            i + 1,
            float(rho.locations[i]),
            float(rho.values[i]),
            float(continuum.rho_star(rho.locations[i])),
            float(matched[i]),
        ]
        for i in range(rho.locations.size)
    ]
    write_csv(
        rows,
        config.output_path,
        header=["index", "position", "density", "rho_star", "rho_matched"],
        meta=config.meta(),
    )
    return EXIT_OK


def _cmd_scaling_table(config: RunConfig) -> int:
    n_list = []
    n = config.n_min
    while n <= config.n_max:
        n_list.append(n)
        n *= 2
    report = scaling.exponent_table(
        n_list, config.rules, tol=config.newton_tol, threads=_thread_count()
    )
    write_csv(
        report.table(),
        config.output_path,
        header=["n", "gamma_rule", "gamma", "alpha", "p"],
        meta=config.meta(),
    )
    return EXIT_OK


def _cmd_verify(_: RunConfig) -> int:
    results = verification.run_all()
    failures = [r for r in results if not r.passed]
    print(f"{len(results) - len(failures)}/{len(results)} checks passed")
    return EXIT_VERIFY if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pileup",
        description="Dislocation-wall pile-up toolkit: discrete minimisers, "
        "boundary-layer collocation, and scaling tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, default_out):
        p.add_argument("--out", default=default_out, help="output CSV path")
        p.add_argument(
            "--newton-tol", type=float, default=1e-10, help="Newton gradient tolerance"
        )

    p_min = sub.add_parser("minimize", help="discrete minimiser and densities")
    p_min.add_argument("--n", type=_parse_count, default=128)
    p_min.add_argument("--gamma-rule", default="1/2", help="1/4 | 1/2 | 3/4 | value:<float>")
    add_common(p_min, "minimize.csv")

    p_bl = sub.add_parser("boundary-layer", help="collocation solve of the layer profile")
    p_bl.add_argument("--a1", type=float, default=3e-5)
    p_bl.add_argument("--width-at-one", type=float, default=0.1)
    p_bl.add_argument("--reach", type=float, default=200.0)
    add_common(p_bl, "boundary_layer.csv")

    p_mat = sub.add_parser("matched", help="discrete density vs matched density")
    p_mat.add_argument("--n", type=_parse_count, default=128)
    p_mat.add_argument("--gamma-rule", default="1/2")
    add_common(p_mat, "matched.csv")

    p_tab = sub.add_parser("scaling-table", help="power-law exponent table")
    p_tab.add_argument("--rules", default="1/4,1/2,3/4")
    p_tab.add_argument("--nmin", type=_parse_count, default=8)
    p_tab.add_argument("--nmax", type=_parse_count, default=256)
    add_common(p_tab, "scaling.csv")

    sub.add_parser("verify", help="run the full invariant suite")
    return parser


def _config_from_args(args) -> RunConfig:
    config = RunConfig(command=args.command)
    if args.command in ("minimize", "matched"):
        if args.n < 2:
            raise ValueError("--n must be at least 2")
        config.n = args.n
        config.gamma_rule = args.gamma_rule
        scaling.gamma_for(config.gamma_rule, config.n)  # validate the rule early
    if args.command == "boundary-layer":
        config.a1 = args.a1
        config.width_at_one = args.width_at_one
        config.reach = args.reach
    if args.command == "scaling-table":
        config.rules = [r.strip() for r in args.rules.split(",") if r.strip()]
        if not config.rules:
            raise ValueError("--rules must name at least one gamma rule")
        for rule in config.rules:
            scaling.gamma_for(rule, 2)
        config.n_min = args.nmin
        config.n_max = args.nmax
        if config.n_min < 2 or config.n_max < config.n_min:
            raise ValueError("need 2 <= nmin <= nmax")
    if hasattr(args, "newton_tol"):
        if args.newton_tol <= 0:
            raise ValueError("--newton-tol must be positive")
        config.newton_tol = args.newton_tol
    if hasattr(args, "out"):
        config.output_path = args.out
    return config


_DISPATCH = {
    "minimize": _cmd_minimize,
    "boundary-layer": _cmd_boundary_layer,
    "matched": _cmd_matched,
    "scaling-table": _cmd_scaling_table,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        config = _config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _DISPATCH[args.command](config)
    except PileupError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

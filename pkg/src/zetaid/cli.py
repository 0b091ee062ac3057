"""Command line: ``zetaid verify``, ``zetaid phi`` and ``zetaid table``.

Exit codes: 0 when every report passes, 1 when any report fails (or a check
cannot complete numerically), 2 for usage and configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DivergentTransform,
    DomainError,
    InsufficientData,
    NoConvergence,
    TailModelUnusable,
    UnsupportedRegion,
)
from .phi import phi_pieces, evaluate_phi, phi_asymptotic, phi_exact
from .report import CSV_HEADER, format_human, to_csv_row, to_json
from .verify import CHECKS, SuiteOptions, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CONFIG_ERRORS = (DomainError, UnsupportedRegion, DivergentTransform, ValueError)
NUMERIC_ERRORS = (NoConvergence, TailModelUnusable, InsufficientData)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    check_names: list = field(default_factory=list)
    sigma: float | None = None
    s_re: float | None = None
    s_im: float | None = None
    t_max: float | None = None
    x_max: float | None = None
    tol: float | None = None
    x: float | None = None
    grid: tuple | None = None  # (start, stop, count, scale)
    output_format: str = "human"
    output_path: str | None = None

    def validate(self):
        if self.command not in ("verify", "phi", "table"):
            raise UsageError(f"unknown command {self.command!r}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")
        for name in ("t_max", "x_max"):
            v = getattr(self, name)
            if v is not None and not v >= 1:
                raise UsageError(f"--{name.replace('_', '-')} must be at least 1")
        if self.command == "verify":
            if not self.check_names:
                raise UsageError("verify needs at least one check name")
            unknown = [c for c in self.check_names if c != "all" and c not in CHECKS]
            if unknown:
                raise UsageError(
                    f"unknown check(s) {', '.join(unknown)}; choose from all, {', '.join(CHECKS)}"
                )
        if self.command == "phi" and (self.x is None) == (self.grid is None):
            raise UsageError("phi needs exactly one of --x or --grid")
        if self.command == "table" and self.x is None:
            raise UsageError("table needs --x")
        if self.grid is not None:
            start, stop, count, scale = self.grid
            if count < 2:
                raise UsageError("grid count must be at least 2")
            if scale not in ("linear", "log"):
                raise UsageError("grid scale must be linear or log")
            if not start < stop:
                raise UsageError("grid start must be below stop")


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"cannot parse {text!r} as RE,IM")


def parse_grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError(f"grid must look like A:B:N:linear|log, got {text!r}")
    return float(parts[0]), float(parts[1]), int(parts[2]), parts[3]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetaid",
        description="Numerical checks of weighted zeta mean values and Mellin identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run identity checks")
    v.add_argument("checks", nargs="+", metavar="CHECK",
                   help="check names (" + ", ".join(["all", *CHECKS]) + ")")
    v.add_argument("--sigma", type=float)
    v.add_argument("--s", dest="s", type=parse_complex, metavar="RE,IM")
    v.add_argument("--t-max", type=float)
    v.add_argument("--x-max", type=float)
    v.add_argument("--tol", type=float)
    fmt = v.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="line-delimited JSON reports")
    fmt.add_argument("--csv", action="store_true")
    v.add_argument("--out", metavar="PATH")

    p = sub.add_parser("phi", help="evaluate phi, its asymptote and remainder")
    where = p.add_mutually_exclusive_group()
    where.add_argument("--x", type=float)
    where.add_argument("--grid", type=parse_grid, metavar="A:B:N:{linear|log}")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--out", metavar="PATH")

    t = sub.add_parser("table", help="list the interval pieces that make up phi(x)")
    t.add_argument("--x", type=float, required=True)
    t.add_argument("--csv", action="store_true")
    t.add_argument("--out", metavar="PATH")
    return parser


def config_from_args(args) -> RunConfig:
    fmt = "human"
    if getattr(args, "json", False):
        fmt = "json"
    elif getattr(args, "csv", False):
        fmt = "csv"
    s = getattr(args, "s", None)
    return RunConfig(
        command=args.command,
        check_names=list(getattr(args, "checks", []) or []),
        sigma=getattr(args, "sigma", None),
        s_re=None if s is None else s.real,
        s_im=None if s is None else s.imag,
        t_max=getattr(args, "t_max", None),
        x_max=getattr(args, "x_max", None),
        tol=getattr(args, "tol", None),
        x=getattr(args, "x", None),
        grid=getattr(args, "grid", None),
        output_format=fmt,
        output_path=getattr(args, "out", None),
    )


def _run_verify(cfg: RunConfig, out, err) -> int:
    s = None if cfg.s_re is None else complex(cfg.s_re, cfg.s_im or 0.0)
    opts = SuiteOptions(sigma=cfg.sigma, s=s, t_max=cfg.t_max, x_max=cfg.x_max, tol=cfg.tol)
    names = list(CHECKS) if "all" in cfg.check_names else cfg.check_names
    reports = []
    failed_checks = []
    for name in names:
        try:
            reports.extend(run_checks([name], opts))
        except NUMERIC_ERRORS as exc:
            failed_checks.append(name)
            print(f"zetaid: {name}: {type(exc).__name__}: {exc}", file=err)

    if cfg.output_format == "json":
        for r in reports:
            out.write(to_json(r) + "\n")
    elif cfg.output_format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in reports:
            w.writerow(to_csv_row(r))
    else:
        for r in reports:
            out.write(format_human(r) + "\n")

    n_pass = sum(r.passed for r in reports)
    summary = f"{n_pass}/{len(reports)} reports passed"
    if failed_checks:
        summary += f"; {len(failed_checks)} check(s) did not complete: {', '.join(failed_checks)}"
    print(summary, file=out if cfg.output_format == "human" else err)
    ok = n_pass == len(reports) and not failed_checks
    return EXIT_OK if ok else EXIT_FAIL


def _grid_points(grid):
    start, stop, count, scale = grid
    if scale == "log":
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def _run_phi(cfg: RunConfig, out) -> int:
    xs = np.array([cfg.x]) if cfg.x is not None else _grid_points(cfg.grid)
    exact = np.atleast_1d(phi_exact(xs))
    asym = np.atleast_1d(phi_asymptotic(xs))
    if cfg.output_format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("x", "phi_exact", "phi_asymptotic", "phi_remainder"))
        for x, e, a in zip(xs, exact, asym):
            w.writerow(["%.17g" % x, "%.17g" % e, "%.17g" % a, "%.17g" % (e - a)])
        return EXIT_OK
    if cfg.x is not None:
        ev = evaluate_phi(cfg.x)
        out.write(
            f"x={ev.x:.17g} exact={ev.exact:.17g} asymptotic={ev.asymptotic:.17g} "
            f"remainder={ev.remainder:.17g}\n"
        )
        return EXIT_OK
    for x, e, a in zip(xs, exact, asym):
        out.write(f"x={x:.17g} exact={e:.17g} asymptotic={a:.17g} remainder={e - a:.17g}\n")
    return EXIT_OK


def _run_table(cfg: RunConfig, out) -> int:
    pieces = phi_pieces(cfg.x)
    if cfg.output_format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("m", "n", "lower", "upper", "contribution"))
        for p in pieces:
            w.writerow([p.m, p.n, "%.17g" % p.lower, "%.17g" % p.upper, "%.17g" % p.contribution])
        return EXIT_OK
    out.write(f"{'m':>6} {'n':>6} {'lower':>22} {'upper':>22} {'contribution':>22}\n")
    for p in pieces:
        out.write(f"{p.m:>6} {p.n:>6} {p.lower:>22.15g} {p.upper:>22.15g} {p.contribution:>22.15g}\n")
    total = sum(p.contribution for p in pieces)
    out.write(f"{len(pieces)} pieces, sum = {total:.17g}\n")
    return EXIT_OK


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        config.validate()
    except UsageError as exc:
        print(f"zetaid: {exc}", file=stderr)
        return EXIT_USAGE

    buffer = io.StringIO()
    try:
        if config.command == "verify":
            code = _run_verify(config, buffer, stderr)
        elif config.command == "phi":
            code = _run_phi(config, buffer)
        else:
            code = _run_table(config, buffer)
    except CONFIG_ERRORS as exc:
        print(f"zetaid: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_USAGE

    text = buffer.getvalue()
    if config.output_path:
        try:
            with open(config.output_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"zetaid: cannot write {config.output_path}: {exc}", file=stderr)
            return EXIT_USAGE
    else:
        stdout.write(text)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: identity suites, tables, trajectories, schedules and figures.

Exit status is the same for every command: 0 when everything passed, 1 when
an identity failed, 2 on a numerical or runtime failure and 64 on a usage
error (bad option, or an exponent the command cannot handle).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from lamespiral.curves import (
    CurveFamily,
    Superellipse,
    lame_implicit,
    lame_polar_radius,
    policle_radius,
    spiral_radius,
)
from lamespiral.dynamics import (
    ForceParams,
    cycle_schedule,
    dual_motion,
    octant_period,
    orbit_period,
    simulate_central_force,
)
from lamespiral.errors import DomainError, NumericalError
from lamespiral.quadrature import DEFAULT_CONFIG, QuadratureConfig
from lamespiral.relations import (
    RelationReport,
    verify_fundamental,
    verify_policle,
    verify_sector_arc,
    verify_siegel,
    verify_superellipse_area,
)
from lamespiral.render import render_policle, render_relation, render_spiral

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_NUMERIC = 2
EXIT_USAGE = 64

COMMANDS = ("verify", "table", "simulate", "schedule", "render")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: float
    tol: float = 1e-9
    samples: int = 64
    format: str | None = None
    out_path: str | None = None
    alpha: float | None = None
    mode: str = "dual"
    figure: str = "spiral"
    t_end: float | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not (math.isfinite(self.n) and self.n > 0.0):
            raise UsageError(f"--n must be a positive real, got {self.n!r}")
        if not (math.isfinite(self.tol) and self.tol > 0.0):
            raise UsageError(f"--tol must be positive, got {self.tol!r}")
        if self.samples < 2:
            raise UsageError(f"--samples must be at least 2, got {self.samples}")
        if self.jobs < 1:
            raise UsageError(f"--jobs must be at least 1, got {self.jobs}")

    @property
    def family(self) -> CurveFamily:
        return CurveFamily(self.n)


def fmt(v: float) -> str:
    return format(v, ".17g")


# --- identity suite ----------------------------------------------------------------


def suite_checks(n: float) -> list[tuple[Callable[..., RelationReport], tuple]]:
    """The (function, args) list run by ``verify`` for exponent ``n``."""
    fam = CurveFamily(n)
    checks: list[tuple[Callable[..., RelationReport], tuple]] = [(verify_fundamental, (fam,))]
    checks += [(verify_siegel, (fam, k / 20)) for k in range(21)]
    checks += [(verify_sector_arc, (fam, k * math.pi / 40)) for k in range(1, 11)]
    for se in (
        Superellipse(2.0 * n, 1.0, 1.0),
        Superellipse(2.0 * n, 2.0, 3.0),
        Superellipse(n, 0.5, 2.0),
    ):
        checks.append((verify_superellipse_area, (se,)))
    checks += [(verify_policle, (fam, k * math.pi / (16.0 * n))) for k in range(1, 9)]
    return checks


def _run_check(job: tuple[Callable[..., RelationReport], tuple, QuadratureConfig, float]) -> RelationReport:
    func, args, qcfg, tol = job
    return func(*args, qcfg, tol)


def run_suite(n: float, tol: float, jobs: int = 1, qcfg: QuadratureConfig = DEFAULT_CONFIG) -> list[RelationReport]:
    """Run every check; the result is sorted by name whatever the execution order."""
    work = [(func, args, qcfg, tol) for func, args in suite_checks(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_check, work))
    else:
        reports = [_run_check(w) for w in work]
    return sorted(reports, key=lambda rep: rep.name)


REPORT_FIELDS = ("name", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass")


def write_reports(reports: Sequence[RelationReport], kind: str, out: io.TextIOBase) -> None:
    rows = [rep.to_dict() for rep in reports]
    if kind == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for row in rows:
        writer.writerow(
            [row["name"]]
            + [fmt(row[k]) for k in ("lhs", "rhs", "abs_err", "rel_err", "tol")]
            + [str(row["pass"]).lower()]
        )


def write_rows(header: Sequence[str], rows: Sequence[Sequence[float | int | None]], kind: str, out) -> None:
    """Numeric table as CSV (17 significant digits) or as a JSON array of objects."""
    if kind == "json":
        json.dump([dict(zip(header, row)) for row in rows], out, indent=2)
        out.write("\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else (str(v) if isinstance(v, int) else fmt(v)) for v in row])


# --- commands ------------------------------------------------------------------------


def cmd_verify(cfg: RunConfig, out) -> int:
    reports = run_suite(cfg.n, cfg.tol, cfg.jobs)
    write_reports(reports, cfg.format or "json", out)
    return EXIT_OK if all(rep.passed for rep in reports) else EXIT_IDENTITY


def table_rows(fam: CurveFamily, samples: int) -> list[tuple[float, float | None, float, float]]:
    rows = []
    for k in range(samples):
        theta = 0.25 * math.pi * k / (samples - 1)
        try:
            r_spiral: float | None = spiral_radius(fam, theta)
        except DomainError:
            r_spiral = None  # between leaves
        rows.append((theta, r_spiral, lame_polar_radius(fam, theta), policle_radius(fam, theta)))
    return rows


def cmd_table(cfg: RunConfig, out) -> int:
    rows = table_rows(cfg.family, cfg.samples)
    write_rows(("theta", "spiral_r", "lame_r", "policle_r"), rows, cfg.format or "csv", out)
    return EXIT_OK


DUAL_COLUMNS = (
    "t",
    "lame_x",
    "lame_y",
    "spiral_x",
    "spiral_y",
    "swept_area",
    "traversed_length",
    "octant",
    "half_leaf",
)
FORCE_COLUMNS = ("t", "x", "y", "vx", "vy", "curve_residual", "angular_momentum_drift")


def dual_rows(fam: CurveFamily, fp: ForceParams, t_end: float, frames: int) -> list[tuple]:
    rows = []
    for fr in dual_motion(fam, fp, t_end, frames):
        lp = fr.lame_point.to_plane()
        sp = fr.spiral_point.to_plane()
        rows.append(
            (fr.time, lp.x, lp.y, sp.x, sp.y, fr.swept_area, fr.traversed_length, fr.octant_index, fr.halfleaf_index)
        )
    return rows


def force_rows(fam: CurveFamily, fp: ForceParams, t_end: float) -> list[tuple]:
    h = fp.angular_momentum
    rows = []
    for st in simulate_central_force(fam, fp, t_end):
        rows.append(
            (
                st.time,
                st.position.x,
                st.position.y,
                st.velocity[0],
                st.velocity[1],
                abs(lame_implicit(fam, st.position)),
                abs(st.angular_momentum - h) / h,
            )
        )
    return rows


def cmd_simulate(cfg: RunConfig, out) -> int:
    fam = cfg.family
    fp = ForceParams.for_lame_orbit(fam)
    if cfg.mode == "force":
        t_end = cfg.t_end if cfg.t_end is not None else orbit_period(fam, fp)
        write_rows(FORCE_COLUMNS, force_rows(fam, fp, t_end), cfg.format or "csv", out)
        return EXIT_OK
    n = fam.require_integer("dual motion")
    t_end = cfg.t_end if cfg.t_end is not None else math.lcm(8, 2 * n) * octant_period(fam, fp)
    write_rows(DUAL_COLUMNS, dual_rows(fam, fp, t_end, cfg.samples), cfg.format or "csv", out)
    return EXIT_OK


def cmd_schedule(cfg: RunConfig, out) -> int:
    pairs = cycle_schedule(cfg.family)
    if cfg.format is None:
        for pair in pairs:
            out.write(f"{pair}\n")
    else:
        rows = [(p.octant_index, p.halfleaf_index) for p in pairs]
        write_rows(("octant", "half_leaf"), rows, cfg.format, out)
    return EXIT_OK


def cmd_render(cfg: RunConfig, out) -> int:
    fam = cfg.family
    if cfg.figure == "spiral":
        doc = render_spiral(fam)
    elif cfg.figure == "relation":
        doc = render_relation(fam, cfg.alpha if cfg.alpha is not None else math.pi / 8)
    else:
        doc = render_policle(fam, cfg.alpha if cfg.alpha is not None else fam.leaf_half_width / 2)
    out.write(doc)
    return EXIT_OK


HANDLERS = {
    "verify": cmd_verify,
    "table": cmd_table,
    "simulate": cmd_simulate,
    "schedule": cmd_schedule,
    "render": cmd_render,
}


# --- argument parsing -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lamespiral", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", type=float, required=True, help="curve exponent (positive real)")
    p.add_argument("--alpha", type=float, help="sector angle for the relation and policle figures")
    p.add_argument("--tol", type=float, default=1e-9, help="identity tolerance (default 1e-9)")
    p.add_argument("--samples", type=int, default=64, help="table rows or simulation frames (default 64)")
    p.add_argument("--format", choices=("json", "csv"), help="output format")
    p.add_argument("--mode", choices=("dual", "force"), default="dual", help="simulate: paired motions or Newtonian orbit")
    p.add_argument("--figure", choices=("spiral", "relation", "policle"), default="spiral")
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("--t-end", type=float, help="simulate: end time (default: one full cycle)")
    p.add_argument("--jobs", type=int, default=1, help="verify: worker processes (default 1)")
    return p


def parse_config(argv: Sequence[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(
        command=ns.command,
        n=ns.n,
        tol=ns.tol,
        samples=ns.samples,
        format=ns.format,
        out_path=ns.out,
        alpha=ns.alpha,
        mode=ns.mode,
        figure=ns.figure,
        t_end=ns.t_end,
        jobs=ns.jobs,
    )


def run(cfg: RunConfig, out) -> int:
    return HANDLERS[cfg.command](cfg, out)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"lamespiral: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    buf = io.StringIO()
    try:
        status = run(cfg, buf)
    except DomainError as exc:
        print(f"lamespiral: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, OverflowError, ZeroDivisionError) as exc:
        print(f"lamespiral: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    # output is buffered so a failed run never leaves a half-written file
    try:
        if cfg.out_path is None:
            sys.stdout.write(buf.getvalue())
        else:
            with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
    except OSError as exc:
        print(f"lamespiral: cannot write output: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return status


if __name__ == "__main__":
    sys.exit(main())

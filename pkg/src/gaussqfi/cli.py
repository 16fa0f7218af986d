"""Command-line front end.

Subcommands::

    gaussqfi qfi <config>                          one Fisher report
    gaussqfi sweep <config> --from A --to B --steps N [--out F] [--jobs J]
    gaussqfi sld <config>                          SLD coefficients + normal form
    gaussqfi homodyne <config> [--random-U N] [--seed S]
    gaussqfi oracle-check <config> --cutoff D [--h H]

Configs are JSON model documents (see :func:`gaussqfi.models.parse_model_config`);
they describe physics only — sweep ranges, outputs, and oracle parameters are
always flags.  Exit codes: 0 success, 2 config problems, 3 numerical
precondition rejections (the message names the violated flag), 64 unknown
subcommand.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .estimation import (
    FisherReport,
    photon_counting_form,
    qfi_general,
    sld_coefficients,
)
from .exceptions import ConfigError, ConvergenceError, PreconditionError
from .fock import identity_checks, qfi_fock_probe, sld_residual
from .homodyne import homodyne_fisher, isothermal_frame, optimal_homodyne_fisher
from .models import ModelFamily, load_model_config
from .symplectic import random_symplectic

__all__ = ["main", "emit_csv", "sweep_rows", "SweepRow", "CSV_HEADER"]

CSV_HEADER = (
    "theta,qfi,qfi_first_moment,qfi_second_moment,"
    "wigner_fisher,homodyne_opt,ratio,method,warnings"
)

_USAGE = """\
usage: gaussqfi <subcommand> [options]

subcommands:
  qfi <config>                           evaluate the quantum Fisher information
  sweep <config> --from A --to B --steps N [--out FILE] [--jobs J]
  sld <config>                           SLD coefficients and photon-counting form
  homodyne <config> [--random-U N] [--seed S]
  oracle-check <config> --cutoff D [--h H]

run 'gaussqfi <subcommand> --help' for subcommand options
"""


def _matrix_lines(M: np.ndarray, indent: str = "  ") -> str:
    rows = [
        indent + " ".join(f"{x: .12g}" for x in row) for row in np.atleast_2d(M)
    ]
    return "\n".join(rows)


def _vector_line(v: np.ndarray) -> str:
    return "[" + ", ".join(f"{x:.12g}" for x in np.atleast_1d(v)) + "]"


# ---------------------------------------------------------------------------
# sweep evaluation and CSV output
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    """One evaluated sweep point, ready for CSV formatting."""

    theta: float
    report: FisherReport
    homodyne_opt: float | None
    warnings: str


def _evaluate_sweep_point(family: ModelFamily, theta: float, tol: float) -> SweepRow:
    point = family.point(theta)
    rep = qfi_general(point, tol)
    warn = ""
    if rep.range_residual > tol * (1.0 + np.linalg.norm(point.dgamma)):
        warn = "kernel-overlap"
    try:
        hopt = optimal_homodyne_fisher(isothermal_frame(point))
    except PreconditionError:
        hopt = None
    return SweepRow(theta=theta, report=rep, homodyne_opt=hopt, warnings=warn)


def sweep_rows(
    family: ModelFamily, thetas: np.ndarray, tol: float = 1e-9, jobs: int = 1
) -> list[SweepRow]:
    """Evaluate a theta grid, in parallel when ``jobs > 1``.

    Rows come back in theta order regardless of completion order, so the
    resulting CSV is byte-identical for any worker count.
    """
    thetas = np.sort(np.asarray(thetas, dtype=float))
    if jobs <= 1 or thetas.size <= 1:
        return [_evaluate_sweep_point(family, t, tol) for t in thetas]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_evaluate_sweep_point, family, t, tol) for t in thetas
        ]
        return [f.result() for f in futures]


def _csv_cell(x: float | None) -> str:
    if x is None or not math.isfinite(x):
        return ""
    return f"{x:.11e}"


def emit_csv(rows: list[SweepRow], destination) -> None:
    """Write sweep rows as CSV (12 significant digits, newline-terminated).

    ``destination`` is a path or a text file object.  No rows gives a
    header-only file.
    """
    lines = [CSV_HEADER]
    for r in rows:
        rep = r.report
        lines.append(
            ",".join(
                [
                    _csv_cell(r.theta),
                    _csv_cell(rep.qfi),
                    _csv_cell(rep.first_moment_term),
                    _csv_cell(rep.second_moment_term),
                    _csv_cell(rep.wigner_fisher),
                    _csv_cell(r.homodyne_opt),
                    _csv_cell(rep.ratio),
                    rep.method,
                    r.warnings,
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _parser(cmd: str, description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=f"gaussqfi {cmd}", description=description)
    p.add_argument("config", help="JSON model document")
    return p


def _cmd_qfi(argv: list[str]) -> int:
    p = _parser("qfi", "Evaluate the quantum Fisher information of one model.")
    p.add_argument("--tol", type=float, default=1e-9, help="kernel threshold (default 1e-9)")
    args = p.parse_args(argv)
    cfg = load_model_config(args.config)
    rep = qfi_general(cfg.point, args.tol)
    print(f"# gaussqfi qfi: tol = {args.tol:g}")
    print(f"model = {cfg.label} (n = {cfg.point.n})")
    print(f"qfi = {rep.qfi:.12g}")
    print(f"qfi_first_moment = {rep.first_moment_term:.12g}")
    print(f"qfi_second_moment = {rep.second_moment_term:.12g}")
    print(f"wigner_fisher = {rep.wigner_fisher:.12g}")
    print(f"ratio = {rep.ratio:.12g}")
    print(f"method = {rep.method}")
    print(f"range_residual = {rep.range_residual:.6g}")
    try:
        hopt = optimal_homodyne_fisher(isothermal_frame(cfg.point))
        print(f"homodyne_opt = {hopt:.12g}")
    except PreconditionError as exc:
        print(f"homodyne_opt = unavailable ({exc.flag})")
    return 0


def _cmd_sweep(argv: list[str]) -> int:
    p = _parser("sweep", "Evaluate a theta grid and emit CSV.")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True, help="number of grid points (>= 1)")
    p.add_argument("--out", default=None, help="CSV destination (default stdout)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
    p.add_argument("--tol", type=float, default=1e-9, help="kernel threshold (default 1e-9)")
    args = p.parse_args(argv)
    if args.steps < 1:
        raise ConfigError(f"--steps must be >= 1, got {args.steps}")
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    cfg = load_model_config(args.config)
    print(
        f"# gaussqfi sweep: model = {cfg.label}, from = {args.start:g}, "
        f"to = {args.stop:g}, steps = {args.steps}, tol = {args.tol:g}, "
        f"jobs = {args.jobs}",
        file=sys.stderr,
    )
    thetas = np.linspace(args.start, args.stop, args.steps)
    rows = sweep_rows(cfg.family, thetas, tol=args.tol, jobs=args.jobs)
    emit_csv(rows, sys.stdout if args.out is None else args.out)
    return 0


def _cmd_sld(argv: list[str]) -> int:
    p = _parser("sld", "Print the SLD observable of one model.")
    p.add_argument("--tol", type=float, default=1e-9, help="kernel threshold (default 1e-9)")
    args = p.parse_args(argv)
    cfg = load_model_config(args.config)
    coeffs = sld_coefficients(cfg.point, args.tol)
    print(f"# gaussqfi sld: tol = {args.tol:g}")
    print(f"model = {cfg.label} (n = {cfg.point.n})")
    print("L (quadratic coefficients, centered variables):")
    print(_matrix_lines(coeffs.L))
    print(f"b (linear coefficients) = {_vector_line(coeffs.b)}")
    print(f"c (offset) = {coeffs.c:.12g}")
    print(f"range_residual = {coeffs.range_residual:.6g}")
    form = photon_counting_form(coeffs, cfg.point, args.tol)
    if form is None:
        print(
            "photon-counting form: none "
            "(linear model, indefinite d(Gamma^-1), or degenerate L)"
        )
    else:
        print("photon-counting form: L_hat = sum_k 2*alpha_k*(N_k - <N_k>)")
        print(f"  alpha = {_vector_line(form.alpha)}")
        print(f"  mean_photon = {_vector_line(form.mean_photon)}")
        print("  mode frame T:")
        print(_matrix_lines(form.T, indent="    "))
    return 0


def _cmd_homodyne(argv: list[str]) -> int:
    p = _parser("homodyne", "Optimal homodyne analysis of an equal-temperature model.")
    p.add_argument("--tol", type=float, default=1e-8, help="frame tolerance (default 1e-8)")
    p.add_argument(
        "--random-U", dest="random_u", type=int, default=0,
        help="also probe N random symplectic measurement frames",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for --random-U (default 0)")
    args = p.parse_args(argv)
    cfg = load_model_config(args.config)
    frame = isothermal_frame(cfg.point, args.tol)
    best = optimal_homodyne_fisher(frame)
    print(f"# gaussqfi homodyne: tol = {args.tol:g}")
    print(f"model = {cfg.label} (n = {cfg.point.n})")
    print(f"nu = {frame.nu:.12g}")
    print(f"lam = {_vector_line(frame.lam)}")
    print(f"optimal_fisher = {best:.12g}")
    print("normal frame T:")
    print(_matrix_lines(frame.T))
    if args.random_u > 0:
        rng = np.random.default_rng(args.seed)
        worst_slack = math.inf
        violations = 0
        for _ in range(args.random_u):
            U = random_symplectic(frame.n, seed=rng)
            fisher = homodyne_fisher(frame, U)
            worst_slack = min(worst_slack, best - fisher)
            if fisher > best + 1e-9:
                violations += 1
        print(
            f"random-U probe: N = {args.random_u}, seed = {args.seed}, "
            f"min slack = {worst_slack:.6g}, violations = {violations}"
        )
    return 0


def _cmd_oracle_check(argv: list[str]) -> int:
    p = _parser("oracle-check", "Cross-check the engine against the Fock oracle.")
    p.add_argument("--cutoff", type=int, required=True, help="per-mode Fock dimension")
    p.add_argument("--h", type=float, default=1e-4, help="finite-difference step (default 1e-4)")
    p.add_argument("--tol", type=float, default=1e-9, help="kernel threshold (default 1e-9)")
    args = p.parse_args(argv)
    cfg = load_model_config(args.config)
    rep = qfi_general(cfg.point, args.tol)
    probe = qfi_fock_probe(cfg.family, cfg.theta, args.cutoff, args.h)
    coeffs = sld_coefficients(cfg.point, args.tol)
    resid = sld_residual(cfg.point, coeffs, args.cutoff, args.h)
    ident = identity_checks(cfg.point, args.cutoff)
    gap = abs(rep.qfi - probe.value)
    rel = gap / abs(rep.qfi) if rep.qfi != 0.0 else math.nan
    print(f"# gaussqfi oracle-check: cutoff = {args.cutoff}, h = {args.h:g}, tol = {args.tol:g}")
    print(f"model = {cfg.label} (n = {cfg.point.n})")
    print(f"engine_qfi = {rep.qfi:.12g}")
    print(f"oracle_qfi = {probe.value:.12g}")
    print(f"abs_diff = {gap:.6g}")
    print(f"rel_diff = {rel:.6g}")
    print(f"cutoff_shift (D -> D+10) = {probe.cutoff_shift:.6g}")
    print(f"step_shift (h -> h/2) = {probe.step_shift:.6g}")
    print(f"sld_residual = {resid:.6g}")
    print(f"identity displacement_dev = {ident.displacement_dev:.6g}")
    print(f"identity covariance_dev = {ident.covariance_dev:.6g}")
    print(f"identity char_dev = {ident.char_dev:.6g}")
    print(f"identity fourth_moment_dev = {ident.fourth_moment_dev:.6g}")
    print(f"tail_mass = {ident.tail_mass:.6g}")
    return 0


_HANDLERS = {
    "qfi": _cmd_qfi,
    "sweep": _cmd_sweep,
    "sld": _cmd_sld,
    "homodyne": _cmd_homodyne,
    "oracle-check": _cmd_oracle_check,
}


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    args = list(sys.argv[1:]) if argv is None else list(argv)
    if not args:
        sys.stderr.write(_USAGE)
        return 64
    if args[0] in ("-h", "--help"):
        sys.stdout.write(_USAGE)
        return 0
    handler = _HANDLERS.get(args[0])
    if handler is None:
        sys.stderr.write(f"unknown subcommand: {args[0]!r}\n")
        sys.stderr.write(_USAGE)
        return 64
    try:
        return handler(args[1:])
    except SystemExit as exc:  # argparse --help (0) or usage errors (2)
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

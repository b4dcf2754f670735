"""
Command-line entry point.

    tcsim coeffs  --n 7 --g 5 --kappa 5 --t 0.5
    tcsim sweep   --n 7 --g 5 --kappa 5 --backends analytic,circuit --shots 40000 --format svg
    tcsim qasm    --n 3 --g 2 --kappa 5 --t 0.5 [--measure] [--out FILE]
    tcsim sample  --n 3 --g 2 --kappa 5 --t 0.5 --shots 10000 --seed 42
    tcsim compare --n 2 --g 10 --kappa 5 --backends analytic,qme --tol 1e-5

Exit status: 0 on success, 1 when ``compare`` exceeds ``--tol``, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analytic
from .analytic import TCParams
from .circuit import angles_from_coefficients, build_circuit, export_qasm
from .errors import TCSimError
from .statevector import run_circuit, sample_counts
from .sweep import (
    BACKENDS,
    DEFAULT_SEED,
    DEFAULT_STEPS,
    DEFAULT_T_MAX,
    SweepSpec,
    emit_csv,
    emit_json,
    emit_svg,
    run_sweep,
)

EXIT_OK, EXIT_TOL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _backend_list(text: str) -> tuple[str, ...]:
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [n for n in names if n not in BACKENDS]
    if bad:
        raise argparse.ArgumentTypeError(
            f"unknown backend(s) {', '.join(bad)}; choose from {', '.join(BACKENDS)}"
        )
    return names


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="number of atoms")
    common.add_argument("--g", type=float, required=True, help="coupling rate")
    common.add_argument("--kappa", type=float, required=True, help="cavity loss rate")
    common.add_argument(
        "--c0",
        type=_float_list,
        default=None,
        help="initial atomic amplitudes, comma separated (default: atom 1 excited)",
    )
    common.add_argument("--out", default=None, help="write output to this file")

    single = argparse.ArgumentParser(add_help=False)
    single.add_argument("--t", type=float, required=True, help="evaluation time")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--t-max", type=float, default=DEFAULT_T_MAX, help="end of the time grid")
    grid.add_argument("--steps", type=int, default=DEFAULT_STEPS, help="number of grid points")
    grid.add_argument(
        "--backends",
        type=_backend_list,
        default=("analytic",),
        help="comma separated subset of analytic,circuit,qme,volterra",
    )
    grid.add_argument(
        "--shots", type=int, default=None, help="sample the circuit backend (default: exact)"
    )
    grid.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="sampling seed")

    parser = argparse.ArgumentParser(
        prog="tcsim", description="Single-excitation open Tavis-Cummings toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("coeffs", parents=[common, single], help="print c_n(t) at one time")

    p = sub.add_parser("sweep", parents=[common, grid], help="populations over a time grid")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv", help="output format")
    p.add_argument("--timings", action="store_true", help="add wall-clock times to JSON")

    p = sub.add_parser("qasm", parents=[common, single], help="OpenQASM 2.0 circuit for one t")
    p.add_argument("--measure", action="store_true", help="append measurements")

    p = sub.add_parser("sample", parents=[common, single], help="shot histogram for one t")
    p.add_argument("--shots", type=int, default=40000, help="number of shots")
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="sampling seed")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")

    p = sub.add_parser("compare", parents=[common, grid], help="pairwise backend differences")
    p.add_argument(
        "--tol", type=float, default=1e-6, help="largest allowed pairwise difference"
    )
    return parser


def _params(args) -> TCParams:
    coeffs = args.c0 if args.c0 is not None else ()
    return TCParams(args.n, args.g, args.kappa, coeffs)


def _check_time(t: float) -> None:
    if not t >= 0:
        raise _UsageError(f"--t must be >= 0, got {t}")


def _cmd_coeffs(args) -> tuple[str, int]:
    _check_time(args.t)
    c = analytic.coefficients(_params(args), args.t)
    header = ",".join(["t"] + [f"c_s{n + 1}" for n in range(c.values.size)])
    row = ",".join([repr(float(args.t))] + [repr(float(v)) for v in c.values])
    return f"{header}\n{row}\n", EXIT_OK


def _spec(args) -> SweepSpec:
    return SweepSpec(
        params=_params(args),
        t_max=args.t_max,
        steps=args.steps,
        backends=args.backends,
        shots=args.shots,
        seed=args.seed,
    )


def _cmd_sweep(args) -> tuple[str, int]:
    report = run_sweep(_spec(args))
    if args.format == "csv":
        return emit_csv(report), EXIT_OK
    if args.format == "json":
        return emit_json(report, include_timing=args.timings), EXIT_OK
    return emit_svg(report), EXIT_OK


def _circuit_at(args):
    _check_time(args.t)
    coeffs = analytic.coefficients(_params(args), args.t)
    return build_circuit(angles_from_coefficients(coeffs))


def _cmd_qasm(args) -> tuple[str, int]:
    return export_qasm(_circuit_at(args), with_measurement=args.measure), EXIT_OK


def _cmd_sample(args) -> tuple[str, int]:
    if args.shots < 1:
        raise _UsageError("--shots must be >= 1")
    hist = sample_counts(run_circuit(_circuit_at(args)), args.shots, args.seed)
    counts = hist.bitstring_counts()
    if args.format == "json":
        doc = {"shots": hist.shots, "seed": hist.seed, "counts": counts}
        return json.dumps(doc, indent=2) + "\n", EXIT_OK
    lines = ["outcome,count"] + [f"{k},{v}" for k, v in counts.items()]
    return "\n".join(lines) + "\n", EXIT_OK


def _cmd_compare(args) -> tuple[str, int]:
    report = run_sweep(_spec(args))
    names = report.backends
    lines = [",".join(["backend", *names])]
    worst = 0.0
    for i, a in enumerate(names):
        lines.append(",".join([a, *(f"{v:.3e}" for v in report.diff_matrix[i])]))
        worst = max([worst, *report.diff_matrix[i]])
    ok = worst <= args.tol
    lines.append(f"max_abs_diff={worst:.3e} tol={args.tol:.3e} {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_TOL


_COMMANDS = {
    "coeffs": _cmd_coeffs,
    "sweep": _cmd_sweep,
    "qasm": _cmd_qasm,
    "sample": _cmd_sample,
    "compare": _cmd_compare,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = _COMMANDS[args.command](args)
    except (TCSimError, ValueError, _UsageError) as exc:
        parser.print_usage(sys.stderr)
        print(f"tcsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

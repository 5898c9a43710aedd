"""Command-line entry point: ``photon-trk {report,sweep,transmission,spectrum} MODEL_FILE``.

Exit codes: 0 success, 2 invalid input (unreadable file, bad model, bad
arguments), 3 numerical failure.  Every float is written with 12
significant digits; ``--out -`` writes to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis
from .linalg import ConvergenceError, NotHermitianError
from .models import ModelError, build
from .modelspec import ModelFile, ModelSpecError, load_path
from .response import decay_rates, integrate_lines, linear_response_oracle, transmission
from .sumrules import diagonalize_model, matrix_elements, sum_rule_report

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def fmt(x) -> str:
    x = float(x)
    if x == 0:
        x = 0.0
    return format(x, ".12g")


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(c if isinstance(c, str) else fmt(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(path: str) -> ModelFile:
    try:
        return load_path(path)
    except OSError as exc:
        raise UsageError(f"cannot read model file {path!r}: {exc.strerror or exc}") from None


def cmd_report(args) -> str:
    mf = _load(args.model_file)
    model = build(mf.model)
    spec = diagonalize_model(model)
    try:
        rep = sum_rule_report(model, spec, mode=args.mode, ref=args.ref, levels=args.levels)
    except (KeyError, IndexError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    if args.format == "json":
        doc = {
            "kind": mf.model.kind,
            "mode": rep.mode_label,
            "reference_state": rep.reference_state,
            "levels": rep.levels,
            "total": float(fmt(rep.total)),
            "momentum_total": float(fmt(rep.momentum_total)),
            "quadrature_residual_max": float(fmt(rep.quadrature_residual_max)),
            "generalized_identity_deviation": float(fmt(rep.generalized_identity_deviation)),
            "degenerate_momentum_terms": list(rep.degenerate_momentum_terms),
            "rows": [
                {
                    "k": k,
                    "omega_k": float(fmt(rep.omegas[k])),
                    "abs_Q_ik_sq": float(fmt(rep.abs_q_sq[k])),
                    "abs_P_ik_sq": float(fmt(rep.abs_p_sq[k])),
                    "F_ik": float(fmt(rep.F_terms[k])),
                    "partial_sum": float(fmt(rep.partial_sums[k])),
                    "quad_residual": float(fmt(rep.quad_residual[k])),
                }
                for k in range(rep.levels)
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    header = ["k", "omega_k", "abs_Q_ik_sq", "abs_P_ik_sq", "F_ik", "partial_sum", "quad_residual"]
    rows = [
        [str(k), rep.omegas[k], rep.abs_q_sq[k], rep.abs_p_sq[k], rep.F_terms[k], rep.partial_sums[k],
         rep.quad_residual[k]]
        for k in range(rep.levels)
    ]
    return csv_text(header, rows)


def cmd_sweep(args) -> str:
    mf = _load(args.model_file)
    if mf.sweep is None:
        raise UsageError("model file has no [sweep] section")
    s = mf.sweep
    rows = analysis.run_sweep(mf.model, s.param, s.values(), levels=args.levels, mode=args.mode, jobs=args.jobs)
    k = len(rows[0].omegas) if rows else args.levels
    header = [s.param] + [f"omega[{i}]" for i in range(k)] + [
        "abs_Q_10_sq", "abs_P_10_sq", "scaled_Q_10_sq", "sum_rule_total"
    ]
    body = [
        [r.value, *r.omegas, r.abs_q10_sq, r.abs_p10_sq, r.scaled_q10_sq, r.sum_rule_total] for r in rows
    ]
    return csv_text(header, body)


def _lines_path(args) -> str | None:
    if args.lines_out:
        return args.lines_out
    if args.out == "-":
        return None
    p = Path(args.out)
    return str(p.with_name(p.stem + "_lines" + (p.suffix or ".csv")))


def cmd_transmission(args) -> tuple[str, tuple[str, str] | None]:
    mf = _load(args.model_file)
    if mf.response is None:
        raise UsageError("model file has no [response] section")
    r = mf.response
    if args.alpha is not None:
        if not (args.alpha > 0 and np.isfinite(args.alpha)):
            raise UsageError(f"--alpha must be a positive finite number, got {args.alpha!r}")
        r = replace(r, alpha=args.alpha)
    model = build(mf.model)
    spec = diagonalize_model(model)
    try:
        mode = model.mode(args.mode or model.modes[0].label)
    except KeyError as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    rates = decay_rates(spec, matrix_elements(spec, mode.Q).elements, r.alpha)
    grid = r.grid()
    curve = transmission(spec, rates, grid, linewidth=r.linewidth, with_lines=False)
    header = ["omega", "T"]
    cols = [grid, curve.T_values]
    if args.oracle:
        oracle = linear_response_oracle(model, r.alpha, grid, mode=mode.label, linewidth=r.linewidth, spec=spec)
        header.append("T_oracle")
        cols.append(oracle.T_values)
    main = csv_text(header, list(zip(*cols)))
    lines = integrate_lines(spec, rates, linewidth=r.linewidth)
    lines_csv = csv_text(
        ["k", "omega_k0", "Gamma_k0", "Gamma_k", "weight_analytic", "weight_numeric"],
        [[str(l.k), l.omega_k0, l.gamma_k0, l.gamma_k, l.analytic, l.numeric] for l in lines],
    )
    path = _lines_path(args)
    return main, ((path, lines_csv) if path else None)


def cmd_spectrum(args) -> str:
    mf = _load(args.model_file)
    spec = diagonalize_model(build(mf.model))
    k = min(args.levels, spec.dim)
    return csv_text(["k", "omega_k"], [[str(i), spec.omegas[i]] for i in range(k)])


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photon-trk", description="Dressed-state TRK sum rules for light-matter models")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, levels):
        p.add_argument("model_file", help="model definition file")
        p.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
        p.add_argument("--levels", type=_positive_int, default=levels, help="number of levels to report")
        return p

    p = common(sub.add_parser("report", help="sum-rule report of one mode from one reference level"), 10)
    p.add_argument("--mode", default=None, help="mode label (a, b) or x for the particle coordinate")
    p.add_argument("--ref", type=int, default=0, help="reference level i")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = common(sub.add_parser("sweep", help="scan the [sweep] parameter"), 6)
    p.add_argument("--mode", default=None)
    p.add_argument("--jobs", type=_positive_int, default=None, help=f"worker processes (fallback: ${analysis.JOBS_ENV})")

    p = common(sub.add_parser("transmission", help="two-port transmission spectrum"), 10)
    p.add_argument("--mode", default=None)
    p.add_argument("--alpha", type=float, default=None, help="override the [response] coupling constant")
    p.add_argument("--oracle", action="store_true", help="add the master-equation linear-response column")
    p.add_argument("--lines-out", default=None, help="path of the per-line CSV (default: <out>_lines.csv)")

    common(sub.add_parser("spectrum", help="lowest dressed frequencies"), 10)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "transmission":
            text, lines = cmd_transmission(args)
            emit(text, args.out)
            if lines:
                emit(lines[1], lines[0])
        else:
            handler = {"report": cmd_report, "sweep": cmd_sweep, "spectrum": cmd_spectrum}[args.command]
            emit(handler(args), args.out)
    except (UsageError, ModelSpecError, ModelError, ValueError) as exc:
        if isinstance(exc, (ConvergenceError, NotHermitianError)):
            print(f"photon-trk: numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        print(f"photon-trk: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ConvergenceError, np.linalg.LinAlgError, MemoryError, FloatingPointError) as exc:
        print(f"photon-trk: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"photon-trk: error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point for the verification case studies.

Exit codes: 0 when the certificate's overall verdict is true, 1 when any
check failed, 2 on a runtime failure (bad arguments, I/O, integration
aborts that escape the case runner).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from .cases import CASES, run_case

CSV_HEADER = ("case", "piece_id", "x_lo", "x_hi", "y_lo", "y_hi")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="valid-ode",
        description="Run a rigorous ODE verification case study and emit "
                    "a machine-checkable certificate.",
    )
    p.add_argument("case", choices=sorted(CASES))
    p.add_argument("--order", type=int, default=None,
                   help="Taylor method order override")
    p.add_argument("--tolerance", type=float, default=None,
                   help="per-step truncation tolerance override")
    p.add_argument("--subdivisions", type=int, default=None,
                   help="number of initial subdivision pieces")
    p.add_argument("--output", default=None,
                   help="file to write; report figures are rendered next to it")
    p.add_argument("--format", choices=("json", "csv-enclosures"),
                   default="json", dest="fmt")
    return p


def emit_enclosures(rows, path_or_stream) -> None:
    """Write enclosure rectangles as delimited rows for external plotting."""

    def _write(stream):
        w = csv.writer(stream)
        w.writerow(CSV_HEADER)
        for case, pid, x_lo, x_hi, y_lo, y_hi in rows:
            w.writerow([case, pid, repr(x_lo), repr(x_hi), repr(y_lo), repr(y_hi)])

    if isinstance(path_or_stream, str):
        with open(path_or_stream, "w", newline="") as fh:
            _write(fh)
    else:
        _write(path_or_stream)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.subdivisions is not None and args.subdivisions < 1:
        print("error: --subdivisions must be >= 1", file=sys.stderr)
        return 2
    try:
        outcome = run_case(args.case, order=args.order,
                           tolerance=args.tolerance,
                           subdivisions=args.subdivisions)
    except Exception as exc:  # noqa: BLE001 - the contract is exit code 2
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cert = outcome.certificate
    try:
        if args.fmt == "json":
            doc = cert.to_json()
            if args.output:
                with open(args.output, "w") as fh:
                    fh.write(doc + "\n")
            else:
                print(doc)
        else:
            if args.output:
                emit_enclosures(outcome.rows, args.output)
                figure = os.path.splitext(args.output)[0] + ".png"
                from .plotting import render_enclosures

                render_enclosures(figure, outcome.rows, frame=outcome.frame,
                                  title=args.case,
                                  xlabel=outcome.axis_labels[0],
                                  ylabel=outcome.axis_labels[1])
            else:
                emit_enclosures(outcome.rows, sys.stdout)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for check in cert.checks:
        if not check.passed:
            print(f"failed: {check.description} "
                  f"(bound [{check.bound[0]!r}, {check.bound[1]!r}])",
                  file=sys.stderr)
    return 0 if cert.overall else 1


if __name__ == "__main__":
    sys.exit(main())

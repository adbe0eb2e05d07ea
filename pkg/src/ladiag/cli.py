"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import datasets
from ._validation import DataError, NumericalError
from .classical import classical_flags
from .detectors import detect_leverage, detect_outliers
from .lad import fit_lad
from .scores import compute_scores, score_summary

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 1, 2, 3
COMMANDS = ("fit", "scores", "diagnose", "compare", "simulate")
COMPARE_DEFAULTS = ("telephone", "hawkins", "scottish", "twovariables", "threevariables")
HADI_FOOTER = "Hadi's P-R plot method is not reproduced; its rows are omitted."


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ladiag",
                     description="LAD regression and leave-one-out influence diagnostics.")
    parser.add_argument("command", choices=COMMANDS)
    src = parser.add_mutually_exclusive_group()
    src.add_argument("--data", metavar="PATH", help="CSV file with a header row")
    src.add_argument("--bundled", metavar="NAME",
                     help=f"one of {', '.join(sorted(datasets.BUNDLED))}")
    src.add_argument("--generate", metavar="NAME", help=f"one of {', '.join(datasets.GENERATED)}")
    parser.add_argument("--seed", type=int, default=None, help="seed for --generate")
    parser.add_argument("--response", default=None,
                        help="response column name or index (default: last column)")
    parser.add_argument("--delimiter", default=",")
    parser.add_argument("--format", dest="output_format", choices=("table", "csv", "json"),
                        default="table")
    parser.add_argument("--outlier-rule", choices=("one", "two"), default="two",
                        help="studentized residual cut-off for the classical comparator")
    parser.add_argument("--trace", action="store_true", help="print the per-round audit log")
    parser.add_argument("--threads", default="1", help="threads for subset fits, or 'auto'")
    parser.add_argument("--output", metavar="PATH", help="simulate: write the CSV here")
    return parser


def _threads(value):
    if value == "auto":
        return "auto"
    try:
        n = int(value)
    except ValueError:
        raise UsageError(f"--threads must be a positive integer or 'auto', got {value!r}") from None
    if n < 1:
        raise UsageError("--threads must be positive")
    return n


def _load(args, name=None):
    if name is not None:
        if name in datasets.BUNDLED:
            return name, datasets.bundled(name)
        return name, datasets.generate(name, 0 if args.seed is None else args.seed)
    if args.data:
        response = -1 if args.response is None else args.response
        return args.data, datasets.load_csv(args.data, response, args.delimiter)
    if args.bundled:
        return args.bundled, datasets.bundled(args.bundled)
    if args.generate:
        if args.seed is None:
            raise UsageError("--generate requires --seed")
        return args.generate, datasets.generate(args.generate, args.seed)
    raise UsageError("one of --data, --bundled or --generate is required")


def format_labels(labels) -> str:
    """Sorted labels with runs of three or more collapsed, e.g. ``3-6, 9, 10``."""
    labels = sorted(int(v) for v in labels)
    if not labels:
        return "-"
    parts, start = [], 0
    for i in range(1, len(labels) + 1):
        if i == len(labels) or labels[i] != labels[i - 1] + 1:
            run = labels[start:i]
            if len(run) >= 3:
                parts.append(f"{run[0]}-{run[-1]}")
            else:
                parts.extend(str(v) for v in run)
            start = i
    return ", ".join(parts)


def _fmt(v):
    return f"{v:.10g}"


def _table(rows, header):
    widths = [max(len(str(r[j])) for r in [header] + rows) for j in range(len(header))]
    line = lambda r: "  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([line(header), line(["-" * w for w in widths])] + [line(r) for r in rows])


def _csv(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def cmd_fit(args, out):
    name, data = _load(args)
    fit = fit_lad(data)
    in_basis = set(fit.basis)
    rows = [[int(lab), _fmt(r), "yes" if int(lab) in in_basis else ""]
            for lab, r in zip(data.labels, fit.residuals)]
    if args.output_format == "json":
        out.write(json.dumps({
            "dataset": name, "beta": fit.beta.tolist(), "objective": fit.objective,
            "basis": list(fit.basis), "degenerate": fit.degenerate,
            "residuals": fit.residuals.tolist()}) + "\n")
    elif args.output_format == "csv":
        out.write(_csv(rows, ["label", "residual", "basis"]) + "\n")
    else:
        out.write(f"dataset: {name}\n")
        out.write("beta: " + " ".join(_fmt(b) for b in fit.beta) + "\n")
        out.write(f"objective: {_fmt(fit.objective)}\n")
        out.write("basis: " + ", ".join(str(b) for b in fit.basis) + "\n")
        out.write(f"degenerate: {str(fit.degenerate).lower()}\n\n")
        out.write(_table(rows, ["label", "residual", "basis"]) + "\n")


def cmd_scores(args, out):
    name, data = _load(args)
    table = compute_scores(data, n_jobs=_threads(args.threads))
    summary = score_summary(table)
    if args.output_format == "json":
        out.write(json.dumps({"dataset": name, **table.as_dict(),
                              "by_l": [list(r) for r in summary["by_l"]],
                              "by_o": [list(r) for r in summary["by_o"]]}) + "\n")
        return
    rows = [[key, rank, lab, l, o] for key in ("by_l", "by_o")
            for rank, (lab, l, o) in enumerate(summary[key], start=1)]
    if args.output_format == "csv":
        out.write(_csv(rows, ["ordering", "rank", "label", "L", "O"]) + "\n")
        return
    out.write(f"dataset: {name}  n={table.n}  p={table.p}\n")
    if table.degenerate_subsets:
        out.write("degenerate subsets (deleted label): "
                  + ", ".join(str(v) for v in table.degenerate_subsets) + "\n")
    for key, title in (("by_l", "ordered by L"), ("by_o", "ordered by O")):
        out.write(f"\n{title}\n")
        out.write(_table([[lab, l, o] for lab, l, o in summary[key]], ["label", "L", "O"]) + "\n")


def cmd_diagnose(args, out):
    name, data = _load(args)
    threads = _threads(args.threads)
    lev = detect_leverage(data, n_jobs=threads)
    outl = detect_outliers(data, n_jobs=threads)
    if args.output_format == "json":
        payload = {"dataset": name, "leverage": lev.to_dict(), "outliers": outl.to_dict()}
        if not args.trace:
            for rep in ("leverage", "outliers"):
                del payload[rep]["rounds"]
        out.write(json.dumps(payload) + "\n")
        return
    if args.output_format == "csv":
        rows = [[kind, order, lab] for kind, rep in (("leverage", lev), ("outlier", outl))
                for order, lab in enumerate(rep.flagged, start=1)]
        out.write(_csv(rows, ["kind", "order", "label"]) + "\n")
    else:
        out.write(f"dataset: {name}\n")
        out.write(f"leverage points: {format_labels(lev.flagged)}  ({lev.stop_reason})\n")
        out.write(f"outliers: {format_labels(outl.flagged)}  ({outl.stop_reason})\n")
    if args.trace:
        out.write("\n" + lev.audit_log() + "\n" + outl.audit_log() + "\n")


def compare_rows(name, data, outlier_rule="two-sided", n_jobs=1):
    """Table-1 style rows: ``(dataset, method, leverages, outliers)``."""
    classical = classical_flags(data, outlier_rule=outlier_rule)
    lev = detect_leverage(data, n_jobs=n_jobs)
    outl = detect_outliers(data, n_jobs=n_jobs)
    return [
        (name, "Classical Method", list(classical.leverage_flags), list(classical.outlier_flags)),
        (name, "Our Results", sorted(lev.flagged), sorted(outl.flagged)),
    ]


def cmd_compare(args, out):
    threads = _threads(args.threads)
    rule = "two-sided" if args.outlier_rule == "two" else "one-sided"
    if args.data or args.bundled or args.generate:
        sources = [_load(args)]
    else:
        sources = [_load(args, name) for name in COMPARE_DEFAULTS]
    rows = []
    for name, data in sources:
        rows.extend(compare_rows(name, data, rule, threads))
    if args.output_format == "json":
        out.write(json.dumps([{"data": d, "method": m, "leverages": lv, "outliers": ol}
                              for d, m, lv, ol in rows]) + "\n")
        return
    if args.output_format == "csv":
        out.write(_csv([[d, m, format_labels(lv), format_labels(ol)] for d, m, lv, ol in rows],
                       ["data", "method", "leverages", "outliers"]) + "\n")
        return
    shown, prev = [], None
    for d, m, lv, ol in rows:
        shown.append(["" if d == prev else d, m, format_labels(lv), format_labels(ol)])
        prev = d
    out.write(_table(shown, ["Data", "Method", "Leverages", "Outliers"]) + "\n")
    out.write(f"\n{HADI_FOOTER}\n")


def cmd_simulate(args, out):
    if not args.generate:
        raise UsageError("simulate requires --generate NAME --seed N")
    _, data = _load(args)
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            datasets.write_csv(data, fh)
    else:
        datasets.write_csv(data, out)


HANDLERS = {"fit": cmd_fit, "scores": cmd_scores, "diagnose": cmd_diagnose,
            "compare": cmd_compare, "simulate": cmd_simulate}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        HANDLERS[args.command](args, stdout)
    except UsageError as exc:
        stderr.write(f"ladiag: usage error: {exc}\n")
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        stderr.write(f"ladiag: data error: {exc}\n")
        return EXIT_DATA
    except (NumericalError, np.linalg.LinAlgError) as exc:
        stderr.write(f"ladiag: numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

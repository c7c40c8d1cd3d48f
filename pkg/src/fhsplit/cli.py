"""Command line front end.

Exit codes: 0 success, 1 I/O failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import re
import sys
from statistics import fmean

from . import config, report
from ._io import emit
from .model import InvariantViolation, McsTable, SplitOption, get_preset, preset_bundles, reference_modulation_for
from .ratecalc import compute_rate_table, feasible_splits, reduction_percent, sweep_mcs

EXIT_OK, EXIT_IO, EXIT_USAGE = 0, 1, 2

_CAPACITY_UNITS = {"bps": 1.0, "kbps": 1e3, "Mbps": 1e6, "Gbps": 1e9, "Tbps": 1e12}
_CAPACITY_RE = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*([A-Za-z]+)\s*$")


class UsageError(Exception):
    pass


def parse_capacity(text: str) -> float:
    """``"10Gbps"`` -> ``1e10``."""
    match = _CAPACITY_RE.match(text)
    if not match or match.group(2) not in _CAPACITY_UNITS:
        raise UsageError(
            f"cannot parse capacity {text!r}; use a number with one of {', '.join(_CAPACITY_UNITS)}"
        )
    value = float(match.group(1)) * _CAPACITY_UNITS[match.group(2)]
    if not value > 0:
        raise UsageError("capacity must be > 0")
    return value


def parse_mcs_pairs(text: str) -> McsTable:
    """``"4:0.66,16:0.64"`` -> McsTable."""
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            m_text, rc_text = chunk.split(":")
            m, rc = int(m_text), float(rc_text)
        except ValueError:
            raise UsageError(f"bad MCS pair {chunk!r}; expected M:Rc") from None
        try:
            reference_modulation_for(m)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        pairs.append((m, rc))
    if not pairs:
        raise UsageError("empty MCS pair list")
    table = McsTable(tuple(pairs))
    problems = table.problems()
    if problems:
        raise UsageError("; ".join(problems))
    return table


def _select_bundles(args):
    bundles = []
    for path in args.config or ():
        bundles.append(config.load_bundle(path))
    presets = preset_bundles()
    for name in args.preset or ():
        key = name.lower()
        if key == "all":
            bundles.extend(presets.values())
        elif key.startswith("all-"):
            service = key[4:]
            chosen = [b for b in presets.values() if b.service.service.value.lower() == service]
            if not chosen:
                raise UsageError(f"unknown preset group {name!r}")
            bundles.extend(chosen)
        else:
            try:
                bundles.append(get_preset(name))
            except KeyError as exc:
                raise UsageError(exc.args[0]) from None
    if not bundles:
        raise UsageError("select at least one bundle with --config or --preset")
    if args.format in ("csv", "svg") and not args.out:
        raise UsageError(f"--out is required for --format {args.format}")
    return bundles


def _print_table(rows, out):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for row in rows:
        cells = [cell.ljust(w) if i == 0 else cell.rjust(w) for i, (cell, w) in enumerate(zip(row, widths))]
        print("  ".join(cells).rstrip(), file=out)


def cmd_compute(args, out):
    tables = [compute_rate_table(b) for b in _select_bundles(args)]
    if args.format == "csv":
        report.emit_csv(tables, args.out)
    elif args.format == "svg":
        report.emit_bar_chart_svg(tables, args.grouping, args.out)
    else:
        for i, table in enumerate(tables):
            if i:
                print(file=out)
            print(table.label, file=out)
            rows = [("option", "rate", "reduction vs Opt8")]
            for opt in sorted(table.entries):
                red = table.reduction(opt)
                rows.append((
                    opt.value,
                    report.format_rate_si(table.entries[opt]),
                    "n/a" if red is None else f"{red:.2f}%",
                ))
            _print_table(rows, out)
    return EXIT_OK


def cmd_sweep(args, out):
    bundles = _select_bundles(args)
    if args.mcs_pairs is not None:
        mcs = parse_mcs_pairs(args.mcs_pairs)
    elif args.mcs:
        mcs = config.load_mcs_table(args.mcs)
    else:
        tables = {b.mcs_table for b in bundles if b.mcs_table is not None}
        if len(tables) != 1:
            raise UsageError("provide an MCS table with --mcs or --mcs-pairs")
        mcs = tables.pop()
    sweeps = [(b, sweep_mcs(b, mcs)) for b in bundles]

    if args.format == "svg":
        if len(sweeps) != 1:
            raise UsageError("--format svg plots one bundle; select exactly one")
        report.emit_sweep_chart_svg(sweeps[0][1], args.out)
    elif args.format == "csv":
        text = "".join(
            report.sweep_csv_text(s).split("\n", 1)[1] if i else report.sweep_csv_text(s)
            for i, (_, s) in enumerate(sweeps)
        )
        emit(args.out, text)
    else:
        for i, (bundle, sweep) in enumerate(sweeps):
            if i:
                print(file=out)
            print(bundle.name, file=out)
            rows = [("M", "Rc", "Opt7_3", "Opt6", "Opt2", "Opt6/Opt7_3")]
            for m, rc, t in sweep:
                r73, r6, r2 = (t.entries[o] for o in report.SWEEP_OPTIONS)
                rows.append((
                    str(m),
                    f"{rc:g}",
                    report.format_rate_si(r73),
                    report.format_rate_si(r6),
                    report.format_rate_si(r2),
                    f"{r6 / r73:.4f}" if r73 > 0 else "n/a",
                ))
            _print_table(rows, out)
    return EXIT_OK


def cmd_compare(args, out):
    try:
        reference = SplitOption.parse(args.reference)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    tables = [compute_rate_table(b) for b in _select_bundles(args)]

    matrix = {}
    for opt in SplitOption:
        row = []
        for t in tables:
            ref = t.entries[reference]
            row.append(reduction_percent(ref, t.entries[opt]) if ref > 0 else None)
        matrix[opt] = row

    header = ["option"] + [t.label for t in tables] + ["average"]
    rows = [header]
    for opt, values in matrix.items():
        known = [v for v in values if v is not None]
        avg = fmean(known) if known else None
        rows.append(
            [opt.value]
            + [("n/a" if v is None else f"{v:.2f}%") for v in values]
            + ["n/a" if avg is None else f"{avg:.2f}%"]
        )

    if args.format == "csv":
        text = "\n".join(",".join(c.rstrip("%") for c in r) for r in rows) + "\n"
        emit(args.out, text)
    elif args.format == "svg":
        raise UsageError("compare supports --format text or csv")
    else:
        print(f"reduction vs {reference.value}", file=out)
        _print_table(rows, out)
    return EXIT_OK


def cmd_feasible(args, out):
    capacity = parse_capacity(args.capacity)
    tables = [compute_rate_table(b) for b in _select_bundles(args)]
    if args.format != "text":
        raise UsageError("feasible supports --format text only")
    print(f"feeder capacity {report.format_rate_si(capacity)}", file=out)
    for t in tables:
        options = feasible_splits(t, capacity)
        listed = ", ".join(o.value for o in options) if options else "no feasible split"
        print(f"{t.label}: {listed}", file=out)
    return EXIT_OK


def cmd_presets(args, out):
    for name in preset_bundles():
        print(f"{name}\t{config.fixture_path(name).name}", file=out)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", action="append", metavar="PATH", help="bundle file (repeatable)")
    common.add_argument(
        "--preset", action="append", metavar="NAME",
        help="preset name such as SC1-S-eMBB, or all / all-eMBB / all-mMTC (repeatable)",
    )
    common.add_argument("--out", metavar="PATH", help="output file for csv/svg")
    common.add_argument("--format", choices=("csv", "svg", "text"), default="text")

    parser = argparse.ArgumentParser(
        prog="fhsplit",
        description="Uplink fronthaul rates of RAN functional splits for non-terrestrial platforms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="rate per split option")
    p.add_argument("--grouping", choices=("by_scenario", "by_band"), default="by_scenario")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", parents=[common], help="options 7.3, 6, 2 vs MCS")
    p.add_argument("--mcs", metavar="PATH", help="file with an mcs_table list")
    p.add_argument("--mcs-pairs", metavar="M:RC,...", help='inline pairs, e.g. "4:0.66,16:0.64"')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", parents=[common], help="reduction matrix vs a reference option")
    p.add_argument("--reference", default="Opt8", help="reference split option (default Opt8)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("feasible", parents=[common], help="options fitting a feeder capacity")
    p.add_argument("--capacity", required=True, help='e.g. "10Gbps"; units bps, kbps, Mbps, Gbps, Tbps')
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("presets", help="list preset names and fixture files")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, config.ConfigError, InvariantViolation, ValueError) as exc:
        print(f"fhsplit {args.command}: error: {exc}", file=err)
        return EXIT_USAGE
    except OSError as exc:
        print(f"fhsplit {args.command}: I/O error: {exc}", file=err)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

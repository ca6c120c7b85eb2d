"""make-figures: render the QoE report panels from metrics CSV files.

    make-figures --out DIR [--topology FILE] metrics1.csv:label1 ...

Reads one or more per-user metrics CSVs (plus the topology CSV written next
to the first one, unless --topology points elsewhere) and emits four panels
as PNG and SVG: topology scatter and CDFs of average quality, pre-buffering
time, and rebuffering percentage.

Exit codes: 0 ok, 1 usage error, 2 bad or unreadable input data.
"""

import argparse
import os
import sys

from . import FiguresError, load_runs, load_topology
from .plots import render_panels

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit((USAGE_ERROR, f"error: {message}"))


def _build_parser() -> _Parser:
    p = _Parser(prog="make-figures", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("runs", nargs="+", metavar="CSV[:LABEL]",
                   help="metrics CSV with an optional curve label")
    p.add_argument("--out", required=True, help="output directory for the panels")
    p.add_argument("--topology", default=None,
                   help="topology CSV (default: topology.csv beside the first metrics file)")
    p.add_argument("--dpi", type=int, default=150)
    p.add_argument("--formats", default="png,svg", help="comma-separated image formats")
    return p


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, tuple):
            code, message = exc.code
            print(message, file=sys.stderr)
            return code
        return 0 if exc.code in (0, None) else USAGE_ERROR
    try:
        runs = load_runs(args.runs)
        topo_path = args.topology
        if topo_path is None:
            first = args.runs[0].rsplit(":", 1)[0] if ":" in args.runs[0] else args.runs[0]
            topo_path = os.path.join(os.path.dirname(os.path.abspath(first)), "topology.csv")
        topology = load_topology(topo_path)
        formats = tuple(f.strip() for f in args.formats.split(",") if f.strip())
        if not formats:
            print("error: --formats lists no formats", file=sys.stderr)
            return USAGE_ERROR
        written = render_panels(runs, topology, args.out, formats, args.dpi)
    except FiguresError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    for path in written:
        print(path)
    return 0


def entry():
    raise SystemExit(main())

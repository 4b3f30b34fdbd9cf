"""Command-line entry point: ``report --in DIR --out DIR [--figures ...]``."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURES, ReportJob, render
from .io import ReportError

__all__ = ["main"]


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="report",
        description="Render figures from damped-wave laboratory CSV/JSON "
                    "outputs (read-only; no physics is recomputed).",
    )
    p.add_argument("--in", dest="indir", required=True,
                   help="directory holding the CSV/JSON artifact files")
    p.add_argument("--out", dest="outdir", required=True,
                   help="directory to write figures and report.html into")
    p.add_argument("--figures", nargs="*", default=None,
                   metavar="NAME", help=f"subset of {sorted(FIGURES)}; "
                   "default renders all")
    p.add_argument("--formats", nargs="+", default=["svg", "png"],
                   choices=["svg", "png", "pdf"],
                   help="output formats (default: svg png)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        figures = None if args.figures is None else tuple(args.figures)
        job = ReportJob(args.indir, figures, tuple(args.formats))
        rendered = render(job, args.outdir)
    except ReportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for name, files in rendered.items():
        print(f"{name}: {', '.join(files)}")
    print(f"index: {args.outdir}/report.html")
    return 0


if __name__ == "__main__":
    sys.exit(main())

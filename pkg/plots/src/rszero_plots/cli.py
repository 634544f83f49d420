"""Command-line figure generation: a spec file or mirroring flags.

Exit codes: 0 success, 1 usage or malformed input.
"""

from __future__ import annotations

import argparse
import sys

from .core import PlotDataError, PlotSpec, load_spec, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rszero-plot",
        description="Draw mean/std convergence curves from aggregate CSV files.",
    )
    parser.add_argument("--spec", default=None, help="YAML plot spec file")
    parser.add_argument(
        "--input",
        action="append",
        default=[],
        metavar="CSV:LABEL",
        help="aggregate CSV and its legend label, repeatable",
    )
    parser.add_argument("--output", default=None, help="output image path (.png/.svg/.pdf)")
    parser.add_argument("--transform", default="log", choices=["log", "loglog-inner"])
    parser.add_argument("--title", default="")
    return parser


def _spec_from_flags(args) -> PlotSpec:
    inputs = []
    for entry in args.input:
        if ":" not in entry:
            raise PlotDataError(f"--input needs CSV:LABEL, got {entry!r}")
        path, label = entry.rsplit(":", 1)
        inputs.append((path, label))
    if args.output is None:
        raise PlotDataError("--output is required without --spec")
    return PlotSpec(
        inputs=tuple(inputs),
        output=args.output,
        transform=args.transform,
        title=args.title,
    )


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        spec = load_spec(args.spec) if args.spec else _spec_from_flags(args)
        out = render(spec)
    except (PlotDataError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

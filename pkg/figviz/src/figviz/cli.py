"""figviz command line: render figures from plain TOML specs.

Exit codes: 0 success, 64 bad invocation or config, 65 input schema
mismatch (message lists the columns found), 66 missing input file.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_spec
from .render import MissingInputError, SchemaError, render

EXIT_OK = 0
EXIT_USAGE = 64
EXIT_SCHEMA = 65
EXIT_MISSING = 66


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figviz",
        description="Render benchmark figures from simulator CSV outputs.",
    )
    parser.add_argument("specs", nargs="+", metavar="SPEC.toml",
                        help="figure spec file(s)")
    parser.add_argument("--quiet", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    for spec_path in args.specs:
        try:
            spec = load_spec(spec_path)
            report = render(spec)
        except ConfigError as exc:
            print(f"figviz: config error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except SchemaError as exc:
            print(f"figviz: schema mismatch: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
        except MissingInputError as exc:
            print(f"figviz: {exc}", file=sys.stderr)
            return EXIT_MISSING
        if not args.quiet:
            note = " (negative region marked)" if report.negative_marked else ""
            print(f"wrote {report.output} [{report.n_panels} panel(s)]{note}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

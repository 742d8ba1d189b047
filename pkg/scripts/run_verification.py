#!/usr/bin/env python3
"""Run the full verification battery and write the JSON report.

Usage:
    python scripts/run_verification.py [report.json] [--digits N] [--order N]

Thin wrapper over `mirrorperiods all`; exits 1 if any check fails.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mirrorperiods import cli  # noqa: E402


def main() -> int:
    args = sys.argv[1:]
    out = None
    if args and not args[0].startswith("-"):
        out, args = args[0], args[1:]
    argv = ["all"] + (["--output", out] if out else []) + args
    return cli.main(argv)


if __name__ == "__main__":
    sys.exit(main())

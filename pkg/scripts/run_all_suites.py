#!/usr/bin/env python3
"""Run every verification suite and save the JSON report stream.

Usage: python scripts/run_all_suites.py [report_path] [--n-max K] [--jobs J]
"""

import argparse
import io
import sys
import time

from ncbinom.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("report", nargs="?", default="verification_report.jsonl")
    parser.add_argument("--n-max", type=int)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    argv = ["verify", "all", "--format", "json", "--jobs", str(args.jobs)]
    if args.n_max is not None:
        argv += ["--n-max", str(args.n_max)]

    buffer = io.StringIO()
    stdout = sys.stdout
    sys.stdout = buffer
    started = time.time()
    try:
        code = cli_main(argv)
    finally:
        sys.stdout = stdout
    with open(args.report, "w") as handle:
        handle.write(buffer.getvalue())
    print(f"wrote {args.report} in {time.time() - started:.1f}s, exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())

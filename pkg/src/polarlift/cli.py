"""Command-line front end.

    polarlift verify [--corpus PATH] [--entry ID[,ID...]] [--claims LIST]
                     [--s LIST] [--samples N] [--seed N] [--tol FLOAT]
                     [--format text|structured] [--out PATH] [--timings]

Exit codes: 0 every claim passed, 1 a verification mismatch, 2 a construction
was rejected, 3 usage or corpus parse error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from threadpoolctl import threadpool_limits

from .corpus import CorpusError, default_corpus_path, load_corpus, parse_s
from .pipeline import CLAIMS, run_pipeline
from .report import emit_report

EXIT_OK, EXIT_MISMATCH, EXIT_REJECTED, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polarlift", description="Verify lifted polar actions on G/K bundles.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification claims on a corpus")
    v.add_argument("--corpus", default=None,
                   help="corpus file (default: the bundled classical corpus)")
    v.add_argument("--entry", type=_csv, default=None, help="comma-separated entry ids")
    v.add_argument("--claims", type=_csv, default=None,
                   help=f"comma-separated subset of: {', '.join(CLAIMS)}")
    v.add_argument("--s", dest="s_values", type=_csv, default=None,
                   help="override the entries' s values, e.g. 0.5,1/sqrt(2),1")
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=None,
                   help="single tolerance overriding the per-claim defaults")
    v.add_argument("--format", choices=("text", "structured"), default="text")
    v.add_argument("--out", default=None, help="write the report here instead of stdout")
    v.add_argument("--timings", action="store_true", help="include wall times")
    v.add_argument("-v", "--verbose", action="store_true")
    return p


def verify(args) -> int:
    path = args.corpus or default_corpus_path()
    entries = load_corpus(path)
    if args.entry:
        known = {e.id for e in entries}
        missing = [e for e in args.entry if e not in known]
        if missing:
            raise UsageError(f"unknown entry id(s): {', '.join(missing)}")
        entries = [e for e in entries if e.id in args.entry]
    claims = args.claims or list(CLAIMS)
    bad = [c for c in claims if c not in CLAIMS]
    if bad:
        raise UsageError(f"unknown claim(s): {', '.join(bad)}")
    try:
        s_override = [parse_s(t) for t in args.s_values] if args.s_values else None
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.samples < 1:
        raise UsageError("--samples must be positive")

    reports, skipped = [], []
    with threadpool_limits(limits=1):
        for entry in entries:
            if entry.skip:
                skipped.append((entry.id, entry.skip))
                continue
            for s in s_override or entry.s_values:
                reports.append(run_pipeline(entry, claims, args.seed, s, args.samples, args.tol))

    text = emit_report(reports, args.format, skipped, args.timings)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write report: {exc}") from exc
    else:
        sys.stdout.write(text)

    if any(r.rejected for r in reports):
        return EXIT_REJECTED
    if any(r.failed for r in reports):
        return EXIT_MISMATCH
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return verify(args)
    except (CorpusError, UsageError, OSError) as exc:
        print(f"polarlift: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

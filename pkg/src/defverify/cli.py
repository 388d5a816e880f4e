"""Command-line entry point.

Exit codes: 0 when every check passes, 1 on a verification failure,
2 on usage, parse or semantic errors.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

from .report import FORMATS, emit_report
from .scenarios import (
    MUTATIONS,
    ScenarioError,
    parse_scenario,
    run_curve_scenario,
    run_custom,
    run_surface_scenario,
)
from .scenarios.dsl import ScenarioDecl, ScenarioSpec, elaborate
from .syntax import DSLError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, action="append", dest="ps", metavar="N", help="prime (repeatable)")
    sp.add_argument("--format", choices=FORMATS, default="text")
    sp.add_argument("--mutate", metavar="NAME", help="negative control: " + ", ".join(sorted(MUTATIONS)))
    sp.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    sp.add_argument("--jobs", type=int, default=1, metavar="N", help="worker threads per run (default 1)")
    sp.add_argument("--timing", action="store_true", help="record elapsed_ms in the report")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="defverify", description="Check the gluing, automorphism and obstruction computations.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("curve", help="the cuspidal curve suite")
    _common(c)
    c.add_argument("--window", type=int, metavar="N", help="support window (default 6p+8)")
    s = sub.add_parser("surface", help="the toric surface suite")
    _common(s)
    s.add_argument("--box", type=int, metavar="N", help="lattice box half-width (default 2p+4)")
    f = sub.add_parser("custom", help="run a scenario file")
    f.add_argument("file", metavar="FILE")
    _common(f)
    f.add_argument("--window", type=int, metavar="N")
    f.add_argument("--box", type=int, metavar="N")
    return ap


def _runs(args) -> list:
    """A list of zero-argument callables, one per requested p."""
    jobs, timing = max(1, args.jobs), args.timing
    if args.command == "curve":
        ps = args.ps or [2]
        return [lambda p=p: run_curve_scenario(p, args.window, args.mutate, jobs, timing) for p in ps]
    if args.command == "surface":
        ps = args.ps or [2]
        return [lambda p=p: run_surface_scenario(p, args.box, args.mutate, jobs, timing) for p in ps]
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read {args.file}: {exc.strerror}")
    spec = parse_scenario(text)
    if args.mutate or args.window is not None or args.box is not None:
        spec = _override(spec, args)
    ps = args.ps or [spec.p]
    return [lambda p=p: run_custom(spec, p, jobs, timing) for p in ps]


def _override(spec, args):
    """Apply --mutate/--window/--box to a scenario file's header."""
    head = next((s for s in spec.statements if isinstance(s, ScenarioDecl)), None)
    if head is None:
        raise ScenarioError("--mutate, --window and --box need a 'scenario curve' or 'scenario surface' header")
    params = dict(head.params)
    for key in ("mutate", "window", "box"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    new = ScenarioDecl(head.name, tuple(params.items()), head.line, head.col)
    out = ScenarioSpec(tuple(new if s is head else s for s in spec.statements))
    elaborate(out)
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("defverify: error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        runs = _runs(args)
        if len(runs) > 1 and args.jobs > 1:
            with ThreadPoolExecutor(max_workers=min(len(runs), args.jobs)) as ex:
                reports = list(ex.map(lambda f: f(), runs))
        else:
            reports = [f() for f in runs]
    except DSLError as exc:
        where = f"{args.file}:" if getattr(args, "file", None) else ""
        print(f"defverify: {where}{exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioError as exc:
        print(f"defverify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = emit_report(reports[0] if len(reports) == 1 else reports, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    ok = all(r.passed for r in reports)
    if not ok:
        first = next(r for r in reports if not r.passed).first_failure()
        print(f"defverify: verification failed at {first.name!r}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

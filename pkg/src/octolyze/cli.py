"""``octolyze`` command line.

Exit status: 0 when every assert is proved, 1 when some assert is unknown,
2 on usage errors, unreadable input or syntax errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import report
from .analyzer import analyze, check_asserts
from .lang import ParseError, parse, parse_guard, pretty
from .octagon import Octagon
from .transfer import Env, guard


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="octolyze", description="Octagon invariants for small imperative programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, analysis=True):
        p.add_argument("file", help="source file (.oct)")
        if not analysis:
            return
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument(
            "--assume",
            action="append",
            default=[],
            metavar="GUARD",
            help="restrict the entry state, e.g. --assume 'm >= 0' (repeatable)",
        )

    p = sub.add_parser("analyze", help="print the invariant at every location and the assert verdicts")
    common(p)
    p.add_argument("--show-matrix", action="store_true", help="also dump the raw matrix of each location")
    p.add_argument("--raw", action="store_true", help="print invariants without strong closure")
    p.add_argument("--loc", action="append", metavar="l<k>", help="only show these locations (repeatable)")

    p = sub.add_parser("check", help="print only the assert verdicts")
    common(p)

    p = sub.add_parser("dump", help="parse and pretty-print with location labels")
    common(p, analysis=False)
    return ap


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _locations(specs, n_locations: int):
    if not specs:
        return None
    out = set()
    for s in specs:
        m = re.fullmatch(r"l?(\d+)", s.strip())
        if not m or int(m.group(1)) >= n_locations:
            raise UsageError(f"no location {s!r} (program has l0..l{n_locations - 1})")
        out.add(int(m.group(1)))
    return out


def _entry(program, assumptions) -> Octagon | None:
    if not assumptions:
        return None
    env = Env.from_program(program)
    m = Octagon.top(len(env.names))
    for text in assumptions:
        try:
            g = parse_guard(text, env.names)
        except ParseError as e:
            raise UsageError(f"--assume {text!r}: {e}") from None
        m = guard(m, g, env)
    return m


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    try:
        text = _read(args.file)
        try:
            program = parse(text)
        except ParseError as e:
            print(f"{args.file}:{e}", file=sys.stderr)
            return 2
        if args.command == "dump":
            out.write(pretty(program))
            return 0
        locs = _locations(getattr(args, "loc", None), program.n_locations)
        inv = analyze(program, _entry(program, args.assume))
    except UsageError as e:
        print(f"octolyze: error: {e}", file=sys.stderr)
        return 2

    verdicts = check_asserts(program, inv)
    status = 0 if verdicts.all_proved else 1
    closed = not getattr(args, "raw", False)
    matrix = getattr(args, "show_matrix", False)
    if args.format == "json":
        data = report.to_json(inv, verdicts, locs, closed, matrix)
        if args.command == "check":
            data = {"asserts": data["asserts"]}
        json.dump(data, out, indent=2)
        out.write("\n")
        return status
    lines = []
    if args.command == "analyze":
        lines += report.invariant_lines(inv, locs, closed, matrix)
        if len(verdicts):
            lines.append("")
    lines += report.assert_lines(verdicts)
    out.write("".join(ln + "\n" for ln in lines))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line interface: ``tacs <command> ...``.

Exit codes: 0 on success or a verdict matching ``--expect``, 1 on a property
violation or verdict mismatch, 2 on usage, parse and limit errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import (
    FAMILIES,
    CapUnstable,
    EngineError,
    RelationKind,
    explore,
)
from .engine import check as run_check
from .faster import ClosureLimitExceeded, faster_set, upward_closure
from .generate import GenConfig
from .semantics import SemanticsType, action_successors, clock_successors, urgent_set
from .suites import SUITE_NAMES, run_suite
from .syntax import ParseError, from_json, parse, pretty, to_json
from .terms import TermError
from .worked import EXAMPLES, UnknownExample, reproduce

OK, VIOLATION, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    try:
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {arg}: {e.strerror}") from e


def _process(text: str):
    return parse(text, closed=True)


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_parse(args) -> int:
    print(to_json(parse(_read(args.file))))
    return OK


def cmd_print(args) -> int:
    try:
        t = from_json(_read(args.file))
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"malformed document: {e}") from e
    print(pretty(t))
    return OK


def cmd_urgent(args) -> int:
    print(" ".join(sorted(urgent_set(_process(args.term)))))
    return OK


def cmd_steps(args) -> int:
    t = _process(args.term)
    sem = SemanticsType(args.semantics)
    for a, u in sorted(action_successors(t), key=lambda e: (e[0], pretty(e[1]))):
        print(f"--{a}--> {pretty(u)}")
    for u in sorted(clock_successors(t, sem), key=pretty):
        print(f"--sigma--> {pretty(u)}")
    return OK


def cmd_lts(args) -> int:
    sem = SemanticsType(args.semantics)
    sp = explore(_process(args.term), args.limit, sems=(sem,))
    edges = [(i, a, j) for i, es in enumerate(sp.actions) for a, j in es]
    edges += [(i, "sigma", j) for i, es in enumerate(sp.clock(sem)) for j in es]
    edges.sort()
    if args.format == "json":
        _emit(
            {
                "root": sp.index[sp.root],
                "states": [pretty(t) for t in sp.states],
                "transitions": [{"source": i, "label": a, "target": j} for i, a, j in edges],
            }
        )
    else:
        print("digraph lts {")
        for i, t in enumerate(sp.states):
            shape = ', shape="doublecircle"' if i == sp.index[sp.root] else ""
            print(f"  s{i} [label={json.dumps(pretty(t))}{shape}];")
        for i, a, j in edges:
            style = ", style=dashed" if a == "sigma" else ""
            print(f"  s{i} -> s{j} [label={json.dumps(a)}{style}];")
        print("}")
    return OK


def cmd_faster_set(args) -> int:
    t = parse(args.term)
    members = upward_closure(t, args.limit) if args.plus else faster_set(t).members
    for p in sorted(members, key=pretty):
        print(pretty(p))
    return OK


def cmd_check(args) -> int:
    if args.relation == "combined":
        kind = RelationKind("combined")
    else:
        kind = RelationKind(args.relation, SemanticsType(args.semantics), args.cap)
    v = run_check(_process(args.p), _process(args.q), kind, args.limit)
    _emit(v.to_obj())
    if args.expect is None:
        return OK if v.holds else VIOLATION
    return OK if v.holds == (args.expect == "holds") else VIOLATION


def cmd_verify(args) -> int:
    cfg = GenConfig(seed=args.seed, count=args.cases, size_budget=args.budget)
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    failed = False
    for name in names:
        report = run_suite(name, cfg, args.limit)
        print(report.summary())
        for v in report.violations[: args.show]:
            print(f"  [{v.property}] case {v.case}: {' ; '.join(v.terms)}")
            print(f"    replay: {v.replay}")
        failed |= not report.passed
    return VIOLATION if failed else OK


def cmd_reproduce(args) -> int:
    ids = list(EXAMPLES) if args.example == "all" else [args.example]
    failed = False
    for ex in ids:
        report = reproduce(ex)
        print(report.summary())
        for v in report.violations:
            print(f"  [{v.property}] {' ; '.join(v.terms)}")
        failed |= not report.passed
    return VIOLATION if failed else OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tacs", description="Faster-than relations for timed CCS processes.")
    sub = ap.add_subparsers(dest="command", required=True)

    def sem_arg(p):
        p.add_argument("--semantics", type=int, choices=(1, 2), default=1)

    p = sub.add_parser("parse", help="term text to JSON")
    p.add_argument("file", help="file name, or - for stdin")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("print", help="JSON to term text")
    p.add_argument("file", help="file name, or - for stdin")
    p.set_defaults(fn=cmd_print)

    p = sub.add_parser("urgent", help="urgent actions of a process")
    p.add_argument("term")
    p.set_defaults(fn=cmd_urgent)

    p = sub.add_parser("steps", help="one-step transitions of a process")
    sem_arg(p)
    p.add_argument("term")
    p.set_defaults(fn=cmd_steps)

    p = sub.add_parser("lts", help="reachable transition system")
    sem_arg(p)
    p.add_argument("--limit", type=int, default=2000)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("term")
    p.set_defaults(fn=cmd_lts)

    p = sub.add_parser("faster-set", help="terms syntactically faster than a term")
    p.add_argument("--plus", action="store_true", help="transitive closure")
    p.add_argument("--limit", type=int, default=100_000)
    p.add_argument("term")
    p.set_defaults(fn=cmd_faster_set)

    p = sub.add_parser("check", help="decide a faster-than relation, JSON verdict on stdout")
    p.add_argument("--relation", choices=FAMILIES, required=True)
    sem_arg(p)
    p.add_argument("--cap", type=int, default=None, help="credit cap for indexed relations (default: auto)")
    p.add_argument("--limit", type=int, default=2000)
    p.add_argument("--expect", choices=("holds", "fails"), default=None)
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("verify", help="run a randomised verification suite")
    p.add_argument("--suite", choices=SUITE_NAMES + ("all",), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--limit", type=int, default=2000)
    p.add_argument("--show", type=int, default=10, help="violations to print per suite")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("reproduce", help="replay a worked example")
    p.add_argument("--example", required=True, help=f"one of {', '.join(EXAMPLES)} (sec7-sizes?n=N), or all")
    p.set_defaults(fn=cmd_reproduce)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"tacs: parse error: {e}", file=sys.stderr)
    except UnknownExample as e:
        print(f"tacs: unknown example {e.args[0]!r}; known: {', '.join(EXAMPLES)}", file=sys.stderr)
    except (UsageError, CapUnstable, ClosureLimitExceeded, EngineError, TermError, ValueError) as e:
        print(f"tacs: {e}", file=sys.stderr)
    return USAGE


if __name__ == "__main__":
    sys.exit(main())

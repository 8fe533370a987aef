"""Workbench for the timed process algebra TACS and its faster-than relations."""

import sys

# reachable states of e.g. rec x. a.(x | b.0) nest one level deeper per step
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

from .terms import (
    NIL,
    TAU,
    ActPrefix,
    ClockPrefix,
    Nil,
    Par,
    Process,
    Rec,
    Relabel,
    Relabelling,
    Restrict,
    Sum,
    Term,
    Var,
    free_vars,
    is_guarded,
    structural_eq,
    substitute,
    validate_process,
)
from .syntax import ParseError, from_json, parse, pretty, to_json

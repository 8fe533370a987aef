"""Seeded random generation of processes and process pairs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .faster import ClosureLimitExceeded, faster_set, upward_closure
from .terms import (
    NIL,
    TAU,
    ActPrefix,
    ClockPrefix,
    Par,
    Process,
    Rec,
    Relabel,
    Relabelling,
    Restrict,
    Sum,
    Term,
    Var,
    validate_process,
)

ACTION_NAMES = ("a", "b", "c", "d", "e", "f")
VAR_NAMES = ("x", "y", "z")


def _default_weights() -> dict:
    return {
        "nil": 2.0,
        "var": 2.0,
        "act": 4.0,
        "tau": 1.0,
        "clock": 3.5,
        "sum": 1.5,
        "par": 1.5,
        "restrict": 0.7,
        "relabel": 0.5,
        "rec": 1.2,
    }


@dataclass
class GenConfig:
    max_depth: int = 8
    size_budget: int = 10
    seed: int = 0
    n_actions: int = 3
    count: int = 100
    weights: dict = field(default_factory=_default_weights)

    def __post_init__(self):
        if self.max_depth <= 0 or self.size_budget <= 0 or self.count < 0:
            raise ValueError("budgets must be positive")
        if not 1 <= self.n_actions <= len(ACTION_NAMES):
            raise ValueError(f"n_actions must be in 1..{len(ACTION_NAMES)}")


class TermGenerator:
    """Random terms whose recursion variables only occur where allowed.

    ``guarded`` is the set of bound (or designated free) variables that may be
    emitted at the current position; a variable becomes emittable once an
    action prefix separates it from its binder.
    """

    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.names = ACTION_NAMES[: cfg.n_actions]

    def action(self) -> str:
        a = self.rng.choice(self.names)
        return "'" + a if self.rng.random() < 0.4 else a

    def term(self, budget: int, depth: int = 0, bound: frozenset = frozenset(), guarded: frozenset = frozenset()) -> Term:
        w = dict(self.cfg.weights)
        if budget <= 1 or depth >= self.cfg.max_depth:
            kinds = ["nil"] + (["var"] if guarded else [])
        else:
            kinds = [k for k in w if k not in ("nil", "var")] + ["nil"]
            if guarded:
                kinds.append("var")
            if budget < 3:
                kinds = [k for k in kinds if k not in ("sum", "par")]
        kind = self.rng.choices(kinds, weights=[w[k] for k in kinds])[0]
        rest = budget - 1
        d = depth + 1
        match kind:
            case "nil":
                return NIL
            case "var":
                return Var(self.rng.choice(sorted(guarded)))
            case "act":
                return ActPrefix(self.action(), self.term(rest, d, bound, bound))
            case "tau":
                return ActPrefix(TAU, self.term(rest, d, bound, bound))
            case "clock":
                return ClockPrefix(self.term(rest, d, bound, guarded))
            case "sum" | "par":
                left = self.rng.randint(1, rest - 1)
                l = self.term(left, d, bound, guarded)
                r = self.term(rest - left, d, bound, guarded)
                return Sum(l, r) if kind == "sum" else Par(l, r)
            case "restrict":
                k = self.rng.randint(1, min(2, len(self.names)))
                return Restrict(self.term(rest, d, bound, guarded), frozenset(self.rng.sample(self.names, k)))
            case "relabel":
                old = self.rng.choice(self.names)
                new = self.rng.choice(self.names)
                return Relabel(self.term(rest, d, bound, guarded), Relabelling.of({old: new}))
            case "rec":
                # no shadowing, so open substitutions inside the term never capture
                fresh = [v for v in VAR_NAMES if v not in bound]
                if not fresh:
                    return ClockPrefix(self.term(rest, d, bound, guarded))
                x = self.rng.choice(fresh)
                return Rec(x, self.term(rest, d, bound | {x}, guarded - {x}))
        raise AssertionError(kind)

    def budget(self) -> int:
        return self.rng.randint(max(1, self.cfg.size_budget // 3), self.cfg.size_budget)

    def process(self) -> Process:
        budget = self.budget()
        return validate_process(self.term(budget))

    def open_term(self, var: str, guarded: bool) -> Term:
        """A term with ``var`` possibly free; guarded occurrences only if asked."""
        return self.term(self.budget(), 0, frozenset({var}), frozenset() if guarded else frozenset({var}))

    def rec_closure(self, var: str) -> Rec:
        """A closed recursion ``rec var. Q``."""
        body = self.term(self.budget(), 0, frozenset({var}), frozenset())
        return Rec(var, body)


def generate_corpus(cfg: GenConfig) -> list[Process]:
    gen = TermGenerator(cfg, random.Random(cfg.seed))
    return [gen.process() for _ in range(cfg.count)]


def slow_down(t: Term, rng: random.Random, p: float = 0.3) -> Term:
    """Insert clock prefixes at random positions; guardedness is unaffected."""

    def go(u: Term) -> Term:
        match u:
            case ActPrefix(a, body):
                u = ActPrefix(a, go(body))
            case ClockPrefix(body):
                u = ClockPrefix(go(body))
            case Sum(l, r):
                u = Sum(go(l), go(r))
            case Par(l, r):
                u = Par(go(l), go(r))
            case Restrict(body, names):
                u = Restrict(go(body), names)
            case Relabel(body, fn):
                u = Relabel(go(body), fn)
            case Rec(x, body):
                u = Rec(x, go(body))
        if not isinstance(u, Var) and rng.random() < p:
            u = ClockPrefix(u)
        return u

    return go(t)


PAIR_MODES = ("independent", "slowed", "sped", "lagging")


def generate_pairs(cfg: GenConfig) -> list[tuple[Process, Process, str]]:
    """Pairs (p, q, mode).

    ``independent`` draws both sides; ``slowed`` inserts clock prefixes into
    ``p`` to get ``q``; ``sped`` picks ``p`` from the syntactic upward closure
    of ``q``; ``lagging`` inserts clock prefixes into ``q`` to get ``p``, which
    often separates the naive relations from the strong ones.  The correlated
    modes make "holds" verdicts common.
    """
    rng = random.Random(cfg.seed)
    gen = TermGenerator(cfg, rng)
    out = []
    for n in range(cfg.count):
        mode = PAIR_MODES[n % len(PAIR_MODES)]
        if mode == "independent":
            p, q = gen.process(), gen.process()
        elif mode == "slowed":
            p = gen.process()
            q = validate_process(slow_down(p.term, rng))
        elif mode == "lagging":
            q = gen.process()
            p = validate_process(slow_down(q.term, rng))
        else:
            q = gen.process()
            try:
                ups = upward_closure(q.term, limit=5000)
            except ClosureLimitExceeded:
                ups = faster_set(q.term).members
            ups = sorted(ups, key=str)
            p = validate_process(rng.choice(ups))
        out.append((p, q, mode))
    return out

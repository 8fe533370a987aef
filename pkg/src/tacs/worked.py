"""Registry of worked examples with their expected outcomes.

``reproduce(id)`` replays one example and reports every expectation that
does not come out as stated.  Ids may carry parameters in query form, as in
``sec7-sizes?n=3``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable
from urllib.parse import parse_qs

from .engine import (
    Combined,
    Indexed,
    Naive,
    Strong,
    WitnessRelation,
    audit,
    check,
    explore,
    game_configs,
    reachable_state_count,
    validate_witness,
)
from .faster import upward_closure
from .semantics import TYPE1, TYPE2, action_successors, can_tick, clock_successors
from .suites import SuiteReport, Violation
from .syntax import parse
from .terms import ActPrefix, ClockPrefix, Par, Rec, Restrict, Term, Var


class UnknownExample(KeyError):
    pass


class _Expect:
    def __init__(self, report: SuiteReport, example_id: str):
        self.report, self.id = report, example_id

    def __call__(self, ok: bool, prop: str, *terms):
        self.report.checks += 1
        if not ok:
            self.report.violations.append(
                Violation(prop, 0, tuple(str(t) for t in terms), f"tacs reproduce --example {self.id}")
            )


def _verdict(expect: _Expect, p: Term, q: Term, kind, holds: bool, limit: int = 5000):
    v = check(p, q, kind, limit)
    expect(v.holds == holds, f"{kind} expected {'holds' if holds else 'fails'}", p, q)
    expect(audit(v), f"audit {kind}", p, q)
    return v


# -- small examples ----------------------------------------------------------


def _sigma_skip(expect: _Expect, params):
    t = parse("s.s.s.a.0")
    expect(clock_successors(t, TYPE2) == {parse("s.s.a.0"), parse("s.a.0"), parse("a.0")}, "type-2 steps skip clock prefixes", t)
    expect(clock_successors(t, TYPE1) == {parse("s.s.a.0")}, "type-1 step removes exactly one prefix", t)


def _sigma1_star(t: Term) -> set:
    seen = {t}
    todo = [t]
    while todo:
        for u in clock_successors(todo.pop(), TYPE1):
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return seen


def _parallel_skip(expect: _Expect, params):
    t = parse("s.s.s.a.0 | s.s.a.0")
    target = parse("a.0 | s.a.0")
    expect(target in clock_successors(t, TYPE2), "one type-2 step reaches a.0 | s.a.0", t)
    expect(target not in _sigma1_star(t), "no sequence of type-1 steps reaches it", t)


def _urgency_blocks_tick(expect: _Expect, params):
    blocked, free = parse("a.0 | 'a.0"), parse("a.0 | s.'a.0")
    for sem in (TYPE1, TYPE2):
        expect(not can_tick(blocked, sem), f"urgent synchronisation blocks type-{int(sem)} steps", blocked)
        expect(can_tick(free, sem), f"delayed partner allows type-{int(sem)} steps", free)


def _coherence_triple(expect: _Expect, params):
    p = parse("s.s.s.a.0 | s.'a.0 | s.a.0")
    p2 = parse("a.0 | 'a.0 | a.0")
    p1 = parse("s.s.a.0 | 'a.0 | a.0")
    expect(p2 in clock_successors(p, TYPE2), "type-2 step to a.0 | 'a.0 | a.0", p)
    expect(clock_successors(p, TYPE1) == {p1}, "the only type-1 step", p)
    expect(not can_tick(p1, TYPE1) and not can_tick(p1, TYPE2), "the type-1 result cannot tick", p1)
    expect(p2 in upward_closure(p1), "type-2 result is syntactically faster than the type-1 result", p2, p1)


def _indexed_counterexample(expect: _Expect, params):
    p = parse("tau.0 | s.s.tau.0")
    q = parse("s.tau.0 | s.s.tau.0")
    _verdict(expect, p, q, Naive(2), True)
    _verdict(expect, p, q, Naive(1), True)
    _verdict(expect, p, q, Indexed(1), True)
    for cap in range(1, 11):
        _verdict(expect, p, q, Indexed(2, cap), False)
    # the step that forces a credit: q skips a prefix while p cannot tick at all
    expect(parse("tau.0 | tau.0") in clock_successors(q, TYPE2), "slower process skips a clock prefix", q)
    expect(not can_tick(p, TYPE2), "faster process is blocked by an urgent tau", p)


def _precongruence_failure(expect: _Expect, params):
    p, q = parse("s.a.0"), parse("a.0")
    pr, qr = parse("s.a.0 | 'a.0"), parse("a.0 | 'a.0")
    for sem in (1, 2):
        _verdict(expect, p, q, Naive(sem), True)
        _verdict(expect, p, q, Strong(sem), False)
        _verdict(expect, pr, qr, Naive(sem), False)
    _verdict(expect, p, q, Combined, False)


# -- the parameterised family ---------------------------------------------------


def sigmas(k: int, t: Term) -> Term:
    for _ in range(k):
        t = ClockPrefix(t)
    return t


def _loop(action: str, delay: int) -> Rec:
    return Rec("x", sigmas(delay, ActPrefix(action, Var("x"))))


def _component(action: str, delay: int, code: int, n: int) -> Term:
    """Component with ``code`` leading clock prefixes; ``code == n`` is the loop itself."""
    loop = _loop(action, delay)
    return loop if code == n else sigmas(code, ActPrefix(action, loop))


def family_state(side: str, i: int, j: int, k: int, l: int, n: int) -> Term:
    """The state coded ``ijkl`` of the faster (``side='p'``) or slower process.

    On the faster side the ``a`` and ``b`` loops have no delay, so only the
    codes 0 and ``n`` occur for them.
    """
    d = 0 if side == "p" else n
    return Par(
        Par(_component("a", d, i, n), _component("b", d, j, n)),
        Restrict(Par(_component("c", n, k, n), _component("'c", n, l, n)), {"c"}),
    )


def family_p(n: int) -> Term:
    return family_state("p", n, n, n, n, n)


def family_q(n: int) -> Term:
    return family_state("q", n, n, n, n, n)


def family_text(side: str, n: int) -> str:
    s = "s." * n
    d = "" if side == "p" else s
    return f"rec x. {d}a.x | rec x. {d}b.x | (rec x. {s}c.x | rec x. {s}'c.x) \\ {{c}}"


def combined_relation(n: int) -> frozenset:
    """The pairs (ijkk, ijkk) with i, j in {0, n}."""
    return frozenset(
        (family_state("p", i, j, k, k, n), family_state("q", i, j, k, k, n))
        for i in (0, n)
        for j in (0, n)
        for k in range(n + 1)
    )


def type2_p_states(n: int) -> set:
    """The 4n^2 + 4 states the faster process reaches with type-2 steps and actions."""
    out = set()
    for i in (0, n):
        for j in (0, n):
            out.update(family_state("p", i, j, k, l, n) for k in range(n) for l in range(n))
            out.add(family_state("p", i, j, n, n, n))
    return out


def forced_pair(i: int, j: int, k: int, n: int) -> tuple:
    """pair(ijk): the slower side at ijkk, the faster side with a and b codes clamped to {0, n}."""
    fl = lambda v: n if v == n else 0  # noqa: E731
    return family_state("p", fl(i), fl(j), k, k, n), family_state("q", i, j, k, k, n)


def move_recipe(i: int, j: int, k: int, n: int) -> list[str]:
    """Moves leading from the root pair to pair(ijk) in the type-1 game.

    Each component must end with ``n - code`` ticks after its last reset, so
    ticks run for the largest such count and each component is reset (by
    ``a``, ``b`` or a ``tau`` synchronisation on ``c``) just in time.
    """
    need = {"a": n - i, "b": n - j, "tau": n - k}
    total = max(need.values())
    moves = []
    for t in range(total + 1):
        for m in ("a", "b", "tau"):
            if need[m] < total and total - need[m] == t:
                moves.append(m)
        if t < total:
            moves.append("tick")
    return moves


def _step(t: Term, move: str) -> Term | None:
    if move == "tick":
        nxt = clock_successors(t, TYPE1)
    else:
        nxt = {u for a, u in action_successors(t) if a == move}
    return next(iter(nxt)) if len(nxt) == 1 else None


def replay_recipe(moves: list[str], n: int) -> tuple | None:
    p, q = family_p(n), family_q(n)
    for m in moves:
        p, q = _step(p, m), _step(q, m)
        if p is None or q is None:
            return None
    return p, q


def _sec7_sizes(expect: _Expect, params):
    n = int(params.get("n", ["2"])[0])
    if n < 1:
        raise ValueError("n must be at least 1")
    p, q = family_p(n), family_q(n)
    expect(parse(family_text("p", n)) == p and parse(family_text("q", n)) == q, "text form matches the encoding", p, q)

    rel = combined_relation(n)
    expect(len(rel) == 4 * (n + 1), f"combined relation has {4 * (n + 1)} pairs", len(rel))
    expect((p, q) in rel, "combined relation contains the root pair", p, q)
    sp, sq = explore(p, 100_000), explore(q, 100_000)
    expect(validate_witness(WitnessRelation(Combined, rel), sp, sq), "combined relation validates", p, q)
    for kind in (Strong(1), Strong(2)) if n >= 2 else ():
        # with n = 1 the small relation happens to be strong as well
        expect(not validate_witness(WitnessRelation(kind, rel), sp, sq), f"same pairs are no {kind} relation", p, q)

    reach2 = explore(p, 100_000, sems=(TYPE2,)).index
    expect(len(reach2) >= 4 * n * n + 4, f"at least {4 * n * n + 4} type-2 reachable states", len(reach2))
    expect(type2_p_states(n) <= set(reach2), "all coded states are type-2 reachable", p)
    s2 = check(p, q, Strong(2), 100_000)
    expect(s2.holds and audit(s2), "strong(2) holds and its witness validates", p, q)
    p_states = {pr[0] for pr in s2.witness.pairs} if s2.holds else set()
    expect(len(p_states) >= 4 * n * n + 4, "strong(2) witness covers the type-2 states", len(p_states))

    s1 = check(p, q, Strong(1), 100_000)
    expect(s1.holds and audit(s1), "strong(1) holds and its witness validates", p, q)
    reach_game = game_configs(p, q, Strong(1), 100_000)
    forced = {(i, j, k): forced_pair(i, j, k, n) for i in range(n + 1) for j in range(n + 1) for k in range(n + 1)}
    expect(len(set(forced.values())) == (n + 1) ** 3, f"{(n + 1) ** 3} distinct forced pairs", len(forced))
    for (i, j, k), pr in forced.items():
        got = replay_recipe(move_recipe(i, j, k, n), n)
        expect(got == pr, f"recipe reaches pair({i}{j}{k})", *pr)
        expect(pr in reach_game, f"pair({i}{j}{k}) is reachable in the type-1 game", *pr)
        expect(s1.holds and pr in s1.witness.pairs, f"pair({i}{j}{k}) is in the strong(1) witness", *pr)


@dataclass(frozen=True)
class WorkedExample:
    id: str
    title: str
    where: str
    run: Callable


EXAMPLES: dict[str, WorkedExample] = {
    e.id: e
    for e in [
        WorkedExample("sigma-skip", "s.s.s.a.0 skips clock prefixes under type-2 steps", "introduction; TACS semantics", _sigma_skip),
        WorkedExample("parallel-skip", "s.s.s.a.0 | s.s.a.0 reaches a.0 | s.a.0 in one type-2 step", "TACS semantics", _parallel_skip),
        WorkedExample("urgency-blocks-tick", "a.0 | 'a.0 cannot tick, a.0 | s.'a.0 can", "maximal progress", _urgency_blocks_tick),
        WorkedExample("coherence-triple", "type-2 step versus the only type-1 step", "relating type-1 and type-2 steps", _coherence_triple),
        WorkedExample("indexed-counterexample", "2-naive holds but the 2-indexed family fails", "indexed faster-than relations", _indexed_counterexample),
        WorkedExample("precongruence-failure", "s.a.0 vs a.0 in the context | 'a.0", "strong faster-than precongruence", _precongruence_failure),
        WorkedExample("sec7-sizes", "relation sizes 4(n+1), 4n^2+4 and (n+1)^3", "strong combined faster-than relations", _sec7_sizes),
    ]
}


def reproduce(example_id: str) -> SuiteReport:
    base, _, query = example_id.partition("?")
    if base not in EXAMPLES:
        raise UnknownExample(example_id)
    report = SuiteReport(example_id)
    start = time.perf_counter()
    report.cases = 1
    EXAMPLES[base].run(_Expect(report, example_id), parse_qs(query))
    report.wall_time = time.perf_counter() - start
    return report

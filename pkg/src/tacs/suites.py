"""Randomised verification suites for the semantic laws and coincidence results.

Each suite draws a seeded corpus, checks one family of properties on every
case and reports violations with enough context to replay them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .engine import (
    CapUnstable,
    Combined,
    Delayed,
    Indexed,
    Naive,
    StateLimitExceeded,
    StateSpace,
    Strong,
    WitnessRelation,
    audit,
    check,
    explore,
    indexed_family,
    validate_witness,
)
from .faster import ClosureLimitExceeded, faster_set, syntactically_faster, upward_closure
from .generate import GenConfig, TermGenerator, generate_corpus, generate_pairs
from .semantics import TYPE1, TYPE2, action_successors, can_tick, clock_successors, urgent_set
from .terms import TAU, Term, is_guarded, subst

DEFAULT_LIMIT = 2000
SAMPLE_STATES = 25
FAMILY_BUDGET = 20_000  # max configurations for the full indexed-family check
CLOSURE_LIMIT = 5000  # parallel components multiply closure sizes; larger cases are skipped


class UnknownSuite(KeyError):
    pass


@dataclass
class Violation:
    property: str
    case: int
    terms: tuple
    replay: str

    def to_obj(self):
        return {"property": self.property, "case": self.case, "terms": list(self.terms), "replay": self.replay}


@dataclass
class SuiteReport:
    name: str
    cases: int = 0
    skipped: int = 0
    checks: int = 0
    violations: list = field(default_factory=list)
    wall_time: float = 0.0
    counts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def tally(self, key: str, n: int = 1):
        self.counts[key] = self.counts.get(key, 0) + n

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.name}: {self.cases} cases, {self.checks} checks, "
            f"{self.skipped} skipped, {len(self.violations)} violations, {self.wall_time:.2f}s"
        )

    def to_obj(self):
        return {
            "suite": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "skipped": self.skipped,
            "checks": self.checks,
            "violations": [v.to_obj() for v in self.violations],
            "wall_time": round(self.wall_time, 3),
            "counts": dict(sorted(self.counts.items())),
        }


class _Ctx:
    def __init__(self, report: SuiteReport, cfg: GenConfig, case: int):
        self.report, self.cfg, self.case = report, cfg, case

    def expect(self, ok: bool, prop: str, *terms):
        self.report.checks += 1
        if not ok:
            replay = f"tacs verify --suite {self.report.name} --seed {self.cfg.seed} --cases {self.cfg.count}"
            self.report.violations.append(Violation(prop, self.case, tuple(str(t) for t in terms), replay))


def sample_states(root: Term, k: int = SAMPLE_STATES) -> list[Term]:
    """Up to ``k`` states reachable from ``root``, breadth first."""
    seen = [root]
    index = {root}
    i = 0
    while i < len(seen) and len(seen) < k:
        t = seen[i]
        i += 1
        nxt = [t2 for _, t2 in action_successors(t)]
        nxt += sorted(clock_successors(t, TYPE2), key=str)
        for t2 in sorted(nxt, key=str):
            if t2 not in index and len(seen) < k:
                index.add(t2)
                seen.append(t2)
    return seen


def _moves(t: Term) -> list[tuple]:
    out = [(a, t2) for a, t2 in action_successors(t)]
    for sem in (TYPE1, TYPE2):
        out += [(f"sigma{int(sem)}", t2) for t2 in clock_successors(t, sem)]
    return out


# -- per-process laws ------------------------------------------------------


def _sos_laws(ctx: _Ctx, t: Term, gen: TermGenerator, rng: random.Random):
    for u in sample_states(t):
        urgent = urgent_set(u)
        c1, c2 = clock_successors(u, TYPE1), clock_successors(u, TYPE2)
        for sem in (TYPE1, TYPE2):
            ctx.expect(can_tick(u, sem) == (TAU not in urgent), f"maximal-progress-{int(sem)}", u)
        ctx.expect(len(c1) <= 1, "type1-time-determinism", u)
        ctx.expect(c1 <= c2, "type1-within-type2", u)

    guarded = ctx.case % 2 == 0
    P = gen.open_term("y", guarded)
    R = gen.rec_closure("y")
    if is_guarded("y", P):
        for sem in (TYPE1, TYPE2):
            for P2 in clock_successors(P, sem):
                ctx.expect(is_guarded("y", P2), "guardedness-preservation", P, P2)
    PR = subst(P, "y", R)
    moves_sub = set(_moves(PR))
    for g, P2 in _moves(P):
        ctx.expect((g, subst(P2, "y", R)) in moves_sub, "substitution-forward", P, R, P2)
    if is_guarded("y", P):
        images = {(g, subst(P2, "y", R)) for g, P2 in _moves(P)}
        for g, u in moves_sub:
            ctx.expect((g, u) in images, "substitution-backward", P, R, u)


def _sigma2_transitivity(ctx: _Ctx, t: Term, gen, rng):
    for u in sample_states(t):
        c2 = clock_successors(u, TYPE2)
        for u1 in c2:
            for u2 in clock_successors(u1, TYPE2):
                ctx.expect(u2 in c2, "sigma2-transitivity", u, u1, u2)


def _coherence(ctx: _Ctx, t: Term, gen, rng):
    for u in sample_states(t):
        c1 = clock_successors(u, TYPE1)
        for u2 in clock_successors(u, TYPE2):
            ok = any(u2 in upward_closure(u1, CLOSURE_LIMIT) for u1 in c1)
            ctx.expect(ok, "coherence", u, u2)


def _succ_soundness(ctx: _Ctx, t: Term, gen: TermGenerator, rng):
    for u in sample_states(t):
        for u1 in clock_successors(u, TYPE1):
            ctx.expect(syntactically_faster(u1, u), "sigma1-step-is-faster", u, u1)
        for u2 in clock_successors(u, TYPE2):
            ctx.expect(u2 in upward_closure(u, CLOSURE_LIMIT), "sigma2-step-is-faster-plus", u, u2)
        for p in faster_set(u).members:
            ctx.expect(urgent_set(p) >= urgent_set(u), "urgent-monotonicity", p, u)
        c1 = clock_successors(u, TYPE1)
        for p in upward_closure(u, CLOSURE_LIMIT):
            for p1 in clock_successors(p, TYPE2):
                ok = any(p1 in upward_closure(q1, CLOSURE_LIMIT) for q1 in c1)
                ctx.expect(ok, "faster-plus-sigma2-matched-by-sigma1", p, u, p1)

    P = gen.open_term("y", ctx.case % 2 == 0)
    R = gen.rec_closure("y")
    g = is_guarded("y", P)
    for p in faster_set(P).members:
        ctx.expect(is_guarded("y", p) == g, "guardedness-equivalence", p, P)
        ctx.expect(syntactically_faster(subst(p, "y", R), subst(P, "y", R)), "substitution-stability", p, P, R)


PROCESS_SUITES: dict[str, Callable] = {
    "sos-laws": _sos_laws,
    "sigma2-transitivity": _sigma2_transitivity,
    "coherence": _coherence,
    "succ-soundness": _succ_soundness,
}


def _run_process_suite(name: str, cfg: GenConfig, report: SuiteReport):
    rng = random.Random(cfg.seed ^ 0x5EED)
    gen = TermGenerator(cfg, rng)
    fn = PROCESS_SUITES[name]
    for i, p in enumerate(generate_corpus(cfg)):
        report.cases += 1
        try:
            fn(_Ctx(report, cfg, i), p.term, gen, rng)
        except ClosureLimitExceeded:
            report.skipped += 1


# -- pair suites -----------------------------------------------------------


def _checked(ctx: _Ctx, p, q, kind, spaces):
    v = check(p, q, kind, spaces=spaces)
    ctx.expect(audit(v, spaces), f"audit-{kind}", p, q)
    ctx.report.tally(f"{kind}:{'holds' if v.holds else 'fails'}")
    return v


def _agree(ctx: _Ctx, prop: str, p, q, verdicts):
    ctx.expect(len({v.holds for v in verdicts}) == 1, prop, p, q, *(f"{v.kind}={v.holds}" for v in verdicts))


def _coincidence_naive(ctx, p, q, spaces):
    vs = [_checked(ctx, p, q, k, spaces) for k in (Naive(1), Naive(2))]
    _agree(ctx, "coincidence-naive", p, q, vs)


def _coincidence_delayed(ctx, p, q, spaces):
    vs = [_checked(ctx, p, q, k, spaces) for k in (Naive(1), Naive(2), Delayed(1), Delayed(2))]
    _agree(ctx, "coincidence-delayed", p, q, vs)


def _coincidence_strong(ctx, p, q, spaces):
    vs = [_checked(ctx, p, q, k, spaces) for k in (Strong(1), Strong(2), Combined)]
    _agree(ctx, "coincidence-strong", p, q, vs)


def _indexed_baseline(ctx, p, q, spaces):
    n1 = _checked(ctx, p, q, Naive(1), spaces)
    try:
        i1 = _checked(ctx, p, q, Indexed(1), spaces)
    except CapUnstable:
        ctx.expect(False, "indexed-cap-stable", p, q)
        return
    _agree(ctx, "indexed-baseline", p, q, [n1, i1])


def _containment(ctx, p, q, spaces):
    sp, sq = spaces
    for sem in (1, 2):
        s = _checked(ctx, p, q, Strong(sem), spaces)
        n = _checked(ctx, p, q, Naive(sem), spaces)
        ctx.expect(not s.holds or n.holds, f"strong-within-naive-{sem}", p, q)
        if s.holds:
            w = WitnessRelation(Combined, s.witness.pairs)
            ctx.expect(validate_witness(w, sp, sq), f"strong{sem}-witness-is-combined", p, q)
    # the transitive syntactic relation, restricted to what q can reach
    ups = frozenset((u, s) for s in sq.states for u in upward_closure(s, CLOSURE_LIMIT))
    for kind in (Naive(1), Strong(1)):
        ctx.expect(validate_witness(WitnessRelation(kind, ups)), f"faster-plus-is-{kind}", q)
    cap = 3
    if len(sp) * len(sq) * (cap + 1) <= FAMILY_BUDGET:
        for sem in (TYPE1, TYPE2):
            fam = indexed_family(sp, sq, sem, cap)
            ok = all(fam[j] <= fam[j + 1] for j in range(cap))
            ctx.expect(ok, f"indexed-monotonicity-{int(sem)}", p, q)


PAIR_SUITES: dict[str, Callable] = {
    "coincidence-naive": _coincidence_naive,
    "coincidence-delayed": _coincidence_delayed,
    "coincidence-strong": _coincidence_strong,
    "indexed-baseline": _indexed_baseline,
    "containment": _containment,
}


def _run_pair_suite(name: str, cfg: GenConfig, report: SuiteReport, limit: int):
    fn = PAIR_SUITES[name]
    for i, (p, q, mode) in enumerate(generate_pairs(cfg)):
        report.cases += 1
        try:
            spaces = (explore(p, limit), explore(q, limit))
        except StateLimitExceeded:
            report.skipped += 1
            continue
        report.tally(f"mode:{mode}")
        try:
            fn(_Ctx(report, cfg, i), p, q, spaces)
        except ClosureLimitExceeded:
            report.skipped += 1


SUITE_NAMES = tuple(PROCESS_SUITES) + tuple(PAIR_SUITES)


def run_suite(name: str, cfg: GenConfig | None = None, limit: int = DEFAULT_LIMIT) -> SuiteReport:
    if name not in SUITE_NAMES:
        raise UnknownSuite(name)
    cfg = cfg or GenConfig()
    report = SuiteReport(name)
    start = time.perf_counter()
    if name in PROCESS_SUITES:
        _run_process_suite(name, cfg, report)
    else:
        _run_pair_suite(name, cfg, report, limit)
    report.wall_time = time.perf_counter() - start
    return report

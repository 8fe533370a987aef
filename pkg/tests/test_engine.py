import dataclasses

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tacs import parse
from tacs.engine import (
    CapUnstable,
    Combined,
    Delayed,
    Indexed,
    Naive,
    RelationKind,
    StateLimitExceeded,
    Strong,
    WitnessRelation,
    audit,
    check,
    explore,
    game_configs,
    reachable_state_count,
    replay_refutation,
    validate_witness,
)
from tacs.generate import GenConfig, generate_pairs
from tacs.semantics import TYPE1, TYPE2, action_successors, clock_successors, urgent_set
from tacs.worked import combined_relation, family_p

P = parse


def test_explore_examples():
    sp = explore(P("s.a.0"), 100)
    assert set(sp.states) == {P("s.a.0"), P("a.0"), P("0")}
    assert sp.clock_edges_1 == {(P("s.a.0"), P("a.0")), (P("a.0"), P("a.0")), (P("0"), P("0"))}
    sp = explore(P("rec x. a.x"), 100)
    r, ar = P("rec x. a.x"), P("a.rec x. a.x")
    assert set(sp.states) == {r, ar}
    assert sp.action_edges == {(r, "a", r), (ar, "a", r)}
    assert sp.clock_edges_1 == {(r, ar), (ar, ar)}
    with pytest.raises(StateLimitExceeded):
        explore(P("rec x. (a.x | b.x)"), 50)


def test_explore_edges_agree_with_semantics():
    sp = explore(P("(s.s.a.0 | 'a.0 + s.b.0) \\ {a}"), 1000)
    assert sp.clock_edges_1 <= sp.clock_edges_2
    for t in sp.states:
        assert {(a, u) for s, a, u in sp.action_edges if s is t} == set(action_successors(t))
        assert {u for s, u in sp.clock_edges_2 if s is t} == clock_successors(t, TYPE2)
    assert [str(t) for t in sp.states] == sorted(str(t) for t in sp.states)


def test_reachable_state_count():
    assert reachable_state_count(P("a.0"), TYPE2) == 2
    assert reachable_state_count(family_p(2), TYPE2) >= 20


def test_relation_kind_validation():
    with pytest.raises(ValueError):
        RelationKind("naive")
    with pytest.raises(ValueError):
        RelationKind("combined", TYPE1)
    with pytest.raises(ValueError):
        Indexed(1, -1)
    assert str(Indexed(2)) == "indexed(2, cap=auto)" and str(Combined) == "combined"


def test_check_examples():
    assert check(P("s.a.0"), P("a.0"), Naive(1)).holds
    v = check(P("s.a.0"), P("a.0"), Strong(1))
    assert not v.holds and v.refutation[-1].move.clause == "3-urgent"
    p, q = P("tau.0 | s.s.tau.0"), P("s.tau.0 | s.s.tau.0")
    assert check(p, q, Naive(2)).holds
    for cap in range(1, 11):
        assert not check(p, q, Indexed(2, cap)).holds
    assert not check(P("(s.a.0 | 'a.0) \\ {a}"), P("(a.0 | 'a.0) \\ {a}"), Naive(1)).holds


def test_validate_witness_examples():
    sp = explore(P("a.0"))
    ident = frozenset((t, t) for t in sp.states)
    assert validate_witness(WitnessRelation(Naive(1), ident))
    assert not validate_witness(WitnessRelation(Naive(1), frozenset({(P("s.a.0"), P("a.0"))})))
    assert validate_witness(WitnessRelation(Combined, combined_relation(2)))
    with pytest.raises(ValueError):
        validate_witness(WitnessRelation(Indexed(1), frozenset()))


def test_tampered_verdicts_fail_audit():
    v = check(P("s.a.0 + b.0"), P("a.0 + b.0"), Naive(1))
    assert v.holds and audit(v)
    smaller = dataclasses.replace(v.witness, pairs=frozenset(list(v.witness.pairs)[1:]))
    assert not audit(dataclasses.replace(v, witness=smaller))
    r = check(P("s.a.0"), P("a.0"), Strong(2))
    assert replay_refutation(r)
    assert not replay_refutation(dataclasses.replace(r, refutation=r.refutation[:-1] or [r.refutation[0]]) ) or len(r.refutation) == 1
    assert not audit(dataclasses.replace(r, q=P("s.a.0")))


def test_verdicts_are_reproducible():
    p, q = P("tau.0 | s.s.tau.0"), P("s.tau.0 | s.s.tau.0")
    a, b = check(p, q, Indexed(1)).to_obj(), check(p, q, Indexed(1)).to_obj()
    assert a == b and a["stats"]["cap"] >= 1


def test_game_configs_include_root():
    p, q = P("s.a.0"), P("a.0")
    assert (p, q) in game_configs(p, q, Strong(1))


# -- brute-force greatest fixpoint straight from the defining clauses --------


def _plus(t, sem):
    seen, todo = set(), list(clock_successors(t, sem))
    while todo:
        u = todo.pop()
        if u not in seen:
            seen.add(u)
            todo.extend(clock_successors(u, sem))
    return seen


def _acts(t, a):
    return {u for b, u in action_successors(t) if b == a}


def _ok(kind, cfg, rel):
    p, q = cfg[0], cfg[1]
    fam, sem = kind.family, kind.sem
    j = cfg[2] if kind.indexed else None
    ext = (j,) if kind.indexed else ()
    for a, p2 in action_successors(p):
        if fam == "delayed":
            pre = _plus(q, sem) | {q}
            qs = {w for u in pre for m in _acts(u, a) for w in _plus(m, sem) | {m}}
        else:
            qs = _acts(q, a)
        if not any((p2, q2) + ext in rel for q2 in qs):
            return False
    for a, q2 in action_successors(q):
        if not any((p2, q2) + ext in rel for p2 in _acts(p, a)):
            return False
    psem = TYPE1 if fam == "combined" else sem
    qsem = TYPE2 if fam == "combined" else sem
    for p2 in clock_successors(p, psem):
        if fam in ("strong", "combined") and not urgent_set(q) <= urgent_set(p):
            return False
        qs = _plus(q, qsem) if fam == "delayed" else clock_successors(q, qsem)
        if not (any((p2, q2) + ext in rel for q2 in qs) or (kind.indexed and j > 0 and (p2, q, j - 1) in rel)):
            return False
    if kind.indexed:
        for q2 in clock_successors(q, sem):
            if not (any((p2, q2, j) in rel for p2 in clock_successors(p, sem)) or (p, q2, min(j + 1, kind.cap)) in rel):
                return False
    return True


def brute_force(p, q, kind):
    sp, sq = explore(p), explore(q)
    credits = range(kind.cap + 1) if kind.indexed else [None]
    rel = {(a, b) + ((j,) if kind.indexed else ()) for a in sp.states for b in sq.states for j in credits}
    while True:
        bad = {c for c in rel if not _ok(kind, c, rel)}
        if not bad:
            break
        rel -= bad
    return ((p, q, 0) if kind.indexed else (p, q)) in rel


KINDS = [Naive(1), Naive(2), Delayed(1), Delayed(2), Strong(1), Strong(2), Combined, Indexed(1, 1), Indexed(2, 2), Indexed(1, 3)]

def _small_pairs(n: int, max_product: int = 4000):
    out = []
    for p, q, _ in generate_pairs(GenConfig(seed=21, size_budget=14, count=4 * n)):
        try:
            if len(explore(p, 300)) * len(explore(q, 300)) <= max_product:
                out.append((p.term, q.term))
        except StateLimitExceeded:
            pass
    return out[:n]


SEPARATING = [
    (P("tau.0 | s.s.tau.0"), P("s.tau.0 | s.s.tau.0")),
    (P("s.a.0"), P("a.0")),
    (P("s.a.0 | 'a.0"), P("a.0 | 'a.0")),
    (P("a.0"), P("s.a.0")),
    (P("a.s.b.0 + s.c.0"), P("s.a.b.0 + s.s.c.0")),
]
PAIRS = SEPARATING + _small_pairs(60)


@pytest.mark.parametrize("kind", KINDS, ids=str)
def test_engine_agrees_with_brute_force(kind):
    for p, q in PAIRS:
        v = check(p, q, kind)
        assert v.holds == brute_force(p, q, kind), (str(p), str(q))
        assert audit(v)


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.sampled_from(KINDS))
def test_engine_agrees_with_brute_force_random(seed, kind):
    (p, q, _), = generate_pairs(GenConfig(seed=seed, size_budget=6, count=1))
    try:
        n = len(explore(p, 200)) * len(explore(q, 200))
    except StateLimitExceeded:
        n = None
    assume(n is not None and n <= 2000)
    assert check(p, q, kind).holds == brute_force(p.term, q.term, kind)

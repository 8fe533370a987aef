import itertools

import pytest
from hypothesis import given

from tacs import NIL, ActPrefix, ClockPrefix, Rec, Sum, Var, parse
from tacs.faster import ClosureLimitExceeded, faster_plus, faster_set, syntactically_faster, upward_closure
from tacs.semantics import urgent_set
from tacs.terms import is_guarded, subst

from conftest import processes

P = parse
REC = P("rec x. s.a.x")


def test_faster_set_examples():
    assert faster_set(P("s.a.0")).members == {P("s.a.0"), P("a.0")}
    assert faster_set(P("0")).members == {P("0")}
    assert faster_set(REC).members == {REC, P("s.a.rec x. s.a.x"), P("a.rec x. s.a.x")}


def test_syntactically_faster_examples():
    assert syntactically_faster(P("a.0"), P("s.a.0"))
    assert syntactically_faster(P("a.0 | b.0"), P("s.a.0 | s.b.0"))
    assert syntactically_faster(P("a.0 | s.b.0"), P("s.a.0 | s.b.0"))
    assert not syntactically_faster(P("a.0"), P("s.s.a.0"))
    assert not syntactically_faster(P("b.0"), P("s.a.b.0"))


def test_upward_closure_examples():
    assert upward_closure(P("s.s.a.0")) == {P("s.s.a.0"), P("s.a.0"), P("a.0")}
    assert upward_closure(P("a.0")) == {P("a.0")}
    assert upward_closure(REC) == faster_set(REC).members
    assert faster_plus(P("a.0"), P("s.s.a.0"))
    assert not faster_plus(P("0"), P("a.0"))
    assert faster_plus(P("a.rec x. s.a.x"), REC)


def test_closure_limit():
    wide = P(" | ".join(["s.s.a.0"] * 8))
    with pytest.raises(ClosureLimitExceeded):
        upward_closure(wide, limit=100)
    assert len(upward_closure(wide)) == 3**8


def _universe(size: int):
    """All terms over 0, x, a., s., rec x. and + with at most ``size`` nodes."""
    by_size = {1: [NIL, Var("x")]}
    for n in range(2, size + 1):
        out = []
        for t in by_size[n - 1]:
            out += [ActPrefix("a", t), ClockPrefix(t), Rec("x", t)]
        for k in range(1, n - 1):
            out += [Sum(l, r) for l, r in itertools.product(by_size[k], by_size[n - 1 - k])]
        by_size[n] = out
    return [t for ts in by_size.values() for t in ts]


def _rule_closure(universe):
    """Least relation on the universe closed under the defining rules, by iteration."""
    uni = set(universe)
    rel = {(t, t) for t in universe}
    changed = True
    while changed:
        changed = False
        new = set()
        for q in universe:
            match q:
                case ClockPrefix(b):
                    new.add((b, q))
                case Sum(l, r):
                    new.update((Sum(a, b), q) for a, l2 in rel if l2 is l for b, r2 in rel if r2 is r)
                case Rec(x, b) if is_guarded(x, b):
                    for p1, b2 in rel:
                        if b2 is b:
                            new.add((subst(p1, x, q), q))
        new = {pr for pr in new if pr[0] in uni}
        if not new <= rel:
            rel |= new
            changed = True
    return rel


def test_faster_set_matches_rule_closure_oracle():
    universe = _universe(6)
    uni = set(universe)
    rel = _rule_closure(universe)
    assert {p for p, q in rel if q is REC} == faster_set(REC).members
    for q in universe:
        assert {p for p, q2 in rel if q2 is q} == faster_set(q).members & uni


@given(processes())
def test_reflexive_and_urgent_monotone(q):
    fs = faster_set(q).members
    assert q in fs
    for p in fs:
        assert urgent_set(p) >= urgent_set(q)

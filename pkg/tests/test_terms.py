import copy
import pickle

import pytest

from tacs import (
    NIL,
    TAU,
    ActPrefix,
    ClockPrefix,
    Par,
    Rec,
    Relabel,
    Relabelling,
    Restrict,
    Sum,
    Var,
    free_vars,
    is_guarded,
    structural_eq,
    substitute,
    validate_process,
)
from tacs.terms import (
    NotClosed,
    SubstituteOpenTerm,
    TermError,
    UnguardedRecursion,
    VariableCapture,
    complement,
    subst,
    unfold,
)

a_x = ActPrefix("a", Var("x"))


def test_free_vars():
    assert free_vars(NIL) == frozenset()
    assert free_vars(Rec("x", a_x)) == frozenset()
    assert free_vars(Sum(Var("x"), Rec("x", a_x))) == {"x"}


def test_is_guarded():
    assert is_guarded("x", a_x)
    assert not is_guarded("x", ClockPrefix(Var("x")))
    assert is_guarded("x", NIL)
    assert not is_guarded("x", Sum(a_x, Var("x")))
    assert is_guarded("x", Rec("x", ClockPrefix(Var("x"))))


def test_validate_process():
    assert validate_process(Rec("x", a_x)).term is Rec("x", a_x)
    with pytest.raises(UnguardedRecursion) as e:
        validate_process(Rec("x", ClockPrefix(Var("x"))))
    assert e.value.var == "x"
    with pytest.raises(NotClosed) as e:
        validate_process(Var("x"))
    assert e.value.var == "x"


def test_substitute():
    assert substitute(a_x, "x", NIL) == ActPrefix("a", NIL)
    assert substitute(Rec("x", a_x), "x", NIL) is Rec("x", a_x)
    assert substitute(Sum(Var("x"), Var("y")), "x", NIL) == Sum(NIL, Var("y"))
    with pytest.raises(SubstituteOpenTerm):
        substitute(a_x, "x", Var("z"))


def test_open_subst_capture_is_detected():
    with pytest.raises(VariableCapture):
        subst(Rec("y", ActPrefix("a", Sum(Var("x"), Var("y")))), "x", Var("y"))


def test_structural_eq_is_literal():
    assert structural_eq(ClockPrefix(NIL), ClockPrefix(NIL))
    assert not structural_eq(Sum(NIL, ActPrefix("a", NIL)), Sum(ActPrefix("a", NIL), NIL))
    assert not structural_eq(Rec("x", a_x), Rec("y", ActPrefix("a", Var("y"))))


def test_hash_consing_and_immutability():
    t = Par(ActPrefix("a", NIL), ClockPrefix(NIL))
    assert t is Par(ActPrefix("a", NIL), ClockPrefix(NIL))
    assert copy.deepcopy(t) is t
    assert pickle.loads(pickle.dumps(t)) is t
    with pytest.raises(AttributeError):
        t.left = NIL


def test_action_checks():
    assert complement("a") == "'a" and complement("'a") == "a"
    with pytest.raises(TermError):
        complement(TAU)
    for bad in ("sigma", "s", "", "'tau", "A b"):
        with pytest.raises(TermError):
            ActPrefix(bad, NIL)
    with pytest.raises(TermError):
        Restrict(NIL, {TAU})


def test_relabelling():
    f = Relabelling.of({"a": "b", "c": "c"})
    assert f("a") == "b" and f("'a") == "'b" and f("c") == "c" and f(TAU) == TAU
    assert f == Relabelling.of({"a": "b"})
    with pytest.raises(TermError):
        Relabelling.of({"tau": "a"})
    assert Relabel(NIL, f) is Relabel(NIL, Relabelling.of({"a": "b"}))


def test_unfold():
    r = Rec("x", a_x)
    assert unfold(r) == ActPrefix("a", r)

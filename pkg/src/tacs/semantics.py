"""Urgent action sets, action transitions and clock transitions.

``Type1`` clock steps use every clock rule except the one letting a time
step skip a clock prefix; ``Type2`` adds that rule.  All functions accept
open terms and apply the rules literally: a free variable has no
transitions and an empty urgent set.
"""

from __future__ import annotations

import enum
from functools import lru_cache

from .terms import (
    NIL,
    TAU,
    ActPrefix,
    ClockPrefix,
    Nil,
    Par,
    Rec,
    Relabel,
    Restrict,
    Sum,
    Term,
    Var,
    complement,
    subst,
)


class SemanticsType(enum.IntEnum):
    TYPE1 = 1
    TYPE2 = 2


TYPE1 = SemanticsType.TYPE1
TYPE2 = SemanticsType.TYPE2

CLOCK = "sigma"  # label of clock transitions when edges are listed together with actions


@lru_cache(maxsize=1 << 18)
def urgent_set(t: Term) -> frozenset:
    match t:
        case Nil() | Var() | ClockPrefix():
            return frozenset()
        case ActPrefix(a, _):
            return frozenset({a})
        case Rec(_, body):
            return urgent_set(body)
        case Sum(l, r):
            return urgent_set(l) | urgent_set(r)
        case Par(l, r):
            ul, ur = urgent_set(l), urgent_set(r)
            u = ul | ur
            if any(a != TAU and complement(a) in ur for a in ul):
                u = u | {TAU}
            return u
        case Restrict(body, _):
            return frozenset(a for a in urgent_set(body) if not t.blocks(a))
        case Relabel(body, fn):
            return frozenset(fn(a) for a in urgent_set(body))
    raise TypeError(t)


@lru_cache(maxsize=1 << 18)
def action_successors(t: Term) -> frozenset:
    """All pairs ``(action, target)`` with ``t --action--> target``."""
    match t:
        case Nil() | Var():
            return frozenset()
        case ActPrefix(a, body):
            return frozenset({(a, body)})
        case ClockPrefix(body):
            return action_successors(body)
        case Rec(x, body):
            return frozenset((a, subst(b, x, t)) for a, b in action_successors(body))
        case Sum(l, r):
            return action_successors(l) | action_successors(r)
        case Par(l, r):
            sl, sr = action_successors(l), action_successors(r)
            out = {(a, Par(l2, r)) for a, l2 in sl}
            out.update((a, Par(l, r2)) for a, r2 in sr)
            for a, l2 in sl:
                if a == TAU:
                    continue
                ca = complement(a)
                out.update((TAU, Par(l2, r2)) for b, r2 in sr if b == ca)
            return frozenset(out)
        case Restrict(body, names):
            return frozenset((a, Restrict(b, names)) for a, b in action_successors(body) if not t.blocks(a))
        case Relabel(body, fn):
            return frozenset((fn(a), Relabel(b, fn)) for a, b in action_successors(body))
    raise TypeError(t)


@lru_cache(maxsize=1 << 18)
def clock_successors(t: Term, sem: SemanticsType) -> frozenset:
    """All targets of clock transitions of the given type."""
    match t:
        case Nil():
            return frozenset({NIL})
        case Var():
            return frozenset()
        case ActPrefix(a, _):
            return frozenset() if a == TAU else frozenset({t})
        case ClockPrefix(body):
            if sem == TYPE2:
                return clock_successors(body, sem) | {body}
            return frozenset({body})
        case Rec(x, body):
            return frozenset(subst(b, x, t) for b in clock_successors(body, sem))
        case Sum(l, r):
            return frozenset(Sum(l2, r2) for l2 in clock_successors(l, sem) for r2 in clock_successors(r, sem))
        case Par(l, r):
            if TAU in urgent_set(t):
                return frozenset()
            return frozenset(Par(l2, r2) for l2 in clock_successors(l, sem) for r2 in clock_successors(r, sem))
        case Restrict(body, names):
            return frozenset(Restrict(b, names) for b in clock_successors(body, sem))
        case Relabel(body, fn):
            return frozenset(Relabel(b, fn) for b in clock_successors(body, sem))
    raise TypeError(t)


def can_tick(t: Term, sem: SemanticsType = TYPE1) -> bool:
    return bool(clock_successors(t, sem))


def successors(t: Term, sem: SemanticsType) -> list[tuple[str, Term]]:
    """Action and clock successors together, clock steps labelled ``CLOCK``."""
    out = list(action_successors(t))
    out.extend((CLOCK, t2) for t2 in clock_successors(t, sem))
    return out


def clear_caches():
    for f in (urgent_set, action_successors, clock_successors):
        f.cache_clear()

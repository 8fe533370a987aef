"""The syntactic faster-than relation and its transitive closure.

``faster_set(q)`` is the finite set of all ``p`` with ``p`` syntactically
faster than ``q``.  The relation only strips a leading clock prefix,
distributes over ``|``, ``+``, restriction and relabelling, and unfolds a
guarded recursion; there is no descent under prefixes, so the set is
finite and computable by structural recursion on ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .terms import (
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
    is_guarded,
    subst,
)

DEFAULT_CLOSURE_LIMIT = 100_000


class ClosureLimitExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"upward closure exceeded {limit} terms")
        self.limit = limit


@dataclass(frozen=True)
class FasterSet:
    base: Term
    members: frozenset

    def __contains__(self, p: Term) -> bool:
        return p in self.members

    def __len__(self):
        return len(self.members)


@lru_cache(maxsize=1 << 16)
def _faster(q: Term) -> frozenset:
    out = {q}
    match q:
        case Nil() | Var() | ActPrefix():
            pass
        case ClockPrefix(body):
            out.add(body)
        case Par(l, r):
            out.update(Par(a, b) for a in _faster(l) for b in _faster(r))
        case Sum(l, r):
            out.update(Sum(a, b) for a in _faster(l) for b in _faster(r))
        case Restrict(body, names):
            out.update(Restrict(a, names) for a in _faster(body))
        case Relabel(body, fn):
            out.update(Relabel(a, fn) for a in _faster(body))
        case Rec(x, body):
            if is_guarded(x, body):
                # may raise VariableCapture when q is open and shadows a free name
                out.update(subst(a, x, q) for a in _faster(body))
        case _:
            raise TypeError(q)
    return frozenset(out)


def faster_set(q: Term) -> FasterSet:
    return FasterSet(q, _faster(q))


def syntactically_faster(p: Term, q: Term) -> bool:
    """Decide ``p`` syntactically faster than ``q`` (one rule derivation)."""
    return p in _faster(q)


def upward_closure(q: Term, limit: int = DEFAULT_CLOSURE_LIMIT) -> frozenset:
    """All ``p`` related to ``q`` by the transitive closure of the syntactic relation."""
    return _upward_closure(q, limit)


@lru_cache(maxsize=1 << 14)
def _upward_closure(q: Term, limit: int) -> frozenset:
    seen = {q}
    todo = [q]
    while todo:
        t = todo.pop()
        for p in _faster(t):
            if p not in seen:
                seen.add(p)
                if len(seen) > limit:
                    raise ClosureLimitExceeded(limit)
                todo.append(p)
    return frozenset(seen)


def faster_plus(p: Term, q: Term, limit: int = DEFAULT_CLOSURE_LIMIT) -> bool:
    return p in upward_closure(q, limit)

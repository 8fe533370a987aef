"""Abstract syntax of TACS terms.

Terms are immutable and hashable.  Actions are plain strings: a name such as
``"a"``, a co-name ``"'a"``, or ``TAU``.  Structural equality is literal,
bound-variable names included.
"""

from __future__ import annotations

import re
import threading
import weakref
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

TAU = "tau"
RESERVED = frozenset({"tau", "sigma", "s", "rec"})
_NAME_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


class TermError(ValueError):
    pass


class NotClosed(TermError):
    def __init__(self, var: str):
        super().__init__(f"free variable {var!r}")
        self.var = var


class UnguardedRecursion(TermError):
    def __init__(self, var: str):
        super().__init__(f"recursion variable {var!r} is not guarded")
        self.var = var


class SubstituteOpenTerm(TermError):
    def __init__(self, free: Iterable[str]):
        free = sorted(free)
        super().__init__(f"substituted term has free variables {free}")
        self.free = free


class VariableCapture(TermError):
    """Raised when an open substitution would bind one of its free variables."""

    def __init__(self, var: str):
        super().__init__(f"substitution would capture variable {var!r}")
        self.var = var


# -- actions ---------------------------------------------------------------


def is_name(s: str) -> bool:
    return bool(_NAME_RE.match(s)) and s not in RESERVED


def check_action(a: str) -> str:
    if a == TAU or is_name(a) or (a.startswith("'") and is_name(a[1:])):
        return a
    raise TermError(f"not an action: {a!r}")


def complement(a: str) -> str:
    if a == TAU:
        raise TermError("tau has no complement")
    return a[1:] if a.startswith("'") else "'" + a


def base_name(a: str) -> str:
    """The plain name underlying a visible action."""
    if a == TAU:
        raise TermError("tau has no name")
    return a.lstrip("'")


# -- terms -----------------------------------------------------------------


class Term:
    """Base of all term nodes.

    Terms are hash-consed: constructing a term equal to a live one returns
    that same object, so structural equality is identity and costs O(1)
    however deep the terms grow.
    """

    __slots__ = ("__weakref__",)
    __match_args__: tuple[str, ...] = ()
    _table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()
    _lock = threading.Lock()

    @classmethod
    def _make(cls, *fields):
        key = (cls,) + fields
        with Term._lock:
            obj = Term._table.get(key)
            if obj is None:
                obj = object.__new__(cls)
                for name, value in zip(cls.__match_args__, fields):
                    object.__setattr__(obj, name, value)
                Term._table[key] = obj
        return obj

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (type(self), tuple(getattr(self, f) for f in self.__match_args__))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __repr__(self) -> str:
        args = ", ".join(repr(getattr(self, f)) for f in self.__match_args__)
        return f"{type(self).__name__}({args})"

    def __str__(self) -> str:
        from .syntax import pretty

        return pretty(self)


class Nil(Term):
    __slots__ = ()

    def __new__(cls):
        return cls._make()


class Var(Term):
    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __new__(cls, name: str):
        return cls._make(name)


class ActPrefix(Term):
    __slots__ = ("action", "body")
    __match_args__ = ("action", "body")

    def __new__(cls, action: str, body: Term):
        return cls._make(check_action(action), body)


class ClockPrefix(Term):
    __slots__ = ("body",)
    __match_args__ = ("body",)

    def __new__(cls, body: Term):
        return cls._make(body)


class Sum(Term):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __new__(cls, left: Term, right: Term):
        return cls._make(left, right)


class Par(Term):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __new__(cls, left: Term, right: Term):
        return cls._make(left, right)


class Restrict(Term):
    """``body \\ L``; ``names`` holds plain names, blocking both ``a`` and ``'a``."""

    __slots__ = ("body", "names")
    __match_args__ = ("body", "names")

    def __new__(cls, body: Term, names: Iterable[str]):
        names = frozenset(names)
        for n in names:
            if not is_name(n):
                raise TermError(f"restriction set may only hold plain names, got {n!r}")
        return cls._make(body, names)

    def blocks(self, a: str) -> bool:
        return a != TAU and base_name(a) in self.names


@dataclass(frozen=True, eq=False)
class Relabelling:
    """Finite relabelling stored as its non-identity part on plain names."""

    pairs: tuple = ()

    def __post_init__(self):
        pairs = tuple(sorted((k, v) for k, v in dict(self.pairs).items() if k != v))
        for k, v in pairs:
            if not (is_name(k) and is_name(v)):
                raise TermError(f"relabelling maps plain names only: {k!r}->{v!r}")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "_map", dict(pairs))

    @classmethod
    def of(cls, mapping: Mapping[str, str]) -> "Relabelling":
        return cls(tuple(mapping.items()))

    def __hash__(self):
        return hash(self.pairs)

    def __eq__(self, other):
        return isinstance(other, Relabelling) and self.pairs == other.pairs

    def __call__(self, a: str) -> str:
        if a == TAU:
            return TAU
        co = a.startswith("'")
        name = a[1:] if co else a
        name = self._map.get(name, name)
        return "'" + name if co else name


class Relabel(Term):
    __slots__ = ("body", "fn")
    __match_args__ = ("body", "fn")

    def __new__(cls, body: Term, fn: Relabelling):
        return cls._make(body, fn)


class Rec(Term):
    __slots__ = ("var", "body")
    __match_args__ = ("var", "body")

    def __new__(cls, var: str, body: Term):
        return cls._make(var, body)


NIL = Nil()


# -- variables -------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def free_vars(t: Term) -> frozenset:
    match t:
        case Var(name):
            return frozenset({name})
        case Rec(x, body):
            return free_vars(body) - {x}
        case Nil():
            return frozenset()
        case ActPrefix(_, body) | ClockPrefix(body) | Restrict(body, _) | Relabel(body, _):
            return free_vars(body)
        case Sum(l, r) | Par(l, r):
            return free_vars(l) | free_vars(r)
    raise TypeError(t)


def is_closed(t: Term) -> bool:
    return not free_vars(t)


@lru_cache(maxsize=1 << 16)
def is_guarded(x: str, t: Term) -> bool:
    """True iff every free occurrence of ``x`` in ``t`` lies under an action prefix."""
    match t:
        case Var(name):
            return name != x
        case ActPrefix():
            return True
        case Rec(y, body):
            return y == x or is_guarded(x, body)
        case Nil():
            return True
        case ClockPrefix(body) | Restrict(body, _) | Relabel(body, _):
            return is_guarded(x, body)
        case Sum(l, r) | Par(l, r):
            return is_guarded(x, l) and is_guarded(x, r)
    raise TypeError(t)


def unguarded_recursion(t: Term) -> str | None:
    """Name of the first recursion variable not guarded in its body, or None."""
    match t:
        case Rec(x, body):
            if not is_guarded(x, body):
                return x
            return unguarded_recursion(body)
        case Nil() | Var():
            return None
        case ActPrefix(_, body) | ClockPrefix(body) | Restrict(body, _) | Relabel(body, _):
            return unguarded_recursion(body)
        case Sum(l, r) | Par(l, r):
            return unguarded_recursion(l) or unguarded_recursion(r)
    raise TypeError(t)


@dataclass(frozen=True)
class Process:
    """A term certified closed with guarded recursion."""

    term: Term

    def __str__(self):
        return str(self.term)


def validate_process(t: Term) -> Process:
    fv = free_vars(t)
    if fv:
        raise NotClosed(min(fv))
    x = unguarded_recursion(t)
    if x is not None:
        raise UnguardedRecursion(x)
    return Process(t)


def is_process(t: Term) -> bool:
    return not free_vars(t) and unguarded_recursion(t) is None


# -- substitution ----------------------------------------------------------


def substitute(t: Term, x: str, r: Term) -> Term:
    """``t[r/x]`` for closed ``r``.  No renaming is ever performed."""
    fv = free_vars(r)
    if fv:
        raise SubstituteOpenTerm(fv)
    return subst(t, x, r)


@lru_cache(maxsize=1 << 18)
def subst(t: Term, x: str, r: Term) -> Term:
    """Substitution that also admits open ``r`` but refuses to capture its variables."""
    if x not in free_vars(t):
        return t
    match t:
        case Var():
            return r
        case ActPrefix(a, body):
            return ActPrefix(a, subst(body, x, r))
        case ClockPrefix(body):
            return ClockPrefix(subst(body, x, r))
        case Sum(l, rr):
            return Sum(subst(l, x, r), subst(rr, x, r))
        case Par(l, rr):
            return Par(subst(l, x, r), subst(rr, x, r))
        case Restrict(body, names):
            return Restrict(subst(body, x, r), names)
        case Relabel(body, fn):
            return Relabel(subst(body, x, r), fn)
        case Rec(y, body):
            # y != x here, since x is free in t
            if y in free_vars(r):
                raise VariableCapture(y)
            return Rec(y, subst(body, x, r))
    raise TypeError(t)


def unfold(t: Rec) -> Term:
    return subst(t.body, t.var, t)


def structural_eq(s: Term, t: Term) -> bool:
    return s is t


def size(t: Term) -> int:
    match t:
        case Nil() | Var():
            return 1
        case ActPrefix(_, body) | ClockPrefix(body) | Restrict(body, _) | Relabel(body, _) | Rec(_, body):
            return 1 + size(body)
        case Sum(l, r) | Par(l, r):
            return 1 + size(l) + size(r)
    raise TypeError(t)


def subterms(t: Term):
    yield t
    match t:
        case ActPrefix(_, body) | ClockPrefix(body) | Restrict(body, _) | Relabel(body, _) | Rec(_, body):
            yield from subterms(body)
        case Sum(l, r) | Par(l, r):
            yield from subterms(l)
            yield from subterms(r)

"""Concrete text syntax and JSON serialization for TACS terms.

Grammar, loosest binding first (both binary operators are left-associative)::

    sum     := par ('+' par)*
    par     := prefix ('|' prefix)*
    prefix  := ACTION '.' prefix | ('s' | 'sigma') '.' prefix
             | 'rec' VAR '.' prefix | postfix
    postfix := atom ('\\' '{' names '}' | '[' new/old, ... ']')*
    atom    := '0' | VAR | '(' sum ')'

``'a`` is the co-name of ``a`` and ``tau`` the internal action.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass

from .terms import (
    NIL,
    TAU,
    ActPrefix,
    ClockPrefix,
    Nil,
    Par,
    Rec,
    Relabel,
    Relabelling,
    Restrict,
    Sum,
    Term,
    TermError,
    Var,
    check_action,
    free_vars,
    is_guarded,
    is_name,
)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        assert 0 <= self.start <= self.end


class ErrorKind(str, enum.Enum):
    LEX = "Lex"
    SYNTAX = "Syntax"
    TAU_IN_RESTRICTION = "TauInRestriction"
    TAU_IN_RELABELLING = "TauInRelabelling"
    UNGUARDED_RECURSION = "UnguardedRecursion"
    UNBOUND_VARIABLE = "UnboundVariable"


class ParseError(ValueError):
    def __init__(self, kind: ErrorKind, span: SourceSpan, message: str):
        super().__init__(f"{kind.value} at {span.start}-{span.end}: {message}")
        self.kind = kind
        self.span = span


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<co>'[a-z][a-zA-Z0-9_]*)
  | (?P<ident>[a-z][a-zA-Z0-9_]*)
  | (?P<zero>0)
  | (?P<punct>[.+|\\{}\[\]/,()])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str  # 'co', 'ident', 'zero', a punctuation char, or 'eof'
    text: str
    start: int
    end: int


def _tokenize(text: str) -> list[_Tok]:
    # offsets are converted to UTF-8 byte positions
    def b(i):
        return len(text[:i].encode("utf-8"))

    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(ErrorKind.LEX, SourceSpan(b(pos), b(pos + 1)), f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            if kind == "punct":
                kind = m.group()
            toks.append(_Tok(kind, m.group(), b(m.start()), b(m.end())))
        pos = m.end()
    toks.append(_Tok("eof", "", b(len(text)), b(len(text))))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def fail(self, msg, tok=None, kind=ErrorKind.SYNTAX):
        tok = tok or self.tok
        raise ParseError(kind, SourceSpan(tok.start, tok.end), msg)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def parse(self) -> Term:
        t = self.sum()
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}")
        return t

    def sum(self) -> Term:
        t = self.par()
        while self.tok.kind == "+":
            self.advance()
            t = Sum(t, self.par())
        return t

    def par(self) -> Term:
        t = self.prefix()
        while self.tok.kind == "|":
            self.advance()
            t = Par(t, self.prefix())
        return t

    def prefix(self) -> Term:
        tok = self.tok
        if tok.kind == "ident" and tok.text == "rec":
            self.advance()
            var = self.expect("ident")
            if not is_name(var.text):
                self.fail(f"reserved word {var.text!r} used as variable", var)
            self.expect(".")
            body = self.prefix()
            if not is_guarded(var.text, body):
                raise ParseError(
                    ErrorKind.UNGUARDED_RECURSION,
                    SourceSpan(tok.start, self.toks[self.i - 1].end),
                    f"variable {var.text!r} is not guarded by an action prefix",
                )
            return Rec(var.text, body)
        if tok.kind == "ident" and tok.text in ("s", "sigma"):
            self.advance()
            self.expect(".")
            return ClockPrefix(self.prefix())
        if tok.kind == "co" or (tok.kind == "ident" and self.peek().kind == "."):
            if tok.text != TAU and not is_name(tok.text.lstrip("'")):
                self.fail(f"reserved word {tok.text!r} used as action")
            self.advance()
            self.expect(".")
            return ActPrefix(tok.text, self.prefix())
        return self.postfix()

    def postfix(self) -> Term:
        t = self.atom()
        while True:
            if self.tok.kind == "\\":
                self.advance()
                t = Restrict(t, frozenset(self.names()))
            elif self.tok.kind == "[":
                t = Relabel(t, self.relabelling())
            else:
                return t

    def names(self) -> list[str]:
        self.expect("{")
        out = []
        while self.tok.kind != "}":
            if out:
                self.expect(",")
            tok = self.advance()
            if tok.kind == "ident" and tok.text == TAU:
                self.fail("tau cannot be restricted", tok, ErrorKind.TAU_IN_RESTRICTION)
            if tok.kind != "ident" or not is_name(tok.text):
                self.fail(f"restriction sets hold plain action names, found {tok.text!r}", tok)
            out.append(tok.text)
        self.advance()
        return out

    def relabelling(self) -> Relabelling:
        self.expect("[")
        mapping: dict[str, str] = {}
        while self.tok.kind != "]":
            if mapping:
                self.expect(",")
            new = self._relabel_name()
            self.expect("/")
            old_tok = self.tok
            old = self._relabel_name()
            if old in mapping:
                self.fail(f"{old!r} relabelled twice", old_tok)
            mapping[old] = new
        self.advance()
        return Relabelling.of(mapping)

    def _relabel_name(self) -> str:
        tok = self.advance()
        if tok.kind == "ident" and tok.text == TAU:
            self.fail("tau cannot be relabelled", tok, ErrorKind.TAU_IN_RELABELLING)
        if tok.kind != "ident" or not is_name(tok.text):
            self.fail(f"relabellings map plain action names, found {tok.text!r}", tok)
        return tok.text

    def atom(self) -> Term:
        tok = self.tok
        if tok.kind == "zero":
            self.advance()
            return NIL
        if tok.kind == "(":
            self.advance()
            t = self.sum()
            self.expect(")")
            return t
        if tok.kind == "ident":
            if not is_name(tok.text):
                self.fail(f"reserved word {tok.text!r} used as variable")
            self.advance()
            return Var(tok.text)
        self.fail(f"expected a term, found {tok.text or 'end of input'!r}")


def parse(text: str, closed: bool = False) -> Term:
    """Parse a term.  With ``closed=True`` free variables are rejected."""
    p = _Parser(text)
    t = p.parse()
    if closed:
        _check_bound(t, text)
    return t


def _check_bound(t: Term, text: str):
    fv = free_vars(t)
    if fv:
        name = min(fv)
        m = re.search(rf"(?<![a-zA-Z0-9_']){re.escape(name)}(?![a-zA-Z0-9_])", text)
        start = len(text[: m.start()].encode()) if m else 0
        raise ParseError(ErrorKind.UNBOUND_VARIABLE, SourceSpan(start, start + len(name)), f"unbound variable {name!r}")


# -- printing --------------------------------------------------------------

_SUM, _PAR, _PREFIX, _POSTFIX, _ATOM = range(5)


def _level(t: Term) -> int:
    match t:
        case Sum():
            return _SUM
        case Par():
            return _PAR
        case ActPrefix() | ClockPrefix() | Rec():
            return _PREFIX
        case Restrict() | Relabel():
            return _POSTFIX
    return _ATOM


def _pp(t: Term, need: int) -> str:
    s = pretty(t)
    return f"({s})" if _level(t) < need else s


def _render(t: Term) -> str:
    match t:
        case Nil():
            return "0"
        case Var(name):
            return name
        case ActPrefix(a, body):
            return f"{a}.{_pp(body, _PREFIX)}"
        case ClockPrefix(body):
            return f"s.{_pp(body, _PREFIX)}"
        case Rec(x, body):
            return f"rec {x}. {_pp(body, _PREFIX)}"
        case Sum(l, r):
            return f"{_pp(l, _SUM)} + {_pp(r, _PAR)}"
        case Par(l, r):
            return f"{_pp(l, _PAR)} | {_pp(r, _PREFIX)}"
        case Restrict(body, names):
            return f"{_pp(body, _POSTFIX)} \\ {{{', '.join(sorted(names))}}}"
        case Relabel(body, fn):
            items = ", ".join(f"{new}/{old}" for old, new in fn.pairs)
            return f"{_pp(body, _POSTFIX)}[{items}]"
    raise TypeError(t)


_pretty_cache: dict = {}


def pretty(t: Term) -> str:
    s = _pretty_cache.get(t)
    if s is None:
        s = _render(t)
        if len(_pretty_cache) > 1 << 17:
            _pretty_cache.clear()
        _pretty_cache[t] = s
    return s


# -- JSON ------------------------------------------------------------------


class MalformedDocument(ValueError):
    pass


def to_obj(t: Term) -> dict:
    match t:
        case Nil():
            return {"nil": {}}
        case Var(name):
            return {"var": {"name": name}}
        case ActPrefix(a, body):
            return {"act": {"action": a, "body": to_obj(body)}}
        case ClockPrefix(body):
            return {"clock": {"body": to_obj(body)}}
        case Sum(l, r):
            return {"sum": {"left": to_obj(l), "right": to_obj(r)}}
        case Par(l, r):
            return {"par": {"left": to_obj(l), "right": to_obj(r)}}
        case Restrict(body, names):
            return {"restrict": {"body": to_obj(body), "names": sorted(names)}}
        case Relabel(body, fn):
            return {"relabel": {"body": to_obj(body), "map": dict(fn.pairs)}}
        case Rec(x, body):
            return {"rec": {"var": x, "body": to_obj(body)}}
    raise TypeError(t)


def to_json(t: Term) -> str:
    return json.dumps(to_obj(t), sort_keys=True)


_SHAPES = {
    "nil": set(),
    "var": {"name"},
    "act": {"action", "body"},
    "clock": {"body"},
    "sum": {"left", "right"},
    "par": {"left", "right"},
    "restrict": {"body", "names"},
    "relabel": {"body", "map"},
    "rec": {"var", "body"},
}


def from_obj(obj) -> Term:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise MalformedDocument(f"expected a single-key object, got {obj!r}")
    (tag, fields), = obj.items()
    if tag not in _SHAPES:
        raise MalformedDocument(f"unknown node {tag!r}")
    if not isinstance(fields, dict) or set(fields) != _SHAPES[tag]:
        raise MalformedDocument(f"node {tag!r} needs fields {sorted(_SHAPES[tag])}")
    try:
        match tag:
            case "nil":
                return NIL
            case "var":
                if not isinstance(fields["name"], str) or not is_name(fields["name"]):
                    raise MalformedDocument(f"bad variable name {fields['name']!r}")
                return Var(fields["name"])
            case "act":
                return ActPrefix(check_action(fields["action"]), from_obj(fields["body"]))
            case "clock":
                return ClockPrefix(from_obj(fields["body"]))
            case "sum":
                return Sum(from_obj(fields["left"]), from_obj(fields["right"]))
            case "par":
                return Par(from_obj(fields["left"]), from_obj(fields["right"]))
            case "restrict":
                if not isinstance(fields["names"], list):
                    raise MalformedDocument("restriction names must be a list")
                return Restrict(from_obj(fields["body"]), frozenset(fields["names"]))
            case "relabel":
                if not isinstance(fields["map"], dict):
                    raise MalformedDocument("relabelling map must be an object")
                return Relabel(from_obj(fields["body"]), Relabelling.of(fields["map"]))
            case "rec":
                if not isinstance(fields["var"], str) or not is_name(fields["var"]):
                    raise MalformedDocument(f"bad variable name {fields['var']!r}")
                body = from_obj(fields["body"])
                if not is_guarded(fields["var"], body):
                    raise MalformedDocument(f"recursion variable {fields['var']!r} is unguarded")
                return Rec(fields["var"], body)
    except (TermError, TypeError, AttributeError) as e:
        raise MalformedDocument(str(e)) from e


def from_json(text: str) -> Term:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDocument(str(e)) from e
    return from_obj(obj)

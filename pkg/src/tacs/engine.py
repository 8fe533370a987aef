"""Deciding the faster-than relations on finite-state processes.

Every relation family is a greatest fixed point.  ``check`` builds the part
of the relation game reachable from the root pair, where a configuration is
a pair of states (plus a credit for the indexed family) and each attacker
move carries the set of defender answers allowed by the defining clauses.
A configuration is deleted as soon as some attacker move has no surviving
answer; deletions propagate through reverse edges with per-move counters,
so the fixed point is reached in time linear in the game size.

``validate_witness`` and ``replay_refutation`` re-derive all transitions
from the SOS rules directly and serve as the independent audit of the
engine's answers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Union

from .semantics import TYPE1, TYPE2, SemanticsType, action_successors, clock_successors, urgent_set
from .syntax import pretty
from .terms import Process, Term, validate_process

NAIVE, DELAYED, INDEXED, STRONG, COMBINED = "naive", "delayed", "indexed", "strong", "combined"
FAMILIES = (NAIVE, DELAYED, INDEXED, STRONG, COMBINED)


class EngineError(RuntimeError):
    pass


class StateLimitExceeded(EngineError):
    def __init__(self, limit: int):
        super().__init__(f"more than {limit} reachable states")
        self.limit = limit


class CapUnstable(EngineError):
    def __init__(self, cap: int):
        super().__init__(f"indexed verdict still changes between credit caps {cap} and {cap + 1}")
        self.cap = cap


@dataclass(frozen=True)
class RelationKind:
    family: str
    sem: SemanticsType | None = None
    cap: int | None = None  # indexed only; None selects the cap automatically

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown relation family {self.family!r}")
        if self.family == COMBINED:
            if self.sem is not None:
                raise ValueError("the combined relation has no semantics parameter")
        elif self.sem not in (TYPE1, TYPE2):
            raise ValueError(f"{self.family} needs semantics 1 or 2")
        if self.family != INDEXED and self.cap is not None:
            raise ValueError("only the indexed family takes a credit cap")
        if self.cap is not None and self.cap < 0:
            raise ValueError("credit cap must be >= 0")

    @property
    def indexed(self) -> bool:
        return self.family == INDEXED

    def with_cap(self, cap: int) -> "RelationKind":
        return RelationKind(self.family, self.sem, cap)

    def __str__(self):
        if self.family == COMBINED:
            return "combined"
        s = f"{self.family}({int(self.sem)}"
        if self.family == INDEXED:
            s += f", cap={'auto' if self.cap is None else self.cap}"
        return s + ")"

    def to_obj(self) -> dict:
        return {"relation": self.family, "semantics": None if self.sem is None else int(self.sem), "cap": self.cap}


def Naive(sem) -> RelationKind:
    return RelationKind(NAIVE, SemanticsType(sem))


def Delayed(sem) -> RelationKind:
    return RelationKind(DELAYED, SemanticsType(sem))


def Indexed(sem, cap: int | None = None) -> RelationKind:
    return RelationKind(INDEXED, SemanticsType(sem), cap)


def Strong(sem) -> RelationKind:
    return RelationKind(STRONG, SemanticsType(sem))


Combined = RelationKind(COMBINED)


# -- state spaces ----------------------------------------------------------


@dataclass
class StateSpace:
    """Reachable states of a process under actions and both kinds of clock step.

    States are numbered in lexicographic order of their printed form.
    """

    root: Term
    states: list[Term]
    index: dict
    actions: list  # per state: sorted tuple of (action, target index)
    clock1: list  # per state: sorted tuple of target indices
    clock2: list

    def __len__(self):
        return len(self.states)

    @property
    def action_edges(self) -> set:
        return {(self.states[i], a, self.states[j]) for i, es in enumerate(self.actions) for a, j in es}

    @property
    def clock_edges_1(self) -> set:
        return {(self.states[i], self.states[j]) for i, es in enumerate(self.clock1) for j in es}

    @property
    def clock_edges_2(self) -> set:
        return {(self.states[i], self.states[j]) for i, es in enumerate(self.clock2) for j in es}

    def clock(self, sem: SemanticsType):
        return self.clock1 if sem == TYPE1 else self.clock2

    def clock_plus(self, sem: SemanticsType) -> list:
        """Targets of one or more clock steps, per state."""
        key = f"_plus{int(sem)}"
        if key not in self.__dict__:
            edges = self.clock(sem)
            out = []
            for i in range(len(self.states)):
                seen = set()
                todo = list(edges[i])
                while todo:
                    j = todo.pop()
                    if j not in seen:
                        seen.add(j)
                        todo.extend(edges[j])
                out.append(tuple(sorted(seen)))
            self.__dict__[key] = out
        return self.__dict__[key]

    def delayed_actions(self, sem: SemanticsType) -> list:
        """Per state, a dict from action to targets of clock* action clock*."""
        key = f"_dly{int(sem)}"
        if key not in self.__dict__:
            plus = self.clock_plus(sem)
            star = [set(plus[i]) | {i} for i in range(len(self.states))]
            out = []
            for i in range(len(self.states)):
                by_action: dict[str, set] = {}
                for k in star[i]:
                    for a, m in self.actions[k]:
                        by_action.setdefault(a, set()).update(star[m])
                out.append({a: tuple(sorted(v)) for a, v in by_action.items()})
            self.__dict__[key] = out
        return self.__dict__[key]


def _as_term(p: Union[Process, Term]) -> Term:
    if isinstance(p, Process):
        return p.term
    return validate_process(p).term


def explore(p: Union[Process, Term], limit: int = 2000, sems: Iterable[SemanticsType] = (TYPE1, TYPE2)) -> StateSpace:
    """Reachable states under actions and the given clock-step types."""
    if limit <= 0:
        raise ValueError("limit must be positive")
    root = _as_term(p)
    sems = tuple(sems)
    seen = {root}
    todo = [root]
    while todo:
        t = todo.pop()
        nxt = [t2 for _, t2 in action_successors(t)]
        for s in sems:
            nxt.extend(clock_successors(t, s))
        for t2 in nxt:
            if t2 not in seen:
                seen.add(t2)
                if len(seen) > limit:
                    raise StateLimitExceeded(limit)
                todo.append(t2)
    states = sorted(seen, key=pretty)
    index = {t: i for i, t in enumerate(states)}
    actions, clock1, clock2 = [], [], []
    for t in states:
        actions.append(tuple(sorted((a, index[t2]) for a, t2 in action_successors(t))))
        clock1.append(tuple(sorted(index[t2] for t2 in clock_successors(t, TYPE1))) if TYPE1 in sems else ())
        clock2.append(tuple(sorted(index[t2] for t2 in clock_successors(t, TYPE2))) if TYPE2 in sems else ())
    return StateSpace(root, states, index, actions, clock1, clock2)


def reachable_state_count(p: Union[Process, Term], sem: SemanticsType, limit: int = 100_000) -> int:
    """Number of states reachable by actions and clock steps of the given type."""
    return len(explore(p, limit, sems=(SemanticsType(sem),)))


reachable_p_state_count = reachable_state_count


# -- verdicts --------------------------------------------------------------


@dataclass(frozen=True)
class WitnessRelation:
    kind: RelationKind
    pairs: frozenset  # (p, q) or, for indexed relations, (p, q, credit)

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, item):
        return item in self.pairs

    def to_obj(self) -> dict:
        rows = sorted(tuple(pretty(x) if isinstance(x, Term) else x for x in pr) for pr in self.pairs)
        return {"kind": self.kind.to_obj(), "pairs": [list(r) for r in rows]}


@dataclass(frozen=True)
class Move:
    """An attacker move: which clause, whose transition, and where it leads."""

    clause: str  # "1", "2", "3", "4" or "3-urgent"
    side: str  # "p" or "q"
    label: str  # action, or "sigma"
    target: Term

    def to_obj(self):
        return {"clause": self.clause, "side": self.side, "label": self.label, "target": pretty(self.target)}


@dataclass(frozen=True)
class RefutationStep:
    config: tuple  # configuration the move is made from
    move: Move
    answers: tuple  # every defender answer (configurations), all refuted
    chosen: tuple | None  # the answer followed next, None at the final step

    def to_obj(self):
        def c(cfg):
            return [pretty(x) if isinstance(x, Term) else x for x in cfg]

        return {
            "config": c(self.config),
            "move": self.move.to_obj(),
            "answers": [c(a) for a in self.answers],
            "chosen": None if self.chosen is None else c(self.chosen),
        }


@dataclass
class CheckVerdict:
    holds: bool
    kind: RelationKind
    p: Term
    q: Term
    witness: WitnessRelation | None = None
    refutation: list | None = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        assert (self.witness is None) != (self.refutation is None)

    def to_obj(self) -> dict:
        return {
            "p": pretty(self.p),
            "q": pretty(self.q),
            "kind": self.kind.to_obj(),
            "holds": self.holds,
            "witness": None if self.witness is None else self.witness.to_obj(),
            "refutation": None if self.refutation is None else [s.to_obj() for s in self.refutation],
            "stats": self.stats,
        }


# -- the game --------------------------------------------------------------


class _Game:
    """Reachable relation game for one kind over two explored state spaces."""

    def __init__(self, sp: StateSpace, sq: StateSpace, kind: RelationKind):
        self.sp, self.sq, self.kind = sp, sq, kind
        self.urgent_p = [urgent_set(t) for t in sp.states]
        self.urgent_q = [urgent_set(t) for t in sq.states]
        sem = kind.sem
        if kind.family == COMBINED:
            self.p_clock, self.q_answer = sp.clock1, sq.clock2
        elif kind.family == DELAYED:
            self.p_clock, self.q_answer = sp.clock(sem), sq.clock_plus(sem)
            self.q_delayed = sq.delayed_actions(sem)
        else:
            self.p_clock, self.q_answer = sp.clock(sem), sq.clock(sem)
        self.q_by_action = [self._group(es) for es in sq.actions]
        self.p_by_action = [self._group(es) for es in sp.actions]

    @staticmethod
    def _group(edges) -> dict:
        d: dict[str, list] = {}
        for a, j in edges:
            d.setdefault(a, []).append(j)
        return d

    def moves(self, cfg) -> list:
        """(move, answers) for every attacker move from ``cfg``, indices not terms."""
        kind = self.kind
        ip, iq = cfg[0], cfg[1]
        extra = cfg[2:]
        out = []
        q_match = self.q_delayed[iq] if kind.family == DELAYED else self.q_by_action[iq]
        for a, p2 in self.sp.actions[ip]:
            out.append((("1", "p", a, p2), [(p2, q2) + extra for q2 in q_match.get(a, ())]))
        for a, q2 in self.sq.actions[iq]:
            out.append((("2", "q", a, q2), [(p2, q2) + extra for p2 in self.p_by_action[ip].get(a, ())]))
        urgent_ok = True
        if kind.family in (STRONG, COMBINED):
            urgent_ok = self.urgent_q[iq] <= self.urgent_p[ip]
        for p2 in self.p_clock[ip]:
            if not urgent_ok:
                out.append((("3-urgent", "p", "sigma", p2), []))
                continue
            answers = [(p2, q2) + extra for q2 in self.q_answer[iq]]
            if kind.indexed and extra[0] > 0:
                answers.append((p2, iq, extra[0] - 1))
            out.append((("3", "p", "sigma", p2), answers))
        if kind.indexed:
            j = extra[0]
            for q2 in self.q_answer[iq]:
                answers = [(p2, q2, j) for p2 in self.p_clock[ip]]
                answers.append((ip, q2, min(j + 1, kind.cap)))
                out.append((("4", "q", "sigma", q2), answers))
        return out

    def solve(self, roots):
        """Greatest fixed point over everything reachable from ``roots``."""
        ids = {r: n for n, r in enumerate(dict.fromkeys(roots))}
        configs = list(ids)
        moves_of = []
        counts = []
        dependents: list[list] = [[] for _ in configs]
        i = 0
        while i < len(configs):
            ms = self.moves(configs[i])
            row_moves, row_counts = [], []
            for k, (mv, answers) in enumerate(ms):
                answers = list(dict.fromkeys(answers))
                idx = []
                for a in answers:
                    n = ids.get(a)
                    if n is None:
                        n = ids[a] = len(configs)
                        configs.append(a)
                        dependents.append([])
                    idx.append(n)
                    dependents[n].append((i, k))
                row_moves.append((mv, idx))
                row_counts.append(len(idx))
            moves_of.append(row_moves)
            counts.append(row_counts)
            i += 1

        alive = [True] * len(configs)
        reason = [None] * len(configs)
        killed_at = [None] * len(configs)
        queue = deque()
        order = 0
        for n, row in enumerate(counts):
            for k, c in enumerate(row):
                if c == 0:
                    alive[n] = False
                    reason[n] = k
                    killed_at[n] = order
                    order += 1
                    queue.append(n)
                    break
        pops = 0
        while queue:
            d = queue.popleft()
            pops += 1
            for c, k in dependents[d]:
                if not alive[c]:
                    continue
                counts[c][k] -= 1
                if counts[c][k] == 0:
                    alive[c] = False
                    reason[c] = k
                    killed_at[c] = order
                    order += 1
                    queue.append(c)
        return configs, moves_of, alive, reason, killed_at, pops


def _config_terms(cfg, sp, sq) -> tuple:
    return (sp.states[cfg[0]], sq.states[cfg[1]]) + tuple(cfg[2:])


def _pair_graph_size(sp: StateSpace, sq: StateSpace, sem: SemanticsType) -> int:
    """Pairs reachable in the indexed game when credits are ignored."""
    game = _Game(sp, sq, RelationKind(INDEXED, sem, 1))
    root = (sp.index[sp.root], sq.index[sq.root])
    seen = {root}
    todo = [root]
    while todo:
        cfg = todo.pop()
        for _, answers in game.moves(cfg + (1,)):
            for a in answers:
                pr = a[:2]
                if pr not in seen:
                    seen.add(pr)
                    todo.append(pr)
    return len(seen)


def _decide(sp: StateSpace, sq: StateSpace, kind: RelationKind) -> CheckVerdict:
    root = (sp.index[sp.root], sq.index[sq.root]) + ((0,) if kind.indexed else ())
    game = _Game(sp, sq, kind)
    configs, moves_of, alive, reason, killed_at, pops = game.solve([root])
    stats = {
        "states_p": len(sp),
        "states_q": len(sq),
        "explored_pairs": len(configs),
        "deleted": sum(1 for a in alive if not a),
        "iterations": pops,
    }
    if kind.indexed:
        stats["cap"] = kind.cap
    p, q = sp.root, sq.root
    if alive[0]:
        pairs = frozenset(_config_terms(c, sp, sq) for c, a in zip(configs, alive) if a)
        return CheckVerdict(True, kind, p, q, witness=WitnessRelation(kind, pairs), stats=stats)

    steps = []
    n = 0
    while True:
        mv, idx = moves_of[n][reason[n]]
        clause, side, label, target = mv
        space = sp if side == "p" else sq
        move = Move(clause, side, label, space.states[target])
        answers = tuple(_config_terms(configs[m], sp, sq) for m in idx)
        if not idx:
            steps.append(RefutationStep(_config_terms(configs[n], sp, sq), move, answers, None))
            break
        nxt = min(idx, key=lambda m: killed_at[m])
        steps.append(RefutationStep(_config_terms(configs[n], sp, sq), move, answers, _config_terms(configs[nxt], sp, sq)))
        n = nxt
    return CheckVerdict(False, kind, p, q, refutation=steps, stats=stats)


AUTO_CAP_ESCALATIONS = 3


def check(
    p: Union[Process, Term],
    q: Union[Process, Term],
    kind: RelationKind,
    limit: int = 2000,
    spaces: tuple[StateSpace, StateSpace] | None = None,
) -> CheckVerdict:
    """Decide whether ``p`` is faster than ``q`` for the given relation kind."""
    if spaces is None:
        sp, sq = explore(p, limit), explore(q, limit)
    else:
        sp, sq = spaces
    if not kind.indexed or kind.cap is not None:
        return _decide(sp, sq, kind)
    cap = max(1, _pair_graph_size(sp, sq, kind.sem))
    for _ in range(AUTO_CAP_ESCALATIONS + 1):
        v = _decide(sp, sq, kind.with_cap(cap))
        probe = _decide(sp, sq, kind.with_cap(cap + 1))
        if v.holds == probe.holds:
            v.stats["auto_cap"] = True
            return v
        cap *= 2
    raise CapUnstable(cap)


def game_configs(p, q, kind: RelationKind, limit: int = 2000) -> set:
    """All configurations of the relation game reachable from the root pair."""
    sp, sq = explore(p, limit), explore(q, limit)
    if kind.indexed and kind.cap is None:
        kind = kind.with_cap(max(1, _pair_graph_size(sp, sq, kind.sem)))
    root = (sp.index[sp.root], sq.index[sq.root]) + ((0,) if kind.indexed else ())
    configs = _Game(sp, sq, kind).solve([root])[0]
    return {_config_terms(c, sp, sq) for c in configs}


def indexed_family(sp: StateSpace, sq: StateSpace, sem: SemanticsType, cap: int) -> list[set]:
    """The largest capped family of indexed relations over all state pairs.

    Element ``j`` is the set of pairs related at credit ``j``.
    """
    kind = Indexed(sem, cap)
    roots = [(i, k, j) for j in range(cap + 1) for i in range(len(sp)) for k in range(len(sq))]
    configs, _, alive, *_ = _Game(sp, sq, kind).solve(roots)
    family = [set() for _ in range(cap + 1)]
    for c, a in zip(configs, alive):
        if a:
            family[c[2]].add((sp.states[c[0]], sq.states[c[1]]))
    return family


# -- independent audit -----------------------------------------------------


class _Oracle:
    """Defining clauses evaluated straight from the SOS rules."""

    def __init__(self, kind: RelationKind):
        self.kind = kind

    @staticmethod
    def _clock_plus(t: Term, sem) -> set:
        seen: set = set()
        todo = list(clock_successors(t, sem))
        while todo:
            u = todo.pop()
            if u not in seen:
                seen.add(u)
                todo.extend(clock_successors(u, sem))
        return seen

    def _delayed(self, t: Term, a: str, sem) -> set:
        before = self._clock_plus(t, sem) | {t}
        mid = {u2 for u in before for b, u2 in action_successors(u) if b == a}
        return {w for u in mid for w in self._clock_plus(u, sem) | {u}}

    def obligations(self, cfg) -> list:
        """(Move, set of admissible answer configurations) per attacker move."""
        kind = self.kind
        p, q = cfg[0], cfg[1]
        extra = tuple(cfg[2:])
        sem = kind.sem
        p_sem = TYPE1 if kind.family == COMBINED else sem
        q_sem = TYPE2 if kind.family == COMBINED else sem
        out = []
        for a, p2 in action_successors(p):
            if kind.family == DELAYED:
                qs = self._delayed(q, a, sem)
            else:
                qs = {q2 for b, q2 in action_successors(q) if b == a}
            out.append((Move("1", "p", a, p2), {(p2, q2) + extra for q2 in qs}))
        for a, q2 in action_successors(q):
            ps = {p2 for b, p2 in action_successors(p) if b == a}
            out.append((Move("2", "q", a, q2), {(p2, q2) + extra for p2 in ps}))
        for p2 in clock_successors(p, p_sem):
            if kind.family in (STRONG, COMBINED) and not urgent_set(q) <= urgent_set(p):
                out.append((Move("3-urgent", "p", "sigma", p2), set()))
                continue
            qs = self._clock_plus(q, q_sem) if kind.family == DELAYED else clock_successors(q, q_sem)
            answers = {(p2, q2) + extra for q2 in qs}
            if kind.indexed and extra[0] > 0:
                answers.add((p2, q, extra[0] - 1))
            out.append((Move("3", "p", "sigma", p2), answers))
        if kind.indexed:
            j = extra[0]
            for q2 in clock_successors(q, sem):
                answers = {(p2, q2, j) for p2 in clock_successors(p, sem)}
                answers.add((p, q2, min(j + 1, kind.cap)))
                out.append((Move("4", "q", "sigma", q2), answers))
        return out


def validate_witness(w: WitnessRelation, space_p: StateSpace | None = None, space_q: StateSpace | None = None) -> bool:
    """Clause-by-clause audit: every pair's every move has an answer inside ``w``."""
    if w.kind.indexed and w.kind.cap is None:
        raise ValueError("indexed witnesses must record their credit cap")
    oracle = _Oracle(w.kind)
    for cfg in w.pairs:
        if space_p is not None and cfg[0] not in space_p.index:
            return False
        if space_q is not None and cfg[1] not in space_q.index:
            return False
        for _, answers in oracle.obligations(cfg):
            if not answers & w.pairs:
                return False
    return True


def replay_refutation(v: CheckVerdict) -> bool:
    """Replay a refutation from the root and confirm it ends in a violated clause.

    Each step's move must be a real transition, its answer list must be exactly
    the answers the clauses allow, the chosen answer must be the next step's
    configuration, and the last move must have no answer at all.
    """
    if v.refutation is None or not v.refutation:
        return False
    oracle = _Oracle(v.kind)
    root = (v.p, v.q) + ((0,) if v.kind.indexed else ())
    cfg = root
    for n, step in enumerate(v.refutation):
        if step.config != cfg:
            return False
        obligations = dict((m, a) for m, a in oracle.obligations(cfg))
        if step.move not in obligations:
            return False
        allowed = obligations[step.move]
        if set(step.answers) != allowed:
            return False
        last = n == len(v.refutation) - 1
        if last:
            return not allowed and step.chosen is None
        if step.chosen not in allowed:
            return False
        cfg = step.chosen
    return False


def audit(v: CheckVerdict, spaces: tuple[StateSpace, StateSpace] | None = None) -> bool:
    if v.holds:
        root = (v.p, v.q) + ((0,) if v.kind.indexed else ())
        if root not in v.witness.pairs:
            return False
        if spaces is None:
            return validate_witness(v.witness)
        return validate_witness(v.witness, *spaces)
    return replay_refutation(v)

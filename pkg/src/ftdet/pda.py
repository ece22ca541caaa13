"""Realtime pushdown automata as Moore automata over the stack side-effect monad.

A control state ``q`` outputs the set of stacks ``beta`` with ``(q, beta)``
accepting and, on letter ``a``, the stack table popping the top symbol ``b``
and pushing ``alpha`` for each rule ``(q, a, b, q', alpha)``.  Stacks are
tuples with the topmost symbol first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .core import DEFAULT_CAP, FTCoalgebra, Word, as_word, extend
from .errors import CapExceeded, InvariantViolation, NotGreibach, UnknownState
from .monads import StackAcceptAlgebra, StackState, TState
from .stack import Stack, StackPredicate, StackTable

ACCEPT_TAGS = ("accepting-states", "empty-stack", "accepting-states-empty-stack", "top-symbols")


@dataclass(frozen=True)
class AcceptMode:
    """Finite description of the accepting configurations.

    ``members`` holds the accepting control states, or the accepting top
    symbols for ``top-symbols``; it is unused for ``empty-stack``.
    """

    tag: str
    members: frozenset = frozenset()

    def __post_init__(self):
        if self.tag not in ACCEPT_TAGS:
            raise InvariantViolation(f"unknown acceptance mode {self.tag!r}")
        object.__setattr__(self, "members", frozenset(self.members))

    @classmethod
    def accepting_states(cls, states: Iterable) -> AcceptMode:
        return cls("accepting-states", frozenset(states))

    @classmethod
    def empty_stack(cls) -> AcceptMode:
        return cls("empty-stack")

    @classmethod
    def states_and_empty_stack(cls, states: Iterable) -> AcceptMode:
        return cls("accepting-states-empty-stack", frozenset(states))

    @classmethod
    def top_symbols(cls, symbols: Iterable) -> AcceptMode:
        return cls("top-symbols", frozenset(symbols))

    def accepts(self, q, stack: Stack) -> bool:
        if self.tag == "accepting-states":
            return q in self.members
        if self.tag == "empty-stack":
            return not stack
        if self.tag == "accepting-states-empty-stack":
            return q in self.members and not stack
        return bool(stack) and stack[0] in self.members

    def predicate(self, q, symbols) -> StackPredicate:
        """``o(q)`` as a finite set of stacks and stack prefixes."""
        if self.tag == "accepting-states":
            cones = [()] if q in self.members else []
            return StackPredicate.build(symbols, cones=cones)
        if self.tag == "empty-stack":
            return StackPredicate.build(symbols, points=[()])
        if self.tag == "accepting-states-empty-stack":
            return StackPredicate.build(symbols, points=[()] if q in self.members else [])
        return StackPredicate.build(symbols, cones=[(b,) for b in self.members])


@dataclass(frozen=True)
class Configuration:
    q: Hashable
    stack: Stack = ()

    def __post_init__(self):
        object.__setattr__(self, "stack", tuple(self.stack))


Rule = tuple  # (q, a, b, q2, alpha)


@dataclass(frozen=True)
class Pda:
    control: tuple
    input: tuple
    stack_syms: tuple
    rules: frozenset
    accept: AcceptMode
    init: Configuration
    _by_key: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "control", tuple(self.control))
        object.__setattr__(self, "input", tuple(self.input))
        object.__setattr__(self, "stack_syms", tuple(self.stack_syms))
        rules = frozenset((q, a, b, q2, tuple(alpha)) for q, a, b, q2, alpha in self.rules)
        object.__setattr__(self, "rules", rules)
        if not self.stack_syms:
            raise InvariantViolation("stack alphabet must be nonempty")
        for q, a, b, q2, alpha in rules:
            if q not in self.control or q2 not in self.control:
                raise InvariantViolation(f"rule {(q, a, b, q2, alpha)!r} uses an unknown control state")
            if a not in self.input:
                raise InvariantViolation(f"rule reads unknown letter {a!r}")
            if b not in self.stack_syms or any(s not in self.stack_syms for s in alpha):
                raise InvariantViolation(f"rule {(q, a, b, q2, alpha)!r} uses an unknown stack symbol")
        if self.accept.tag == "top-symbols":
            if not self.accept.members <= set(self.stack_syms):
                raise InvariantViolation("accepting top symbols must be stack symbols")
        elif not self.accept.members <= set(self.control):
            raise InvariantViolation("accepting states must be control states")
        if self.init.q not in self.control:
            raise InvariantViolation(f"initial state {self.init.q!r} is not a control state")
        if any(s not in self.stack_syms for s in self.init.stack):
            raise InvariantViolation("initial stack uses an unknown symbol")
        by_key: dict = {}
        for q, a, b, q2, alpha in rules:
            by_key.setdefault((q, a, b), set()).add((q2, alpha))
        object.__setattr__(self, "_by_key", {k: frozenset(v) for k, v in by_key.items()})

    def moves(self, q, a, b) -> frozenset:
        """``delta(q, a, b)`` as a set of ``(q2, alpha)``."""
        return self._by_key.get((q, a, b), frozenset())

    def require(self, q) -> None:
        if q not in self.control:
            raise UnknownState(q)


def pda_step(p: Pda, c: Configuration, a) -> frozenset:
    if not c.stack:
        return frozenset()
    top, rest = c.stack[0], c.stack[1:]
    return frozenset(Configuration(q2, alpha + rest) for q2, alpha in p.moves(c.q, a, top))


def _run(p: Pda, start: Configuration, word: Word) -> frozenset:
    configs = frozenset({start})
    for a in word:
        configs = frozenset().union(*(pda_step(p, k, a) for k in configs))
    return configs


def pda_semantics(p: Pda, q, word, stack) -> bool:
    """Acceptance of ``word`` from configuration ``(q, stack)``, in ``len(word)`` rounds."""
    p.require(q)
    reached = _run(p, Configuration(q, tuple(stack)), as_word(word))
    return any(p.accept.accepts(k.q, k.stack) for k in reached)


def pda_accepts(p: Pda, word) -> bool:
    return pda_semantics(p, p.init.q, word, p.init.stack)


def pda_language(p: Pda, max_len: int, q=None, stack=None) -> frozenset:
    """Accepted words of length at most ``max_len`` from ``(q, stack)``, defaulting to the start.

    Prefixes share their configuration sets, and a prefix with no configurations
    is dropped: a realtime machine cannot recover from an empty set.
    """
    q = p.init.q if q is None else q
    p.require(q)
    start = frozenset({Configuration(q, p.init.stack if stack is None else tuple(stack))})
    accepted = set()
    frontier = [((), start)]
    for length in range(max_len + 1):
        nxt = []
        for word, configs in frontier:
            if any(p.accept.accepts(k.q, k.stack) for k in configs):
                accepted.add(word)
            if length == max_len:
                continue
            for a in p.input:
                after = frozenset().union(*(pda_step(p, k, a) for k in configs))
                if after:
                    nxt.append((word + (a,), after))
        frontier = nxt
    return frozenset(accepted)


def pda_coalgebra(p: Pda) -> FTCoalgebra:
    monad = StackState(p.stack_syms)
    output = {q: p.accept.predicate(q, monad.symbols) for q in p.control}
    step = {}
    for q in p.control:
        # an empty stack deadlocks, and only the top symbol is read
        step[q] = {
            a: monad.table(1, long={(b,): p.moves(q, a, b) for b in monad.symbols}) for a in p.input
        }
    return FTCoalgebra(p.control, p.input, monad, StackAcceptAlgebra(monad), output, step)


@dataclass(frozen=True)
class Grammar:
    """Context-free grammar; productions are ``(variable, right-hand side)``."""

    terminals: tuple
    variables: tuple
    start: Hashable
    productions: frozenset

    def __post_init__(self):
        object.__setattr__(self, "terminals", tuple(self.terminals))
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "productions", frozenset((b, tuple(rhs)) for b, rhs in self.productions))
        if self.start not in self.variables:
            raise InvariantViolation(f"start symbol {self.start!r} is not a variable")
        if set(self.terminals) & set(self.variables):
            raise InvariantViolation("terminals and variables overlap")

    def greibach_rules(self) -> list[tuple]:
        """Productions as ``(b, a, alpha)``; raises :class:`NotGreibach` otherwise."""
        out = []
        for b, rhs in sorted(self.productions, key=str):
            if b not in self.variables:
                raise NotGreibach(f"left-hand side {b!r} is not a variable")
            if not rhs or rhs[0] not in self.terminals:
                raise NotGreibach(f"{b} -> {' '.join(map(str, rhs)) or 'ε'} does not start with a terminal")
            if any(s not in self.variables for s in rhs[1:]):
                raise NotGreibach(f"{b} -> {' '.join(map(str, rhs))} has a terminal after the head")
            out.append((b, rhs[0], rhs[1:]))
        return out


GRAMMAR_STATE = "*"


def grammar_to_pda(g: Grammar) -> Pda:
    """Single-state PDA accepting by empty stack from ``(*, start)``."""
    rules = frozenset((GRAMMAR_STATE, a, b, GRAMMAR_STATE, alpha) for b, a, alpha in g.greibach_rules())
    return Pda(
        (GRAMMAR_STATE,),
        g.terminals,
        g.variables,
        rules,
        AcceptMode.empty_stack(),
        Configuration(GRAMMAR_STATE, (g.start,)),
    )


@dataclass(frozen=True)
class MooreState:
    """One structured state of the determinised PDA."""

    index: int
    table: StackTable
    output: StackPredicate
    word: Word
    root: Hashable
    transitions: dict = field(compare=False, hash=False)

    @property
    def name(self) -> str:
        return f"c{self.index}"


def pda_moore_states(
    p: Pda, depth: int, roots: Iterable | None = None, cap: int = DEFAULT_CAP
) -> list[MooreState]:
    """Structured states reachable within ``depth`` letters, breadth first.

    ``roots`` defaults to every control state, the initial one first, so that
    units of non-initial states appear too.  States at the depth frontier have
    no recorded transitions.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    c = pda_coalgebra(p)
    if roots is None:
        roots = [p.init.q] + [q for q in p.control if q != p.init.q]
    index: dict[TState, int] = {}
    info: list[list] = []
    queue = deque()
    for q in roots:
        ts = c.unit(q)
        if ts not in index:
            index[ts] = len(info)
            info.append([ts, (), q, 0])
            queue.append(ts)
    transitions: dict[int, dict] = {}
    outputs: dict[int, StackPredicate] = {}
    while queue:
        ts = queue.popleft()
        i = index[ts]
        _, word, root, level = info[i]
        out, succ = extend(c, ts)
        outputs[i] = out
        if level == depth:
            continue
        row = {}
        for a in c.alphabet:
            nxt = succ[a]
            if nxt not in index:
                if len(index) >= cap:
                    raise CapExceeded(len(index) + 1, cap)
                index[nxt] = len(info)
                info.append([nxt, word + (a,), root, level + 1])
                queue.append(nxt)
            row[a] = index[nxt]
        transitions[i] = row
    return [
        MooreState(i, ts.value, outputs[i], word, root, transitions.get(i, {}))
        for i, (ts, word, root, _) in enumerate(info)
    ]

"""Concrete machine kinds and their compilation to FT-coalgebras."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Mapping

from .core import (
    BehaviourTable,
    DetMachine,
    FTCoalgebra,
    Word,
    as_word,
    behaviour_table,
    determinize,
    extend,
    words_up_to,
)
from .errors import InvariantViolation, UnknownState
from .monads import (
    ConvexAlgebra,
    Distribution,
    FreeAlgebra,
    Monad,
    OrAlgebra,
    Partiality,
    PointedAlgebra,
    Powerset,
    TState,
)


def _require(states, *xs):
    for x in xs:
        if x not in states:
            raise UnknownState(x)


@dataclass(frozen=True)
class Nda:
    """Nondeterministic automaton; missing transitions are empty."""

    states: tuple
    alphabet: tuple
    accepting: frozenset
    delta: Mapping[Hashable, Mapping[Hashable, frozenset]]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if not self.accepting <= set(self.states):
            raise InvariantViolation("accepting states must be states")
        delta = {
            x: {a: frozenset(self.delta.get(x, {}).get(a, ())) for a in self.alphabet} for x in self.states
        }
        for row in delta.values():
            for targets in row.values():
                if not targets <= set(self.states):
                    raise InvariantViolation(f"transition to unknown state in {sorted(targets, key=str)}")
        object.__setattr__(self, "delta", delta)

    def coalgebra(self) -> FTCoalgebra:
        m = Powerset()
        return FTCoalgebra(
            self.states,
            self.alphabet,
            m,
            OrAlgebra(m),
            {x: x in self.accepting for x in self.states},
            {x: {a: m.make(self.delta[x][a]) for a in self.alphabet} for x in self.states},
        )


@dataclass(frozen=True)
class PartialAutomaton:
    """Deterministic automaton whose transitions may be undefined (``None``)."""

    states: tuple
    alphabet: tuple
    accepting: frozenset
    partial_delta: Mapping[Hashable, Mapping[Hashable, Hashable | None]]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if not self.accepting <= set(self.states):
            raise InvariantViolation("accepting states must be states")
        delta = {x: {a: self.partial_delta.get(x, {}).get(a) for a in self.alphabet} for x in self.states}
        for row in delta.values():
            for y in row.values():
                if y is not None and y not in self.states:
                    raise InvariantViolation(f"transition to unknown state {y!r}")
        object.__setattr__(self, "partial_delta", delta)

    def coalgebra(self) -> FTCoalgebra:
        m = Partiality()

        def lift(y):
            return m.bottom() if y is None else m.unit(y)

        return FTCoalgebra(
            self.states,
            self.alphabet,
            m,
            PointedAlgebra(False, m),
            {x: x in self.accepting for x in self.states},
            {x: {a: lift(self.partial_delta[x][a]) for a in self.alphabet} for x in self.states},
        )


@dataclass(frozen=True)
class PartialMealy:
    """Mealy machine that may stop: ``trans[x][a] = (output, next state or None)``.

    Missing entries default to ``(bottom, None)``.
    """

    states: tuple
    inputs: tuple
    outputs: frozenset
    bottom: Hashable
    trans: Mapping[Hashable, Mapping[Hashable, tuple]]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        if self.bottom not in self.outputs:
            raise InvariantViolation("the undefined output must belong to the output set")
        trans = {}
        for x in self.states:
            row = {}
            for a in self.inputs:
                b, y = self.trans.get(x, {}).get(a, (self.bottom, None))
                if b not in self.outputs:
                    raise InvariantViolation(f"output {b!r} not in the output set")
                if y is not None and y not in self.states:
                    raise InvariantViolation(f"transition to unknown state {y!r}")
                row[a] = (b, y)
            trans[x] = row
        object.__setattr__(self, "trans", trans)

    def coalgebra(self) -> FTCoalgebra:
        # (B x (1+X))^A is handled as B^A x (1+X)^A; B^A is pointed by the all-bottom row.
        m = Partiality()
        point = tuple(self.bottom for _ in self.inputs)
        return FTCoalgebra(
            self.states,
            self.inputs,
            m,
            PointedAlgebra(point, m),
            {x: tuple(self.trans[x][a][0] for a in self.inputs) for x in self.states},
            {
                x: {
                    a: m.bottom() if self.trans[x][a][1] is None else m.unit(self.trans[x][a][1])
                    for a in self.inputs
                }
                for x in self.states
            },
        )


MOORE_KINDS = ("exception", "side-effect", "writer", "distribution")


@dataclass(frozen=True)
class MooreVariant:
    """Moore automaton with outputs in ``T(B)`` and successors in ``T(X)``.

    For the distribution monad the output is a probability in ``[0, 1]``
    (``D(2)``); for the other monads it is a T-state over ``B``.
    """

    monad: Monad
    states: tuple
    alphabet: tuple
    output: Mapping[Hashable, Any]
    trans: Mapping[Hashable, Mapping[Hashable, TState]]

    def __post_init__(self):
        if self.monad.name not in MOORE_KINDS:
            raise InvariantViolation(f"no structured Moore automata over {self.monad.name}")
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if isinstance(self.monad, Distribution):
            object.__setattr__(self, "output", {x: Fraction(v) for x, v in self.output.items()})
        self.coalgebra()

    def coalgebra(self) -> FTCoalgebra:
        if isinstance(self.monad, Distribution):
            algebra = ConvexAlgebra(self.monad)
        else:
            algebra = FreeAlgebra(self.monad)
        return FTCoalgebra(self.states, self.alphabet, self.monad, algebra, self.output, self.trans)


def nda_determinize(n: Nda) -> DetMachine:
    """Subset construction from every singleton; at most ``2^|X|`` subsets arise."""
    c = n.coalgebra()
    return determinize(c, [c.unit(x) for x in n.states], cap=max(1, 2 ** len(n.states)))


def nda_language(n: Nda, start, depth: int) -> frozenset:
    """Accepted words of length ``<= depth`` from a state or an iterable of states."""
    c = n.coalgebra()
    if start in n.states:
        ts = c.unit(start)
    else:
        _require(n.states, *start)
        ts = c.monad.make(start)
    table = behaviour_table(c, ts, depth)
    return frozenset(w for w, v in table.items() if v)


def pa_totalize(p: PartialAutomaton) -> DetMachine:
    """Add the sink: every state plus the undefined T-state, which rejects and loops."""
    c = p.coalgebra()
    roots = [c.unit(x) for x in p.states] + [c.monad.bottom()]
    return determinize(c, roots, cap=len(p.states) + 1)


def pa_vw_semantics(p: PartialAutomaton, x, depth: int) -> tuple[frozenset, frozenset]:
    """``(V, W)``: accepted words and words labelling a defined path, up to ``depth``."""
    _require(p.states, x)
    accepted, defined = set(), set()
    level = [((), x)]
    for n in range(depth + 1):
        nxt = []
        for word, y in level:
            defined.add(word)
            if y in p.accepting:
                accepted.add(word)
            if n < depth:
                for a in p.alphabet:
                    z = p.partial_delta[y][a]
                    if z is not None:
                        nxt.append((word + (a,), z))
        level = nxt
    return frozenset(accepted), frozenset(defined)


def mealy_output(m: PartialMealy, x, word) -> Word:
    """Output word for ``word`` from ``x``; ``x = None`` starts in the sink."""
    c = m.coalgebra()
    ts = c.monad.bottom() if x is None else c.unit(x)
    index = {a: i for i, a in enumerate(m.inputs)}
    out = []
    for a in as_word(word):
        if a not in index:
            raise InvariantViolation(f"unknown input {a!r}")
        row, succ = extend(c, ts)
        out.append(row[index[a]])
        ts = succ[a]
    return tuple(out)


def moore_behaviour(m: MooreVariant, x, depth: int) -> BehaviourTable:
    _require(m.states, x)
    c = m.coalgebra()
    return behaviour_table(c, c.unit(x), depth)


__all__ = [
    "Nda",
    "PartialAutomaton",
    "PartialMealy",
    "MooreVariant",
    "nda_determinize",
    "nda_language",
    "pa_totalize",
    "pa_vw_semantics",
    "mealy_output",
    "moore_behaviour",
    "words_up_to",
]

"""Trace, complete-trace, failure and ready semantics of labelled transition systems.

Each semantics decorates every state of the LTS with an observation
(``True``, deadlock, failure sets or the ready set) and then compares the
determinised decorated machines.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Hashable, Mapping

from .core import BehaviourTable, FTCoalgebra, behaviour_table
from .equivalence import DEFAULT_DEPTH, EquivResult, absorbed_equivalent
from .errors import InvariantViolation, UnknownState
from .monads import OrAlgebra, Powerset, UnionAlgebra


@dataclass(frozen=True)
class Lts:
    states: tuple
    alphabet: tuple
    delta: Mapping[Hashable, Mapping[Hashable, frozenset]]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        delta = {
            x: {a: frozenset(self.delta.get(x, {}).get(a, ())) for a in self.alphabet} for x in self.states
        }
        known = set(self.states)
        for row in delta.values():
            for targets in row.values():
                if not targets <= known:
                    raise InvariantViolation(f"transition to unknown state in {sorted(targets, key=str)}")
        object.__setattr__(self, "delta", delta)

    def require(self, *xs):
        for x in xs:
            if x not in self.delta:
                raise UnknownState(x)


class Decoration(enum.Enum):
    TRACE = "trace"
    COMPLETE_TRACE = "ctrace"
    FAILURE = "failure"
    READY = "ready"


def enabled(lts: Lts, x) -> frozenset:
    lts.require(x)
    return frozenset(a for a in lts.alphabet if lts.delta[x][a])


def fail_sets(lts: Lts, x) -> frozenset:
    """Every set of labels that ``x`` can refuse."""
    refusable = [a for a in lts.alphabet if a not in enabled(lts, x)]
    return frozenset(
        frozenset(combo) for n in range(len(refusable) + 1) for combo in itertools.combinations(refusable, n)
    )


def decorate(lts: Lts, decoration: Decoration) -> FTCoalgebra:
    m = Powerset()
    if decoration is Decoration.TRACE:
        algebra, output = OrAlgebra(m), {x: True for x in lts.states}
    elif decoration is Decoration.COMPLETE_TRACE:
        algebra, output = OrAlgebra(m), {x: not enabled(lts, x) for x in lts.states}
    elif decoration is Decoration.FAILURE:
        algebra, output = UnionAlgebra(m), {x: fail_sets(lts, x) for x in lts.states}
    elif decoration is Decoration.READY:
        algebra, output = UnionAlgebra(m), {x: frozenset({enabled(lts, x)}) for x in lts.states}
    else:
        raise ValueError(decoration)
    step = {x: {a: m.make(lts.delta[x][a]) for a in lts.alphabet} for x in lts.states}
    return FTCoalgebra(lts.states, lts.alphabet, m, algebra, output, step)


def decorated_semantics(lts: Lts, decoration: Decoration, x, depth: int) -> BehaviourTable:
    """For READY, ``Z in table[w]`` iff ``(w, Z)`` is a ready pair of ``x``; likewise
    for FAILURE.  For TRACE the table is the trace indicator."""
    lts.require(x)
    c = decorate(lts, decoration)
    return behaviour_table(c, c.unit(x), depth)


def spectrum_compare(lts: Lts, x, y, depth: int = DEFAULT_DEPTH) -> dict[Decoration, EquivResult]:
    lts.require(x, y)
    return {d: absorbed_equivalent(decorate(lts, d), x, y, depth) for d in Decoration}

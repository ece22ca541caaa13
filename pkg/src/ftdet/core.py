"""Generalised determinisation of FT-coalgebras.

An :class:`FTCoalgebra` assigns to every state an output in a T-algebra and,
for every letter, a successor T-state.  Because the outputs and ``T(X)^A``
are both T-algebras, the machine extends uniquely along the unit of the
monad to ``extend: T(X) -> O x T(X)^A``.  Unfolding ``extend`` from a root
gives an ordinary deterministic machine whose states are T-states; its
depth-bounded behaviour approximates the final-coalgebra semantics.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import CapExceeded, InvariantViolation, UnknownState
from .monads import Algebra, Monad, TState

DEFAULT_CAP = 100_000

Word = tuple


def as_word(word: str | Sequence) -> Word:
    """Turn ``"ab"`` or ``["a", "b"]`` into ``("a", "b")``."""
    return tuple(word)


def words_up_to(alphabet: Sequence, depth: int) -> Iterator[Word]:
    """All words of length ``<= depth`` in breadth-first (length, then letter) order."""
    level: list[Word] = [()]
    for _ in range(depth + 1):
        yield from level
        level = [w + (a,) for w in level for a in alphabet]


@dataclass(eq=False)
class FTCoalgebra:
    states: tuple
    alphabet: tuple
    monad: Monad
    algebra: Algebra
    output: Mapping[Hashable, Any]
    step: Mapping[Hashable, Mapping[Hashable, TState]]

    def __post_init__(self):
        self.states = tuple(self.states)
        self.alphabet = tuple(self.alphabet)
        self._state_set = frozenset(self.states)
        if self.algebra.monad != self.monad:
            raise InvariantViolation("output algebra is over a different monad")
        for x in self.states:
            if x not in self.output:
                raise InvariantViolation(f"no output for state {x!r}")
            if not self.algebra.contains(self.output[x]):
                raise InvariantViolation(f"output {self.output[x]!r} of {x!r} is outside the algebra")
            row = self.step.get(x)
            if row is None:
                raise InvariantViolation(f"no transitions for state {x!r}")
            for a in self.alphabet:
                if a not in row:
                    raise InvariantViolation(f"transition of {x!r} on {a!r} missing")
                self.check_tstate(row[a])

    def check_tstate(self, ts: TState) -> None:
        if not isinstance(ts, TState) or ts.monad != self.monad:
            raise InvariantViolation(f"{ts!r} is not a {self.monad.name} T-state")
        stray = ts.atoms() - self._state_set
        if stray:
            raise InvariantViolation(f"T-state mentions unknown states {sorted(map(repr, stray))}")

    def require(self, *xs: Hashable) -> None:
        for x in xs:
            if x not in self._state_set:
                raise UnknownState(x)

    def unit(self, x: Hashable) -> TState:
        self.require(x)
        return self.monad.unit(x)


def unit(monad: Monad, x: Hashable) -> TState:
    return monad.unit(x)


def extend(c: FTCoalgebra, ts: TState) -> tuple[Any, dict]:
    """The unique extension of ``c`` to T-states: ``(output, letter -> T-state)``."""
    c.check_tstate(ts)
    out = c.algebra.extend(ts, c.output.__getitem__)
    succ = {a: c.monad.bind(ts, lambda x, a=a: c.step[x][a]) for a in c.alphabet}
    return out, succ


class DetMachine:
    """Memoised unfolding of ``extend`` over the T-states reachable from some roots.

    ``order`` lists materialised T-states in breadth-first discovery order and
    ``parent`` records how each was first reached, so ``word_to`` returns a
    shortest access word.
    """

    def __init__(self, base: FTCoalgebra, cap: int = DEFAULT_CAP):
        if cap < 1:
            raise ValueError("cap must be at least 1")
        self.base = base
        self.cap = cap
        self.memo: dict[TState, tuple[Any, dict]] = {}
        self.order: list[TState] = []
        self.parent: dict[TState, tuple[TState, Hashable] | None] = {}

    def __len__(self):
        return len(self.memo)

    def __contains__(self, ts):
        return ts in self.memo

    def keys(self) -> list[TState]:
        return list(self.order)

    def _discover(self, ts: TState, via: tuple[TState, Hashable] | None) -> bool:
        if ts in self.parent:
            return False
        if len(self.parent) >= self.cap:
            raise CapExceeded(len(self.parent) + 1, self.cap)
        self.parent[ts] = via
        return True

    def row(self, ts: TState) -> tuple[Any, dict]:
        """``extend(base, ts)``, computed once and counted against the cap."""
        hit = self.memo.get(ts)
        if hit is not None:
            return hit
        self._discover(ts, None)
        result = extend(self.base, ts)
        self.memo[ts] = result
        self.order.append(ts)
        return result

    def explore(self, roots: Iterable[TState]) -> None:
        queue = deque()
        for r in roots:
            self.base.check_tstate(r)
            self._discover(r, None)
            queue.append(r)
        while queue:
            ts = queue.popleft()
            if ts in self.memo:
                continue
            _, succ = self.row(ts)
            for a in self.base.alphabet:
                nxt = succ[a]
                if self._discover(nxt, (ts, a)):
                    queue.append(nxt)

    def output(self, ts: TState) -> Any:
        return self.row(ts)[0]

    def successor(self, ts: TState, letter: Hashable) -> TState:
        return self.row(ts)[1][letter]

    def word_to(self, ts: TState) -> Word:
        word = []
        link = self.parent[ts]
        while link is not None:
            ts, a = link
            word.append(a)
            link = self.parent[ts]
        return tuple(reversed(word))


def determinize(c: FTCoalgebra, roots: Iterable[TState], cap: int = DEFAULT_CAP) -> DetMachine:
    """Breadth-first closure of ``roots`` under :func:`extend`.

    Raises :class:`CapExceeded` once more than ``cap`` distinct T-states are
    reachable.
    """
    machine = DetMachine(c, cap)
    machine.explore(roots)
    return machine


@dataclass(frozen=True)
class BehaviourTable:
    depth: int
    entries: Mapping[Word, Any] = field(hash=False)

    def __getitem__(self, word) -> Any:
        return self.entries[as_word(word)]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def differences(self, other: BehaviourTable) -> list[Word]:
        """Words present in both tables on which the outputs differ, shortest first."""
        return [w for w in self.entries if w in other.entries and self.entries[w] != other.entries[w]]


def behaviour_table(c: FTCoalgebra, ts: TState, depth: int) -> BehaviourTable:
    """Depth-``depth`` approximant of the final-coalgebra semantics of ``ts``.

    ``entries[()]`` is the output of ``ts`` and ``entries[a + w]`` the entry
    of ``w`` in the table of the ``a``-successor.  Works for any monad, also
    when the reachable T-states are infinite.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    c.check_tstate(ts)
    cache: dict[TState, tuple[Any, dict]] = {}

    def row(t):
        if t not in cache:
            cache[t] = extend(c, t)
        return cache[t]

    entries: dict[Word, Any] = {}
    level = [((), ts)]
    for n in range(depth + 1):
        nxt = []
        for word, t in level:
            out, succ = row(t)
            entries[word] = out
            if n < depth:
                nxt.extend((word + (a,), succ[a]) for a in c.alphabet)
        level = nxt
    return BehaviourTable(depth, entries)

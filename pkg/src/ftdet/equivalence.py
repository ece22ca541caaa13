"""Deciding bisimilarity of FT-coalgebras and equivalence of their determinisations."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable

from .core import DEFAULT_CAP, BehaviourTable, DetMachine, FTCoalgebra, Word, behaviour_table
from .errors import CapExceeded

DEFAULT_DEPTH = 8


class Verdict(enum.Enum):
    EQUIVALENT = "equivalent"
    DISTINGUISHED = "distinguished"
    DEPTH_BOUNDED = "depth-bounded"


@dataclass(frozen=True)
class EquivResult:
    verdict: Verdict
    witness: Word | None = None
    depth: int | None = None

    @classmethod
    def equivalent(cls) -> EquivResult:
        return cls(Verdict.EQUIVALENT)

    @classmethod
    def distinguished(cls, witness: Word) -> EquivResult:
        return cls(Verdict.DISTINGUISHED, tuple(witness))

    @classmethod
    def bounded(cls, depth: int) -> EquivResult:
        return cls(Verdict.DEPTH_BOUNDED, depth=depth)

    @property
    def is_equivalent(self) -> bool:
        return self.verdict is Verdict.EQUIVALENT

    @property
    def is_distinguished(self) -> bool:
        return self.verdict is Verdict.DISTINGUISHED


class UnionFind:
    def __init__(self):
        self._parent: dict = {}
        self._size: dict = {}

    def find(self, x):
        if x not in self._parent:
            self._parent[x] = x
            self._size[x] = 1
            return x
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def union(self, x, y) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self._size[rx] < self._size[ry]:
            rx, ry = ry, rx
        self._parent[ry] = rx
        self._size[rx] += self._size[ry]

    def connected(self, x, y) -> bool:
        return self.find(x) == self.find(y)


def refine(c: FTCoalgebra) -> list[dict]:
    """Partition refinement rounds; ``rounds[k][x]`` is the block of ``x`` after ``k`` rounds.

    Round 0 groups states by output.  Each later round groups by the output
    block together with every successor T-state with its atoms renamed to
    the previous round's blocks.  The last round is the bisimilarity partition.
    """
    rounds = [_number({x: c.output[x] for x in c.states}, c.states)]
    while True:
        block = rounds[-1]
        signature = {
            x: (block[x], tuple(c.monad.fmap(c.step[x][a], block.__getitem__) for a in c.alphabet))
            for x in c.states
        }
        nxt = _number(signature, c.states)
        if len(set(nxt.values())) == len(set(block.values())):
            return rounds
        rounds.append(nxt)


def _number(keys: dict, order) -> dict:
    ids: dict = {}
    return {x: ids.setdefault(keys[x], len(ids)) for x in order}


def ft_bisimilar(c: FTCoalgebra, x: Hashable, y: Hashable) -> EquivResult:
    """Bisimilarity of ``x`` and ``y`` as states of the FT-coalgebra itself.

    The witness of a distinction is the letter path along which the split
    propagates; it need not distinguish the determinised behaviours.
    """
    c.require(x, y)
    rounds = refine(c)
    if rounds[-1][x] == rounds[-1][y]:
        return EquivResult.equivalent()
    return EquivResult.distinguished(_split_path(c, rounds, x, y))


def _split_path(c: FTCoalgebra, rounds: list[dict], x, y) -> Word:
    word = []
    while True:
        k = next(i for i, r in enumerate(rounds) if r[x] != r[y])
        if k == 0:
            return tuple(word)
        prev = rounds[k - 1]
        for a in c.alphabet:
            tx, ty = c.step[x][a], c.step[y][a]
            if c.monad.fmap(tx, prev.__getitem__) != c.monad.fmap(ty, prev.__getitem__):
                break
        word.append(a)
        pairs = [(u, v) for u in sorted(tx.atoms(), key=str) for v in sorted(ty.atoms(), key=str)]
        split = [(u, v) for u, v in pairs if prev[u] != prev[v]]
        if not split:
            return tuple(word)
        x, y = split[0]


def absorbed_equivalent(
    c: FTCoalgebra,
    x: Hashable,
    y: Hashable,
    depth_cap: int = DEFAULT_DEPTH,
    cap: int = DEFAULT_CAP,
) -> EquivResult:
    """Equivalence of ``unit(x)`` and ``unit(y)`` in the determinised machine.

    Breadth-first Hopcroft-Karp over pairs of T-states with a union-find.
    For monads whose reachable T-states may be infinite, pairs deeper than
    ``depth_cap`` are not expanded; if that (or the T-state cap) cuts the
    search, the behaviours are compared up to ``depth_cap`` instead and the
    verdict is depth-bounded unless a difference turns up.
    """
    c.require(x, y)
    machine = DetMachine(c, cap)
    ux, uy = c.unit(x), c.unit(y)
    uf = UnionFind()
    queue = deque([(ux, uy, ())])
    cut = False
    while queue:
        m, n, word = queue.popleft()
        if uf.connected(m, n):
            continue
        try:
            om, sm = machine.row(m)
            on, sn = machine.row(n)
        except CapExceeded:
            cut = True
            break
        if om != on:
            return EquivResult.distinguished(word)
        if not c.monad.finitary and len(word) >= depth_cap:
            cut = True
            continue
        uf.union(m, n)
        for a in c.alphabet:
            queue.append((sm[a], sn[a], word + (a,)))
    if not cut:
        return EquivResult.equivalent()
    return _bounded_compare(behaviour_table(c, ux, depth_cap), behaviour_table(c, uy, depth_cap))


def _bounded_compare(left: BehaviourTable, right: BehaviourTable) -> EquivResult:
    diff = left.differences(right)
    if diff:
        return EquivResult.distinguished(diff[0])
    return EquivResult.bounded(left.depth)


@dataclass
class Theorem1Report:
    pairs_checked: int = 0
    bisimilar_pairs: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def theorem1_check(c: FTCoalgebra, trials: int = 200, depth_cap: int = DEFAULT_DEPTH) -> Theorem1Report:
    """Check that every bisimilar pair among the first ``trials`` state pairs is also
    equivalent after determinisation.  A violation indicates a bug."""
    report = Theorem1Report()
    final = refine(c)[-1]
    pairs = [(x, y) for i, x in enumerate(c.states) for y in c.states[i:]]
    for x, y in pairs[:trials]:
        report.pairs_checked += 1
        if final[x] != final[y]:
            continue
        report.bisimilar_pairs += 1
        result = absorbed_equivalent(c, x, y, depth_cap)
        if result.is_distinguished or (c.monad.finitary and not result.is_equivalent):
            report.violations.append((x, y, result))
    return report

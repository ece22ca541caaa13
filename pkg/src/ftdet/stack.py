"""Finite representations of stack-indexed functions.

A pushdown machine only ever inspects a bounded prefix of its stack, so the
functions it induces on ``B*`` can be written as case analyses on a prefix:

* :class:`StackTable` represents ``c: B* -> P(X x B*)``.  Stacks shorter than
  ``depth`` are listed explicitly; every stack ``pi + rest`` with
  ``len(pi) == depth`` maps to ``{(x, alpha + rest) | (x, alpha) in long[pi]}``.
* :class:`StackPredicate` represents ``p: B* -> 2`` as finitely many exact
  stacks (points) plus finitely many prefixes (cones) ``pi B*``.

Both are kept in a minimal canonical form so that equal functions compare
equal.  Stacks are tuples of symbols, topmost symbol first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping

Stack = tuple
Entry = frozenset  # frozenset[tuple[atom, Stack]]

_EMPTY: frozenset = frozenset()


def stacks_of_length(symbols: Iterable, n: int) -> Iterator[Stack]:
    return itertools.product(tuple(symbols), repeat=n)


def stacks_up_to(symbols: Iterable, n: int) -> Iterator[Stack]:
    """All stacks of length strictly less than ``n``."""
    symbols = tuple(symbols)
    for k in range(n):
        yield from stacks_of_length(symbols, k)


@dataclass(frozen=True)
class StackTable:
    depth: int
    short: frozenset  # of (stack, Entry), len(stack) < depth, Entry nonempty
    long: frozenset  # of (prefix, Entry), len(prefix) == depth, Entry nonempty
    _short: dict = field(default=None, compare=False, hash=False, repr=False)
    _long: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_short", dict(self.short))
        object.__setattr__(self, "_long", dict(self.long))

    @classmethod
    def build(
        cls,
        symbols: Iterable,
        depth: int,
        short: Mapping[Stack, Iterable] = (),
        long: Mapping[Stack, Iterable] = (),
    ) -> StackTable:
        """Build a table and bring it to minimal canonical form."""
        short = {tuple(k): frozenset((x, tuple(s)) for x, s in v) for k, v in dict(short).items()}
        long = {tuple(k): frozenset((x, tuple(s)) for x, s in v) for k, v in dict(long).items()}
        symbols = tuple(symbols)
        for k in short:
            if len(k) >= depth or any(b not in symbols for b in k):
                raise ValueError(f"bad explicit stack {k!r} for depth {depth}")
        for k in long:
            if len(k) != depth or any(b not in symbols for b in k):
                raise ValueError(f"bad prefix {k!r} for depth {depth}")
        return _minimize(symbols, depth, short, long)

    @classmethod
    def unit(cls, x: Hashable) -> StackTable:
        return cls(0, _EMPTY, frozenset({((), frozenset({(x, ())}))}))

    def __call__(self, stack: Stack) -> frozenset:
        stack = tuple(stack)
        if len(stack) < self.depth:
            return self._short.get(stack, _EMPTY)
        rest = stack[self.depth:]
        return frozenset((x, alpha + rest) for x, alpha in self._long.get(stack[: self.depth], _EMPTY))

    def pattern(self, prefix: Stack) -> frozenset:
        """Entry ``R`` with ``c(prefix + rest) = {(x, rho + rest) | (x, rho) in R}``.

        Only defined when ``len(prefix) >= depth``.
        """
        prefix = tuple(prefix)
        if len(prefix) < self.depth:
            raise ValueError("prefix shorter than table depth")
        rest = prefix[self.depth:]
        return frozenset((x, alpha + rest) for x, alpha in self._long.get(prefix[: self.depth], _EMPTY))

    def atoms(self) -> frozenset:
        found = set()
        for _, entry in itertools.chain(self.short, self.long):
            found.update(x for x, _ in entry)
        return frozenset(found)

    def cases(self) -> list[tuple[str, Stack, frozenset]]:
        """Rows of the case analysis: ``("exact", stack, R)`` or ``("prefix", pi, R)``."""
        rows = [("exact", k, v) for k, v in self._short.items()]
        rows += [("prefix", k, v) for k, v in self._long.items()]
        rows.sort(key=lambda r: (len(r[1]), r[1], r[0]))
        return rows


def _minimize(symbols: tuple, depth: int, short: dict, long: dict) -> StackTable:
    short = {k: v for k, v in short.items() if v}
    long = {k: v for k, v in long.items() if v}
    while depth > 0:
        merged = {}
        for head in stacks_of_length(symbols, depth - 1):
            candidate = short.get(head, _EMPTY)
            for b in symbols:
                expected = frozenset((x, alpha + (b,)) for x, alpha in candidate)
                if long.get(head + (b,), _EMPTY) != expected:
                    break
            else:
                if candidate:
                    merged[head] = candidate
                continue
            break
        else:
            depth -= 1
            long = merged
            short = {k: v for k, v in short.items() if len(k) < depth}
            continue
        break
    return StackTable(depth, frozenset(short.items()), frozenset(long.items()))


@dataclass(frozen=True)
class StackPredicate:
    """A subset of ``B*``: exact stacks ``points`` plus every stack with a prefix in ``cones``."""

    points: frozenset
    cones: frozenset

    @classmethod
    def build(cls, symbols: Iterable, points: Iterable = (), cones: Iterable = ()) -> StackPredicate:
        return cls(*_canonical_predicate(tuple(symbols), points, cones))

    @classmethod
    def never(cls) -> StackPredicate:
        return cls(_EMPTY, _EMPTY)

    @property
    def depth(self) -> int:
        return max((len(s) for s in itertools.chain(self.points, self.cones)), default=0)

    def __call__(self, stack: Stack) -> bool:
        stack = tuple(stack)
        if stack in self.points:
            return True
        return any(stack[: len(c)] == c for c in self.cones)

    def is_never(self) -> bool:
        return not self.points and not self.cones


def _canonical_predicate(symbols: tuple, points: Iterable, cones: Iterable) -> tuple[frozenset, frozenset]:
    points = {tuple(p) for p in points}
    cones = {tuple(c) for c in cones}
    while True:
        cones = {c for c in cones if not any(c[:i] in cones for i in range(len(c)))}
        points = {p for p in points if not any(p[:i] in cones for i in range(len(p) + 1))}
        parents = sorted({c[:-1] for c in cones if c}, key=len, reverse=True)
        for head in parents:
            children = {head + (b,) for b in symbols}
            if head in points and children <= cones:
                points.discard(head)
                cones -= children
                cones.add(head)
                break
        else:
            return frozenset(points), frozenset(cones)

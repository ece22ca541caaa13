"""Randomised checking of the Kleisli-triple and T-algebra laws."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .monads import (
    BOTTOM,
    Algebra,
    ConvexAlgebra,
    Distribution,
    Exceptions,
    FreeAlgebra,
    Monad,
    OrAlgebra,
    Partiality,
    PointedAlgebra,
    Powerset,
    Raise,
    SideEffect,
    StackAcceptAlgebra,
    StackState,
    TState,
    UnionAlgebra,
    Val,
    Writer,
    kleisli_compose,
)
from .stack import StackPredicate, stacks_of_length, stacks_up_to

ATOMS = ("u", "v", "w", "z")


def default_monads() -> dict[str, Monad]:
    """One small instance of every supported monad."""
    return {
        "powerset": Powerset(),
        "partiality": Partiality(),
        "exception": Exceptions(frozenset({"e", "f"})),
        "side-effect": SideEffect(("s0", "s1")),
        "writer": Writer(frozenset({"0", "1"})),
        "distribution": Distribution(),
        "stack": StackState(("x", "s")),
    }


def random_tstate(monad: Monad, atoms, rng: random.Random) -> TState:
    atoms = list(atoms)
    if isinstance(monad, Powerset):
        return monad.make(x for x in atoms if rng.random() < 0.4)
    if isinstance(monad, Partiality):
        return monad.make(BOTTOM if rng.random() < 0.25 else Val(rng.choice(atoms)))
    if isinstance(monad, Exceptions):
        if rng.random() < 0.3:
            return monad.make(Raise(rng.choice(sorted(monad.labels, key=str))))
        return monad.make(Val(rng.choice(atoms)))
    if isinstance(monad, SideEffect):
        return monad.make(tuple((rng.choice(monad.effects), rng.choice(atoms)) for _ in monad.effects))
    if isinstance(monad, Writer):
        symbols = sorted(monad.symbols, key=str)
        word = tuple(rng.choice(symbols) for _ in range(rng.randint(0, 2)))
        return monad.make((word, rng.choice(atoms)))
    if isinstance(monad, Distribution):
        support = rng.sample(atoms, rng.randint(1, len(atoms)))
        raw = [rng.randint(1, 6) for _ in support]
        total = sum(raw)
        return monad.make([(x, Fraction(r, total)) for x, r in zip(support, raw)])
    if isinstance(monad, StackState):
        return _random_stack_tstate(monad, atoms, rng)
    raise TypeError(f"no sampler for {monad!r}")


def _random_stack_tstate(monad: StackState, atoms, rng: random.Random) -> TState:
    depth = rng.randint(0, 2)

    def entry():
        out = set()
        for _ in range(rng.randint(0, 2)):
            alpha = tuple(rng.choice(monad.symbols) for _ in range(rng.randint(0, 2)))
            out.add((rng.choice(atoms), alpha))
        return out

    short = {s: entry() for s in stacks_up_to(monad.symbols, depth)}
    long = {p: entry() for p in stacks_of_length(monad.symbols, depth)}
    return monad.table(depth, short, long)


def algebras_for(monad: Monad) -> list[tuple[Algebra, Callable[[random.Random], Any]]]:
    """The output algebras used over ``monad``, each with a sampler of carrier values."""
    if isinstance(monad, Powerset):
        letters = ("a", "b", "c")

        def subset_family(rng):
            return frozenset(
                frozenset(a for a in letters if rng.random() < 0.5) for _ in range(rng.randint(0, 3))
            )

        return [(OrAlgebra(monad), lambda rng: rng.random() < 0.5), (UnionAlgebra(monad), subset_family)]
    if isinstance(monad, Partiality):
        return [
            (PointedAlgebra(False, monad), lambda rng: rng.random() < 0.5),
            (PointedAlgebra(("_", "_"), monad), lambda rng: (rng.choice("_b"), rng.choice("_c"))),
        ]
    if isinstance(monad, (Exceptions, SideEffect, Writer)):
        return [(FreeAlgebra(monad), lambda rng: random_tstate(monad, ("b0", "b1"), rng))]
    if isinstance(monad, Distribution):
        return [(ConvexAlgebra(monad), lambda rng: Fraction(rng.randint(0, 4), 4))]
    if isinstance(monad, StackState):

        def predicate(rng):
            stacks = [s for n in range(3) for s in stacks_of_length(monad.symbols, n)]
            points = [s for s in stacks if rng.random() < 0.2]
            cones = [s for s in stacks if rng.random() < 0.1]
            return StackPredicate.build(monad.symbols, points, cones)

        return [(StackAcceptAlgebra(monad), predicate)]
    raise TypeError(f"no algebra for {monad!r}")


@dataclass
class Violation:
    law: str
    witness: str


@dataclass
class LawReport:
    monad: str
    samples: int
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def _record(self, law: str, holds: bool, witness: Callable[[], str]) -> None:
        self.checked[law] = self.checked.get(law, 0) + 1
        if not holds:
            self.violations.append(Violation(law, witness()))


def check_monad_laws(monad: Monad, samples: int = 100, seed: int = 0) -> LawReport:
    """Check the three Kleisli laws and both T-algebra axioms on random inputs.

    Universes have at most four atoms; violations are collected, not raised.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = random.Random(seed)
    report = LawReport(monad.name, samples)
    algebras = algebras_for(monad)
    for _ in range(samples):
        atoms = ATOMS[: rng.randint(1, len(ATOMS))]
        f_table = {x: random_tstate(monad, atoms, rng) for x in atoms}
        g_table = {x: random_tstate(monad, atoms, rng) for x in atoms}
        f, g = f_table.__getitem__, g_table.__getitem__
        x = rng.choice(atoms)
        t = random_tstate(monad, atoms, rng)

        lhs = monad.bind(monad.unit(x), f)
        report._record("left-unit", lhs == f(x), lambda: f"x={x!r}: {lhs!r} != {f(x)!r}")
        same = monad.bind(t, monad.unit)
        report._record("right-unit", same == t, lambda: f"{same!r} != {t!r}")
        one = monad.bind(monad.bind(t, f), g)
        two = monad.bind(t, kleisli_compose(monad, f, g))
        report._record("associativity", one == two, lambda: f"t={t!r}: {one!r} != {two!r}")

        for i, (algebra, sample) in enumerate(algebras):
            tag = f"{type(algebra).__name__}[{i}]"
            v = sample(rng)
            back = algebra.combine(monad.unit(v))
            report._record(f"{tag}.unit", back == v, lambda: f"{v!r} -> {back!r}")
            inner = [random_tstate(monad, [sample(rng) for _ in range(3)], rng) for _ in range(3)]
            nested = random_tstate(monad, inner, rng)
            flat = algebra.combine(monad.flatten(nested))
            staged = algebra.combine(monad.fmap(nested, algebra.combine))
            report._record(
                f"{tag}.multiplication", flat == staged, lambda: f"{nested!r}: {flat!r} != {staged!r}"
            )
    return report

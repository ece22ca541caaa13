"""The seven computational types and the algebras their outputs live in.

Every monad is a Kleisli triple: ``unit`` embeds an atom, ``bind(ts, f)``
is the extension ``f#`` of ``f: atom -> TState`` applied to ``ts``.  The
multiplication is never materialised; it is ``bind(ts, identity)``.

Values of ``T(X)`` are :class:`TState` instances holding a canonical payload,
so two T-states denoting the same element compare (and hash) equal.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, ClassVar, Hashable, Iterable, Mapping

from .errors import InvariantViolation
from .stack import StackPredicate, StackTable, stacks_of_length, stacks_up_to


@dataclass(frozen=True)
class Val:
    """Normal result ``kappa2(item)`` of the partiality and exception monads."""

    item: Any

    def __repr__(self):
        return f"Val({self.item!r})"


@dataclass(frozen=True)
class Raise:
    """Exception ``kappa1(label)``."""

    label: Any

    def __repr__(self):
        return f"Raise({self.label!r})"


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


@dataclass(frozen=True)
class TState:
    """An element of ``T(X)`` for a specific monad."""

    monad: Monad
    value: Any

    def atoms(self) -> frozenset:
        return self.monad.atoms(self)

    def __repr__(self):
        return f"TState({self.monad.name}, {self.value!r})"


Kleisli = Callable[[Hashable], TState]


class Monad:
    name: ClassVar[str]
    finitary: ClassVar[bool] = True

    def make(self, value: Any) -> TState:
        """Validate and canonicalise a raw payload."""
        return TState(self, self._canonical(value))

    def unit(self, x: Hashable) -> TState:
        raise NotImplementedError

    def bind(self, ts: TState, f: Kleisli) -> TState:
        raise NotImplementedError

    def atoms(self, ts: TState) -> frozenset:
        raise NotImplementedError

    def fmap(self, ts: TState, f: Callable[[Hashable], Hashable]) -> TState:
        return self.bind(ts, lambda x: self.unit(f(x)))

    def flatten(self, ts: TState) -> TState:
        return self.bind(ts, lambda inner: inner)

    def _canonical(self, value):
        return value

    def _check(self, ts: TState) -> None:
        if not isinstance(ts, TState) or ts.monad != self:
            raise InvariantViolation(f"expected a {self.name} T-state, got {ts!r}")

    def _image(self, f: Kleisli, x) -> TState:
        out = f(x)
        self._check(out)
        return out


@dataclass(frozen=True)
class Powerset(Monad):
    name: ClassVar[str] = "powerset"

    def _canonical(self, value):
        return frozenset(value)

    def unit(self, x):
        return TState(self, frozenset((x,)))

    def bind(self, ts, f):
        self._check(ts)
        out = set()
        for x in ts.value:
            out |= self._image(f, x).value
        return TState(self, frozenset(out))

    def atoms(self, ts):
        return ts.value


@dataclass(frozen=True)
class Partiality(Monad):
    name: ClassVar[str] = "partiality"

    def _canonical(self, value):
        if value is BOTTOM or value is None:
            return BOTTOM
        if isinstance(value, Val):
            return value
        raise InvariantViolation(f"partiality payload must be BOTTOM or Val, got {value!r}")

    def unit(self, x):
        return TState(self, Val(x))

    def bottom(self) -> TState:
        return TState(self, BOTTOM)

    def bind(self, ts, f):
        self._check(ts)
        if ts.value is BOTTOM:
            return ts
        return self._image(f, ts.value.item)

    def atoms(self, ts):
        return frozenset() if ts.value is BOTTOM else frozenset((ts.value.item,))


@dataclass(frozen=True)
class Exceptions(Monad):
    """``E + X``: a state or one of finitely many exception labels."""

    labels: frozenset
    name: ClassVar[str] = "exception"

    def __post_init__(self):
        object.__setattr__(self, "labels", frozenset(self.labels))
        if not self.labels:
            raise InvariantViolation("exception label set must be nonempty")

    def _canonical(self, value):
        if isinstance(value, Raise):
            if value.label not in self.labels:
                raise InvariantViolation(f"unknown exception {value.label!r}")
            return value
        if isinstance(value, Val):
            return value
        raise InvariantViolation(f"exception payload must be Raise or Val, got {value!r}")

    def unit(self, x):
        return TState(self, Val(x))

    def throw(self, label) -> TState:
        return self.make(Raise(label))

    def bind(self, ts, f):
        self._check(ts)
        if isinstance(ts.value, Raise):
            return ts
        return self._image(f, ts.value.item)

    def atoms(self, ts):
        return frozenset((ts.value.item,)) if isinstance(ts.value, Val) else frozenset()


@dataclass(frozen=True)
class SideEffect(Monad):
    """``(S x X)^S`` for a finite set of effects ``S``.

    Payload: tuple of ``(next_effect, atom)`` pairs aligned with ``effects``.
    """

    effects: tuple
    name: ClassVar[str] = "side-effect"

    def __post_init__(self):
        object.__setattr__(self, "effects", tuple(sorted(set(self.effects), key=str)))
        if not self.effects:
            raise InvariantViolation("effect set must be nonempty")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.effects)})

    def _canonical(self, value):
        if isinstance(value, Mapping):
            if set(value) != set(self.effects):
                raise InvariantViolation("side-effect table must be total on the effect set")
            value = tuple(value[s] for s in self.effects)
        value = tuple((s2, x) for s2, x in value)
        if len(value) != len(self.effects) or any(s2 not in self._index for s2, _ in value):
            raise InvariantViolation(f"malformed side-effect table {value!r}")
        return value

    def unit(self, x):
        return TState(self, tuple((s, x) for s in self.effects))

    def bind(self, ts, f):
        self._check(ts)
        out = []
        for s2, x in ts.value:
            out.append(self._image(f, x).value[self._index[s2]])
        return TState(self, tuple(out))

    def atoms(self, ts):
        return frozenset(x for _, x in ts.value)

    def table(self, ts: TState) -> dict:
        return dict(zip(self.effects, ts.value))


@dataclass(frozen=True)
class Writer(Monad):
    """``O* x X``: a state paired with the output word emitted so far."""

    symbols: frozenset
    name: ClassVar[str] = "writer"
    finitary: ClassVar[bool] = False

    def __post_init__(self):
        object.__setattr__(self, "symbols", frozenset(self.symbols))
        if not self.symbols:
            raise InvariantViolation("output alphabet must be nonempty")

    def _canonical(self, value):
        word, x = value
        word = tuple(word)
        if any(o not in self.symbols for o in word):
            raise InvariantViolation(f"word {word!r} leaves the output alphabet")
        return (word, x)

    def unit(self, x):
        return TState(self, ((), x))

    def bind(self, ts, f):
        self._check(ts)
        word, x = ts.value
        more, y = self._image(f, x).value
        return TState(self, (word + more, y))

    def atoms(self, ts):
        return frozenset((ts.value[1],))


@dataclass(frozen=True)
class Distribution(Monad):
    """Finitely supported probability distributions with exact rational weights."""

    name: ClassVar[str] = "distribution"
    finitary: ClassVar[bool] = False

    def _canonical(self, value):
        items = value.items() if isinstance(value, Mapping) else value
        weights: dict = defaultdict(Fraction)
        for x, p in items:
            p = Fraction(p)
            if p < 0:
                raise InvariantViolation(f"negative weight {p} on {x!r}")
            weights[x] += p
        if sum(weights.values()) != 1:
            raise InvariantViolation(f"weights sum to {sum(weights.values())}, not 1")
        return frozenset((x, p) for x, p in weights.items() if p)

    def unit(self, x):
        return TState(self, frozenset({(x, Fraction(1))}))

    def bind(self, ts, f):
        self._check(ts)
        weights: dict = defaultdict(Fraction)
        for x, p in ts.value:
            for y, q in self._image(f, x).value:
                weights[y] += p * q
        return TState(self, frozenset((y, p) for y, p in weights.items() if p))

    def atoms(self, ts):
        return frozenset(x for x, _ in ts.value)

    @staticmethod
    def weights(ts: TState) -> dict:
        return dict(ts.value)


@dataclass(frozen=True)
class StackState(Monad):
    """``P(X x B*)^{B*}``, the nondeterministic side effect monad on stacks."""

    symbols: tuple
    name: ClassVar[str] = "stack"
    finitary: ClassVar[bool] = False

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(sorted(set(self.symbols), key=str)))
        if not self.symbols:
            raise InvariantViolation("stack alphabet must be nonempty")

    def _canonical(self, value):
        if not isinstance(value, StackTable):
            raise InvariantViolation(f"stack payload must be a StackTable, got {value!r}")
        return StackTable.build(self.symbols, value.depth, value.short, value.long)

    def table(self, depth: int, short=(), long=()) -> TState:
        return TState(self, StackTable.build(self.symbols, depth, short, long))

    def unit(self, x):
        return TState(self, StackTable.unit(x))

    def bind(self, ts, f):
        self._check(ts)
        c: StackTable = ts.value
        images = {x: self._image(f, x).value for x in c.atoms()}
        inner = max((t.depth for t in images.values()), default=0)
        depth = c.depth + inner
        short = {}
        for stack in stacks_up_to(self.symbols, depth):
            found = set()
            for x, rest in c(stack):
                found |= images[x](rest)
            short[stack] = found
        long = {}
        for prefix in stacks_of_length(self.symbols, depth):
            found = set()
            for x, rho in c.pattern(prefix):
                found |= images[x].pattern(rho)
            long[prefix] = found
        return TState(self, StackTable.build(self.symbols, depth, short, long))

    def atoms(self, ts):
        return ts.value.atoms()


def kleisli_compose(monad: Monad, f: Kleisli, g: Kleisli) -> Kleisli:
    """``g# . f``."""
    return lambda x: monad.bind(f(x), g)


# -- algebras --------------------------------------------------------------


class Algebra:
    """A T-algebra ``(carrier, combine)`` on the outputs of a machine."""

    monad: Monad

    def combine(self, ts: TState) -> Any:
        raise NotImplementedError

    def contains(self, value: Any) -> bool:
        raise NotImplementedError

    def extend(self, ts: TState, output: Callable[[Hashable], Any]) -> Any:
        """``output#(ts)``: push ``ts`` through ``output`` and collapse."""
        return self.combine(self.monad.fmap(ts, output))


@dataclass(frozen=True)
class OrAlgebra(Algebra):
    """The two-element join semilattice over the powerset monad."""

    monad: Monad = Powerset()

    def combine(self, ts):
        return any(ts.value)

    def contains(self, value):
        return isinstance(value, bool)


@dataclass(frozen=True)
class UnionAlgebra(Algebra):
    """Sets under union over the powerset monad (e.g. ``P(P(A))``)."""

    monad: Monad = Powerset()

    def combine(self, ts):
        out = set()
        for v in ts.value:
            out |= v
        return frozenset(out)

    def contains(self, value):
        return isinstance(value, frozenset)


@dataclass(frozen=True)
class PointedAlgebra(Algebra):
    """A pointed set over the partiality monad: undefined collapses to ``point``."""

    point: Any
    monad: Monad = Partiality()

    def combine(self, ts):
        return self.point if ts.value is BOTTOM else ts.value.item

    def contains(self, value):
        return True


@dataclass(frozen=True)
class FreeAlgebra(Algebra):
    """``(T(B), mu)``: outputs are themselves T-states over ``B``."""

    monad: Monad

    def combine(self, ts):
        return self.monad.flatten(ts)

    def contains(self, value):
        return isinstance(value, TState) and value.monad == self.monad


@dataclass(frozen=True)
class ConvexAlgebra(Algebra):
    """``[0, 1]`` as ``D(2)``: a distribution over values collapses to its mean."""

    monad: Monad = Distribution()

    def combine(self, ts):
        return sum((p * v for v, p in ts.value), Fraction(0))

    def contains(self, value):
        return isinstance(value, Fraction) and 0 <= value <= 1


@dataclass(frozen=True)
class StackAcceptAlgebra(Algebra):
    """``2^{B*}`` over the stack monad: accept iff some reached configuration accepts."""

    monad: StackState

    def combine(self, ts):
        c: StackTable = ts.value
        symbols = self.monad.symbols
        reach = max((p.depth for p in c.atoms()), default=0)
        depth = c.depth + reach + 1
        points = [s for s in stacks_up_to(symbols, depth) if any(p(rest) for p, rest in c(s))]
        # Past ``depth`` the remaining stack is longer than any point of any predicate,
        # so only cones matter and the answer is constant on each prefix.
        cones = [
            s for s in stacks_of_length(symbols, depth) if any(p(rho) for p, rho in c.pattern(s))
        ]
        return StackPredicate.build(symbols, points, cones)

    def contains(self, value):
        return isinstance(value, StackPredicate)


MONAD_KINDS = ("powerset", "partiality", "exception", "side-effect", "writer", "distribution", "stack")


def monad_from_spec(kind: str, params: Iterable = ()) -> Monad:
    params = tuple(params)
    if kind == "powerset":
        return Powerset()
    if kind == "partiality":
        return Partiality()
    if kind == "exception":
        return Exceptions(frozenset(params))
    if kind == "side-effect":
        return SideEffect(params)
    if kind == "writer":
        return Writer(frozenset(params))
    if kind == "distribution":
        return Distribution()
    if kind == "stack":
        return StackState(params)
    raise ValueError(f"unknown monad {kind!r}; expected one of {', '.join(MONAD_KINDS)}")

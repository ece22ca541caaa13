"""Brute-force reference implementations used as test oracles.

Nothing here goes through the determinisation machinery: each oracle works
directly on the raw transition data.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from ftdet import Grammar, Lts, MooreVariant, Nda, PartialAutomaton, Distribution


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


# -- nondeterministic automata -------------------------------------------------


def nda_runs_accept(delta, accepting, x, word) -> bool:
    """Depth-first enumeration of every run of ``word`` from ``x``."""
    if not word:
        return x in accepting
    return any(nda_runs_accept(delta, accepting, y, word[1:]) for y in delta.get(x, {}).get(word[0], ()))


def random_nda(rng: random.Random, n_states=None, n_letters=None, density=0.3) -> Nda:
    n = n_states or rng.randint(1, 6)
    k = n_letters or rng.randint(1, 3)
    states = [f"x{i}" for i in range(n)]
    alphabet = "abc"[:k]
    delta = {x: {a: {y for y in states if rng.random() < density} for a in alphabet} for x in states}
    accepting = {x for x in states if rng.random() < 0.4}
    return Nda(states, alphabet, accepting, delta)


def subset_dfa_equivalent(n: Nda, x, y):
    """Textbook product construction over explicit subsets; returns a shortest distinguishing word or None."""

    def step(subset, a):
        return frozenset(z for s in subset for z in n.delta[s][a])

    def accepting(subset):
        return any(s in n.accepting for s in subset)

    start = (frozenset({x}), frozenset({y}))
    seen = {start}
    frontier = [(start, ())]
    while frontier:
        nxt = []
        for (u, v), word in frontier:
            if accepting(u) != accepting(v):
                return word
            for a in n.alphabet:
                pair = (step(u, a), step(v, a))
                if pair not in seen:
                    seen.add(pair)
                    nxt.append((pair, word + (a,)))
        frontier = nxt
    return None


# -- partial automata ------------------------------------------------------------


def random_pa(rng: random.Random) -> PartialAutomaton:
    n, k = rng.randint(1, 6), rng.randint(1, 3)
    states = [f"s{i}" for i in range(n)]
    alphabet = "abc"[:k]
    delta = {x: {a: rng.choice(states) for a in alphabet if rng.random() < 0.6} for x in states}
    accepting = {x for x in states if rng.random() < 0.4}
    return PartialAutomaton(states, alphabet, accepting, delta)


def pa_accepts(p: PartialAutomaton, x, word) -> bool:
    for a in word:
        x = p.partial_delta[x][a]
        if x is None:
            return False
    return x in p.accepting


# -- probabilistic automata ------------------------------------------------------


def random_rabin(rng: random.Random) -> MooreVariant:
    n = rng.randint(1, 4)
    states = [f"r{i}" for i in range(n)]
    alphabet = "ab"[: rng.randint(1, 2)]
    m = Distribution()
    trans = {}
    for x in states:
        trans[x] = {}
        for a in alphabet:
            support = rng.sample(states, rng.randint(1, n))
            raw = [rng.randint(1, 5) for _ in support]
            trans[x][a] = m.make({y: Fraction(r, sum(raw)) for y, r in zip(support, raw)})
    output = {x: Fraction(rng.randint(0, 4), 4) for x in states}
    return MooreVariant(m, states, alphabet, output, trans)


def path_sum(machine: MooreVariant, x, word) -> Fraction:
    """Sum over every path labelled ``word`` of its probability times the final output."""
    if not word:
        return machine.output[x]
    dist = Distribution.weights(machine.trans[x][word[0]])
    return sum((p * path_sum(machine, y, word[1:]) for y, p in dist.items()), Fraction(0))


# -- grammars and pushdown automata ---------------------------------------------


def random_gnf_grammar(rng: random.Random) -> Grammar:
    variables = ["s", "x", "y"][: rng.randint(1, 3)]
    terminals = ["a", "b"]
    productions = set()
    for _ in range(rng.randint(1, 6)):
        rhs = (rng.choice(terminals),) + tuple(rng.choice(variables) for _ in range(rng.randint(0, 2)))
        productions.add((rng.choice(variables), rhs))
    return Grammar(terminals, variables, "s", productions)


def derivable_words(g: Grammar, max_len: int) -> set:
    """Every terminal word of length <= max_len reachable by leftmost derivations from the start symbol."""
    variables = set(g.variables)
    words = set()
    seen = set()
    todo = [(g.start,)]
    while todo:
        form = todo.pop()
        if form in seen:
            continue
        seen.add(form)
        i = next((k for k, s in enumerate(form) if s in variables), None)
        if i is None:
            words.add(form)
            continue
        for lhs, rhs in g.productions:
            if lhs == form[i]:
                new = form[:i] + rhs + form[i + 1 :]
                # in Greibach form every symbol yields at least one letter
                if len(new) <= max_len:
                    todo.append(new)
    return words


def configurations_after(rules, q, word, stack):
    """Configurations reached from ``(q, stack)`` on ``word``; rules are ``(q, a, b, q2, alpha)``."""
    configs = {(q, tuple(stack))}
    for a in word:
        nxt = set()
        for p, beta in configs:
            if not beta:
                continue
            for r in rules:
                if r[0] == p and r[1] == a and r[2] == beta[0]:
                    nxt.add((r[3], tuple(r[4]) + beta[1:]))
        configs = nxt
    return configs


# -- labelled transition systems -------------------------------------------------


def random_lts(rng: random.Random) -> Lts:
    n, k = rng.randint(1, 6), rng.randint(1, 3)
    states = [f"l{i}" for i in range(n)]
    alphabet = "abc"[:k]
    delta = {x: {a: {y for y in states if rng.random() < 0.3} for a in alphabet} for x in states}
    return Lts(states, alphabet, delta)


def lts_paths(lts: Lts, x, depth):
    """Every (word, end state) pair of paths of length <= depth from ``x``."""
    out = [((), x)]
    level = [((), x)]
    for _ in range(depth):
        level = [(w + (a,), z) for w, y in level for a in lts.alphabet for z in lts.delta[y][a]]
        out.extend(level)
    return out


def enabled_set(lts: Lts, x) -> frozenset:
    return frozenset(a for a in lts.alphabet if lts.delta[x][a])


def spectrum_sets(lts: Lts, x, depth):
    """Traces, complete traces, failure pairs and ready pairs of ``x`` up to ``depth``."""
    traces, complete, failures, ready = set(), set(), set(), set()
    letters = list(lts.alphabet)
    subsets = [frozenset(c) for n in range(len(letters) + 1) for c in itertools.combinations(letters, n)]
    for word, y in lts_paths(lts, x, depth):
        en = enabled_set(lts, y)
        traces.add(word)
        if not en:
            complete.add(word)
        ready.add((word, en))
        for z in subsets:
            if not z & en:
                failures.add((word, z))
    return traces, complete, failures, ready

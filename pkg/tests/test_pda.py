from __future__ import annotations

import random
import time

import pytest

from ftdet import (
    AcceptMode,
    CapExceeded,
    Configuration,
    Grammar,
    InvariantViolation,
    NotGreibach,
    Pda,
    UnknownState,
    grammar_to_pda,
    pda_accepts,
    pda_coalgebra,
    pda_moore_states,
    pda_semantics,
    pda_step,
)
from ftdet.stack import StackPredicate, stacks_up_to

from oracles import all_words, configurations_after, derivable_words, random_gnf_grammar


def _anbn(w):
    s = "".join(w)
    n = len(s) // 2
    return n >= 1 and s == "a" * n + "b" * n


def test_step_examples(fig1):
    assert pda_step(fig1, Configuration("q0", "s"), "a") == {Configuration("q0", ("x",))}
    assert pda_step(fig1, Configuration("q0", "xs"), "a") == {Configuration("q0", ("x", "x", "s"))}
    for q in fig1.control:
        for a in fig1.input:
            assert pda_step(fig1, Configuration(q, ()), a) == frozenset()


@pytest.mark.parametrize("word,ok", [("", False), ("ab", True), ("aabb", True), ("aaabbb", True), ("a", False), ("abb", False), ("ba", False)])
def test_fig1_acceptance(fig1, word, ok):
    assert pda_accepts(fig1, word) is ok


def test_both_anbn_machines_accept_the_same_words(fig1, grammar_pda):
    for w in all_words("ab", 10):
        assert pda_accepts(fig1, w) == pda_accepts(grammar_pda, w) == _anbn(w)


def test_semantics_at_other_stacks(fig1, grammar_pda):
    assert pda_semantics(grammar_pda, "*", "abab", "ss") is True
    assert pda_semantics(fig1, "q0", "abab", "ss") is False
    empty = Pda(("q",), "a", "z", [], AcceptMode.empty_stack(), Configuration("q", "z"))
    assert pda_semantics(empty, "q", "", "") is True
    with pytest.raises(UnknownState):
        pda_semantics(fig1, "q9", "a", "s")


def test_semantics_equals_accepts_at_the_initial_configuration(fig1):
    for w in all_words("ab", 6):
        assert pda_semantics(fig1, "q0", w, "s") == pda_accepts(fig1, w)


def test_accept_modes():
    assert AcceptMode.accepting_states({"q"}).accepts("q", "xyz")
    assert not AcceptMode.empty_stack().accepts("q", "x")
    assert AcceptMode.states_and_empty_stack({"q"}).accepts("q", ())
    assert not AcceptMode.states_and_empty_stack({"q"}).accepts("p", ())
    assert AcceptMode.top_symbols({"x"}).accepts("p", ("x", "s"))
    assert not AcceptMode.top_symbols({"x"}).accepts("p", ())
    for mode in (
        AcceptMode.accepting_states({"q"}),
        AcceptMode.empty_stack(),
        AcceptMode.states_and_empty_stack({"q"}),
        AcceptMode.top_symbols({"x"}),
    ):
        for q in ("p", "q"):
            pred = mode.predicate(q, ("s", "x"))
            for beta in stacks_up_to(("s", "x"), 4):
                assert pred(beta) == mode.accepts(q, beta)


def test_pda_validation():
    with pytest.raises(InvariantViolation):
        Pda(("q",), "a", "z", [("q", "a", "z", "p", ())], AcceptMode.empty_stack(), Configuration("q", "z"))
    with pytest.raises(InvariantViolation):
        Pda(("q",), "a", "z", [], AcceptMode.empty_stack(), Configuration("p", "z"))
    with pytest.raises(InvariantViolation):
        Pda(("q",), "a", "z", [], AcceptMode.top_symbols({"y"}), Configuration("q", "z"))


def test_grammar_must_be_greibach():
    bad = Grammar("ab", "sx", "s", [("s", ("x", "a"))])
    with pytest.raises(NotGreibach):
        grammar_to_pda(bad)
    with pytest.raises(NotGreibach):
        grammar_to_pda(Grammar("ab", "s", "s", [("s", ())]))
    with pytest.raises(NotGreibach):
        grammar_to_pda(Grammar("ab", "s", "s", [("s", ("a", "b"))]))


def test_empty_grammar_accepts_nothing():
    p = grammar_to_pda(Grammar("ab", "s", "s", []))
    assert not any(pda_accepts(p, w) for w in all_words("ab", 4))
    assert p.control == ("*",)
    assert p.init == Configuration("*", ("s",))


def test_grammar_pda_matches_derivations():
    rng = random.Random(13)
    for _ in range(60):
        g = random_gnf_grammar(rng)
        p = grammar_to_pda(g)
        derivable = derivable_words(g, 6)
        for w in all_words(g.terminals, 6):
            assert pda_accepts(p, w) == (w in derivable)


def test_acceptance_is_realtime(fig1):
    start = time.perf_counter()
    assert pda_accepts(fig1, "a" * 200 + "b" * 200)
    assert time.perf_counter() - start < 1.0


# -- structured states -----------------------------------------------------------


def _by_word(states):
    return {(s.root, "".join(s.word)): s for s in states}


def test_fig1_structured_states(fig1):
    states = pda_moore_states(fig1, 2)
    assert len(states) == 8
    got = _by_word(states)
    c2 = got[("q0", "a")].table
    assert c2.pattern(("s",)) == {("q0", ("x",))}
    assert c2.pattern(("x",)) == {("q0", ("x", "x"))}
    assert c2(()) == frozenset()
    c3 = got[("q0", "b")].table
    assert c3.pattern(("x",)) == {("q1", ())}
    assert c3.pattern(("s",)) == frozenset()
    c4 = got[("q0", "aa")].table
    assert c4.pattern(("s",)) == {("q0", ("x", "x"))}
    assert c4.pattern(("x",)) == {("q0", ("x", "x", "x"))}
    c5 = got[("q0", "ab")]
    assert c5.table.pattern(("s",)) == {("q1", ())}
    assert c5.table.pattern(("x",)) == {("q1", ("x",))}
    # c5 accepts exactly on the stack s: reading ab from <q0, s> empties it
    assert c5.output == StackPredicate.build(fig1.stack_syms, points=[("s",)])
    c7 = got[("q0", "bb")]
    assert c7.table.pattern(("x", "x")) == {("q1", ())}
    assert c7.output == StackPredicate.build(fig1.stack_syms, points=[("x", "x")])
    dead = got[("q1", "a")]
    assert dead.table.cases() == [] and dead.output.is_never()
    empty_only = StackPredicate.build(fig1.stack_syms, points=[()])
    assert got[("q0", "")].output == got[("q1", "")].output == empty_only
    assert got[("q0", "b")].output == StackPredicate.build(fig1.stack_syms, points=[("x",)])


def test_fig1_transition_structure(fig1):
    states = pda_moore_states(fig1, 2)
    got = _by_word(states)
    idx = {k: s.index for k, s in got.items()}
    assert got[("q0", "")].transitions == {"a": idx[("q0", "a")], "b": idx[("q0", "b")]}
    # q1 on b behaves exactly like q0 on b
    assert got[("q1", "")].transitions["b"] == idx[("q0", "b")]
    assert got[("q0", "b")].transitions["a"] == idx[("q1", "a")]


def test_grammar_structured_states(grammar_pda):
    got = _by_word(pda_moore_states(grammar_pda, 3, roots=["*"]))
    assert got[("*", "a")].table.pattern(("s",)) == {("*", ("s", "x")), ("*", ("x",))}
    assert got[("*", "b")].table.pattern(("x",)) == {("*", ())}
    assert got[("*", "aa")].table.pattern(("s",)) == {("*", ("s", "x", "x")), ("*", ("x", "x"))}
    assert got[("*", "ab")].table.pattern(("s",)) == {("*", ())}
    assert got[("*", "aba")].table.pattern(("s", "s")) == {("*", ("s", "x")), ("*", ("x",))}
    assert got[("*", "ba")].table.pattern(("x", "s")) == {("*", ("s", "x")), ("*", ("x",))}
    assert got[("*", "bb")].table.pattern(("x", "x")) == {("*", ())}
    sym = grammar_pda.stack_syms
    assert got[("*", "b")].output == StackPredicate.build(sym, points=[("x",)])
    assert got[("*", "bb")].output == StackPredicate.build(sym, points=[("x", "x")])
    assert got[("*", "ab")].output == StackPredicate.build(sym, points=[("s",)])
    for w in ("a", "aa", "aba", "ba"):
        assert got[("*", w)].output.is_never()


@pytest.mark.parametrize("which", ["fig1", "grammar_pda"])
def test_structured_states_match_configuration_simulation(which, request):
    p = request.getfixturevalue(which)
    for s in pda_moore_states(p, 3):
        for beta in stacks_up_to(p.stack_syms, 5):
            reached = configurations_after(p.rules, s.root, s.word, beta)
            assert s.table(beta) == frozenset(reached)
            accepted = any(p.accept.accepts(q, b) for q, b in reached)
            assert s.output(beta) == accepted == pda_semantics(p, s.root, s.word, beta)


def test_one_step_tables_read_only_the_top_symbol(fig1, grammar_pda):
    for p in (fig1, grammar_pda):
        c = pda_coalgebra(p)
        for q in p.control:
            for a in p.input:
                table = c.step[q][a].value
                assert table(()) == frozenset()
                for b in p.stack_syms:
                    for beta in stacks_up_to(p.stack_syms, 4):
                        expected = frozenset((r, alpha + beta) for r, alpha in table((b,)))
                        assert table((b,) + beta) == expected


def test_reachable_tables_are_prefix_rewrites(fig1):
    """Beyond its own depth a structured state only rewrites a fixed-length prefix."""
    for s in pda_moore_states(fig1, 3):
        d = s.table.depth
        assert d <= len(s.word) + 1
        for beta in stacks_up_to(fig1.stack_syms, d + 3):
            if len(beta) >= d:
                head, rest = beta[:d], beta[d:]
                assert s.table(beta) == frozenset((q, alpha + rest) for q, alpha in s.table.pattern(head))


def test_moore_states_respect_the_cap(fig1):
    with pytest.raises(CapExceeded) as info:
        pda_moore_states(fig1, 3, cap=5)
    assert info.value.count == 6

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ftdet import (
    BOTTOM,
    Exceptions,
    InvariantViolation,
    MooreVariant,
    Nda,
    PartialAutomaton,
    PartialMealy,
    Powerset,
    SideEffect,
    UnknownState,
    Writer,
    behaviour_table,
    determinize,
    mealy_output,
    moore_behaviour,
    nda_determinize,
    nda_language,
    pa_totalize,
    pa_vw_semantics,
)
from ftdet.monads import Raise, Val

from oracles import all_words, nda_runs_accept, path_sum, random_nda, random_pa, random_rabin


def test_branching_side_determinizes_to_five_subsets():
    right = Nda(
        ("y0", "y1", "y2", "y3", "y4"),
        "abc",
        {"y3", "y4"},
        {"y0": {"a": {"y1", "y2"}}, "y1": {"b": {"y3"}}, "y2": {"c": {"y4"}}},
    )
    c = right.coalgebra()
    only = determinize(c, [c.unit("y0")])
    assert {ts.value for ts in only.keys()} == {
        frozenset({"y0"}),
        frozenset({"y1", "y2"}),
        frozenset(),
        frozenset({"y3"}),
        frozenset({"y4"}),
    }
    assert len(nda_determinize(right)) <= 2 ** 5


def test_nda_without_transitions_has_two_sinks():
    n = Nda(("x",), "a", {"x"}, {})
    det = nda_determinize(n)
    rows = {ts.value: det.row(ts) for ts in det.keys()}
    assert rows[frozenset({"x"})][0] is True
    assert rows[frozenset()][0] is False
    assert len(rows) == 2


@pytest.mark.parametrize("seed", range(5))
def test_nda_language_matches_run_enumeration(seed):
    rng = random.Random(seed)
    for _ in range(10):
        n = random_nda(rng, n_states=5)
        for x in n.states:
            lang = nda_language(n, x, 6)
            for w in all_words(n.alphabet, 6):
                assert (w in lang) == nda_runs_accept(n.delta, n.accepting, x, w)


def test_pa_fixture_languages(pa):
    expected = {w for w in all_words("abc", 4) if _c_star_a_b_star(w)}
    c = pa.coalgebra()
    for x in ("s0", "q0"):
        table = behaviour_table(c, c.unit(x), 4)
        assert {w for w, v in table.items() if v} == expected


def _c_star_a_b_star(w):
    s = "".join(w)
    i = len(s) - len(s.lstrip("c"))
    rest = s[i:]
    return rest[:1] == "a" and set(rest[1:]) <= {"b"}


def test_pa_totalize_adds_a_rejecting_sink(pa):
    det = pa_totalize(pa)
    keys = det.keys()
    assert all(ts.value is BOTTOM or ts.value.item in pa.states for ts in keys)
    sink = next(ts for ts in keys if ts.value is BOTTOM)
    out, succ = det.row(sink)
    assert out is False
    assert all(succ[a] == sink for a in pa.alphabet)


def test_totally_undefined_state():
    p = PartialAutomaton(("x",), "a", set(), {})
    det = pa_totalize(p)
    assert len(det) == 2
    assert pa_vw_semantics(p, "x", 3) == (frozenset(), frozenset({()}))


def test_vw_fixture(pa):
    v, w = pa_vw_semantics(pa, "s0", 2)
    assert {(), ("c",), ("b",), ("a",), ("c", "c"), ("c", "b"), ("c", "a"), ("a", "b")} <= w
    assert v == {("a",), ("a", "b"), ("c", "a")}
    v2, w2 = pa_vw_semantics(pa, "q0", 2)
    assert ("c", "b") in w and ("c", "b") not in w2
    assert v == v2
    with pytest.raises(UnknownState):
        pa_vw_semantics(pa, "nope", 2)


def test_vw_is_prefix_closed_and_contains_v():
    rng = random.Random(2)
    for _ in range(40):
        p = random_pa(rng)
        v, w = pa_vw_semantics(p, p.states[0], 4)
        assert v <= w
        assert all(u[:-1] in w for u in w if u)


def test_mealy_examples():
    m = PartialMealy(("x", "y"), "a", {"_", "b"}, "_", {"x": {"a": ("b", "x")}, "y": {"a": ("b", None)}})
    assert mealy_output(m, None, "aa") == ("_", "_")
    assert mealy_output(m, "x", "aaa") == ("b", "b", "b")
    assert mealy_output(m, "y", "aa") == ("b", "_")


def test_mealy_rejects_bad_outputs():
    with pytest.raises(InvariantViolation):
        PartialMealy(("x",), "a", {"b"}, "_", {})
    with pytest.raises(InvariantViolation):
        PartialMealy(("x",), "a", {"_"}, "_", {"x": {"a": ("zzz", "x")}})


def test_mealy_is_causal():
    rng = random.Random(4)
    for _ in range(20):
        states = ["m0", "m1", "m2"]
        trans = {
            x: {a: (rng.choice("01_"), rng.choice(states + [None])) for a in "ab"} for x in states
        }
        m = PartialMealy(states, "ab", set("01_"), "_", trans)
        for u in all_words("ab", 3):
            for v in all_words("ab", 2):
                assert mealy_output(m, "m0", u + v)[: len(u)] == mealy_output(m, "m0", u)


def test_exception_machine_absorbs():
    m = Exceptions(frozenset({"e"}))
    machine = MooreVariant(
        m,
        ("x", "y"),
        "ab",
        {"x": m.make(Val("0")), "y": m.make(Val("1"))},
        {"x": {"a": m.throw("e"), "b": m.unit("y")}, "y": {"a": m.unit("x"), "b": m.unit("y")}},
    )
    table = moore_behaviour(machine, "x", 4)
    for w, value in table.items():
        if w[:1] == ("a",):
            assert value.value == Raise("e")
    assert table["b"].value == Val("1")


def test_writer_machine_with_silent_output():
    m = Writer(frozenset("0"))
    machine = MooreVariant(m, ("x",), "a", {"x": m.make(((), "*"))}, {"x": {"a": m.make(((), "x"))}})
    assert all(v == m.make(((), "*")) for v in moore_behaviour(machine, "x", 4).entries.values())


def test_writer_machine_accumulates():
    m = Writer(frozenset("01"))
    machine = MooreVariant(
        m,
        ("x", "y"),
        "a",
        {"x": m.make(((), "b")), "y": m.make((("1",), "b"))},
        {"x": {"a": m.make((("0",), "y"))}, "y": {"a": m.make((("0",), "x"))}},
    )
    table = moore_behaviour(machine, "x", 3)
    assert table["a"] == m.make((("0", "1"), "b"))
    assert table["aa"] == m.make((("0", "0"), "b"))


def test_side_effect_machine():
    m = SideEffect(("0", "1"))
    # reading a sets the effect to 1; the output reports the current effect
    machine = MooreVariant(
        m,
        ("x",),
        "a",
        {"x": m.make({"0": ("0", "off"), "1": ("1", "on")})},
        {"x": {"a": m.make({"0": ("1", "x"), "1": ("1", "x")})}},
    )
    table = moore_behaviour(machine, "x", 2)
    assert m.table(table[""]) == {"0": ("0", "off"), "1": ("1", "on")}
    assert m.table(table["a"]) == {"0": ("1", "on"), "1": ("1", "on")}


def test_rabin_example(rabin):
    table = moore_behaviour(rabin, "x", 2)
    assert table["a"] == Fraction(1, 2)
    assert table["aa"] == Fraction(3, 4)


def test_probabilistic_behaviour_matches_path_sum():
    rng = random.Random(8)
    for _ in range(50):
        machine = random_rabin(rng)
        for x in machine.states:
            table = moore_behaviour(machine, x, 5)
            for w, value in table.items():
                assert value == path_sum(machine, x, w)
                assert 0 <= value <= 1


def test_moore_variant_rejects_unknown_monads():
    with pytest.raises(InvariantViolation):
        MooreVariant(Powerset(), ("x",), "a", {"x": True}, {"x": {"a": Powerset().unit("x")}})

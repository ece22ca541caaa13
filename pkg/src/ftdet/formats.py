"""JSON machine files with a top-level ``"kind"`` discriminator.

State, letter and symbol identifiers are strings.  Rationals are written as
``"num/den"`` strings (or integers), never as floats.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .errors import InvariantViolation, NotGreibach, ParseError, ValidationError
from .machines import MooreVariant, Nda, PartialAutomaton, PartialMealy
from .monads import Distribution, Exceptions, Raise, SideEffect, Val, Writer
from .pda import ACCEPT_TAGS, AcceptMode, Configuration, Grammar, Pda
from .traces import Lts

KINDS = (
    "nda",
    "pa",
    "mealy",
    "moore-exception",
    "moore-sideeffect",
    "moore-output",
    "prob",
    "pda",
    "grammar",
    "lts",
)

_RATIONAL = re.compile(r"\s*(\d+)\s*(?:/\s*(\d+)\s*)?")


def parse(data: bytes | str) -> Any:
    """Machine value described by ``data``.

    Raises :class:`ParseError` with a 1-based position for malformed JSON and
    :class:`ValidationError` for well-formed files that break an invariant.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as err:
            raise ParseError(f"not UTF-8: {err.reason}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from None
    try:
        return from_document(doc)
    except ValidationError:
        raise
    except (InvariantViolation, NotGreibach) as err:
        raise ValidationError(str(err)) from None


def from_document(doc: Any) -> Any:
    obj = _Obj(doc, "$")
    kind = obj.str("kind")
    if kind not in KINDS:
        raise ValidationError(f"$.kind: unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    return _READERS[kind](obj)


def serialize(machine: Any) -> str:
    return json.dumps(to_document(machine), indent=2, ensure_ascii=False) + "\n"


def to_document(machine: Any) -> dict:
    if isinstance(machine, Nda):
        return {
            "kind": "nda",
            "states": list(machine.states),
            "alphabet": list(machine.alphabet),
            "accepting": sorted(machine.accepting),
            "transitions": _set_rows(machine.states, machine.alphabet, machine.delta),
        }
    if isinstance(machine, Lts):
        return {
            "kind": "lts",
            "states": list(machine.states),
            "alphabet": list(machine.alphabet),
            "transitions": _set_rows(machine.states, machine.alphabet, machine.delta),
        }
    if isinstance(machine, PartialAutomaton):
        rows = {}
        for x in machine.states:
            row = {a: y for a, y in machine.partial_delta[x].items() if y is not None}
            if row:
                rows[x] = row
        return {
            "kind": "pa",
            "states": list(machine.states),
            "alphabet": list(machine.alphabet),
            "accepting": sorted(machine.accepting),
            "transitions": rows,
        }
    if isinstance(machine, PartialMealy):
        return {
            "kind": "mealy",
            "states": list(machine.states),
            "inputs": list(machine.inputs),
            "outputs": sorted(machine.outputs),
            "bottom": machine.bottom,
            "transitions": {
                x: {a: [b, y] for a, (b, y) in machine.trans[x].items()} for x in machine.states
            },
        }
    if isinstance(machine, MooreVariant):
        return _moore_document(machine)
    if isinstance(machine, Pda):
        return {
            "kind": "pda",
            "control": list(machine.control),
            "input": list(machine.input),
            "stack": list(machine.stack_syms),
            "rules": [[q, a, b, q2, list(alpha)] for q, a, b, q2, alpha in sorted(machine.rules)],
            "accept": {"mode": machine.accept.tag, "members": sorted(machine.accept.members)},
            "init": {"state": machine.init.q, "stack": list(machine.init.stack)},
        }
    if isinstance(machine, Grammar):
        return {
            "kind": "grammar",
            "terminals": list(machine.terminals),
            "variables": list(machine.variables),
            "start": machine.start,
            "productions": [[b, list(rhs)] for b, rhs in sorted(machine.productions)],
        }
    raise TypeError(f"cannot serialise {type(machine).__name__}")


def format_rational(p: Fraction) -> str:
    p = Fraction(p)
    return f"{p.numerator}/{p.denominator}"


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(f"{where}: rationals must be written as \"p/q\", got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL.fullmatch(value)
        if m:
            den = int(m.group(2) or 1)
            if den == 0:
                raise ValidationError(f"{where}: zero denominator in {value!r}")
            return Fraction(int(m.group(1)), den)
    raise ValidationError(f"{where}: expected a rational \"p/q\", got {value!r}")


class _Obj:
    """JSON object wrapper whose accessors report the offending path."""

    def __init__(self, doc: Any, path: str):
        if not isinstance(doc, dict):
            raise ValidationError(f"{path}: expected an object")
        self.doc = doc
        self.path = path

    def _get(self, key: str, default: Any = ...) -> Any:
        if key not in self.doc:
            if default is ...:
                raise ValidationError(f"{self.path}: missing field {key!r}")
            return default
        return self.doc[key]

    def str(self, key: str) -> str:
        value = self._get(key)
        if not isinstance(value, str):
            raise ValidationError(f"{self.path}.{key}: expected a string")
        return value

    def strs(self, key: str, default: Any = ...) -> list[str]:
        value = self._get(key, default)
        return _strs(value, f"{self.path}.{key}")

    def obj(self, key: str, default: Any = ...) -> _Obj:
        return _Obj(self._get(key, default), f"{self.path}.{key}")

    def raw(self, key: str, default: Any = ...) -> Any:
        return self._get(key, default)


def _strs(value: Any, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ValidationError(f"{where}: expected a list of strings")
    if len(set(value)) != len(value):
        raise ValidationError(f"{where}: duplicate entries")
    return value


def _declared(value: Any, known, where: str) -> None:
    if value not in known:
        raise ValidationError(f"{where}: {value!r} is not declared")


def _rows(obj: _Obj, key: str, states, alphabet) -> dict:
    """``obj[key]`` as ``{state: {letter: raw}}`` with ids checked."""
    table = obj.obj(key, {})
    out = {}
    for x, row in table.doc.items():
        _declared(x, states, f"{table.path}")
        row_obj = _Obj(row, f"{table.path}.{x}")
        for a in row_obj.doc:
            _declared(a, alphabet, row_obj.path)
        out[x] = dict(row_obj.doc)
    return out


def _state_set(value: Any, states, where: str) -> frozenset:
    items = _strs(value, where)
    for y in items:
        _declared(y, states, where)
    return frozenset(items)


def _read_nda(obj: _Obj) -> Nda:
    states, alphabet = obj.strs("states"), obj.strs("alphabet")
    rows = _rows(obj, "transitions", states, alphabet)
    delta = {
        x: {a: _state_set(ys, states, f"{obj.path}.transitions.{x}.{a}") for a, ys in row.items()}
        for x, row in rows.items()
    }
    accepting = _state_set(obj.raw("accepting", []), states, f"{obj.path}.accepting")
    return Nda(states, alphabet, accepting, delta)


def _read_lts(obj: _Obj) -> Lts:
    states, alphabet = obj.strs("states"), obj.strs("alphabet")
    rows = _rows(obj, "transitions", states, alphabet)
    delta = {
        x: {a: _state_set(ys, states, f"{obj.path}.transitions.{x}.{a}") for a, ys in row.items()}
        for x, row in rows.items()
    }
    return Lts(states, alphabet, delta)


def _read_pa(obj: _Obj) -> PartialAutomaton:
    states, alphabet = obj.strs("states"), obj.strs("alphabet")
    rows = _rows(obj, "transitions", states, alphabet)
    for x, row in rows.items():
        for a, y in row.items():
            if y is not None:
                _declared(y, states, f"{obj.path}.transitions.{x}.{a}")
    accepting = _state_set(obj.raw("accepting", []), states, f"{obj.path}.accepting")
    return PartialAutomaton(states, alphabet, accepting, rows)


def _read_mealy(obj: _Obj) -> PartialMealy:
    states, inputs, outputs = obj.strs("states"), obj.strs("inputs"), obj.strs("outputs")
    bottom = obj.str("bottom")
    _declared(bottom, outputs, f"{obj.path}.bottom")
    rows = _rows(obj, "transitions", states, inputs)
    trans = {}
    for x, row in rows.items():
        trans[x] = {}
        for a, entry in row.items():
            where = f"{obj.path}.transitions.{x}.{a}"
            if not isinstance(entry, list) or len(entry) != 2:
                raise ValidationError(f"{where}: expected [output, next state or null]")
            b, y = entry
            _declared(b, outputs, where)
            if y is not None:
                _declared(y, states, where)
            trans[x][a] = (b, y)
    return PartialMealy(states, inputs, outputs, bottom, trans)


def _exception_value(entry: Any, labels, carrier, where: str):
    node = _Obj(entry, where)
    if set(node.doc) == {"raise"}:
        label = node.str("raise")
        _declared(label, labels, where)
        return Raise(label)
    if set(node.doc) == {"ok"}:
        value = node.str("ok")
        _declared(value, carrier, where)
        return Val(value)
    raise ValidationError(f"{where}: expected {{\"ok\": ...}} or {{\"raise\": ...}}")


def _effect_table(entry: Any, effects, carrier, where: str) -> dict:
    node = _Obj(entry, where)
    if set(node.doc) != set(effects):
        raise ValidationError(f"{where}: expected one entry per effect {sorted(effects)}")
    table = {}
    for s, pair in node.doc.items():
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError(f"{where}.{s}: expected [next effect, value]")
        _declared(pair[0], effects, f"{where}.{s}")
        _declared(pair[1], carrier, f"{where}.{s}")
        table[s] = (pair[0], pair[1])
    return table


def _written(entry: Any, symbols, carrier, where: str):
    if not isinstance(entry, list) or len(entry) != 2:
        raise ValidationError(f"{where}: expected [output word, value]")
    word = entry[0]
    if not isinstance(word, list) or not all(isinstance(o, str) for o in word):
        raise ValidationError(f"{where}: output word must be a list of symbols")
    for o in word:
        _declared(o, symbols, where)
    _declared(entry[1], carrier, where)
    return (tuple(word), entry[1])


def _read_moore(obj: _Obj, kind: str) -> MooreVariant:
    states, alphabet = obj.strs("states"), obj.strs("alphabet")
    out_obj = obj.obj("output")
    rows = _rows(obj, "transitions", states, alphabet)
    for x in states:
        if x not in out_obj.doc:
            raise ValidationError(f"{out_obj.path}: no output for state {x!r}")
        if set(rows.get(x, {})) != set(alphabet):
            raise ValidationError(f"{obj.path}.transitions.{x}: transitions must be total")
    for x in out_obj.doc:
        _declared(x, states, out_obj.path)
    path = f"{obj.path}.transitions"
    if kind == "moore-exception":
        labels, carrier = obj.strs("exceptions"), obj.strs("values")
        m = Exceptions(frozenset(labels))
        output = {x: m.make(_exception_value(out_obj.doc[x], labels, carrier, f"{out_obj.path}.{x}")) for x in states}
        trans = {
            x: {a: m.make(_exception_value(v, labels, states, f"{path}.{x}.{a}")) for a, v in rows[x].items()}
            for x in states
        }
    elif kind == "moore-sideeffect":
        effects, carrier = obj.strs("effects"), obj.strs("values")
        m = SideEffect(tuple(effects))
        output = {x: m.make(_effect_table(out_obj.doc[x], effects, carrier, f"{out_obj.path}.{x}")) for x in states}
        trans = {
            x: {a: m.make(_effect_table(v, effects, states, f"{path}.{x}.{a}")) for a, v in rows[x].items()}
            for x in states
        }
    elif kind == "moore-output":
        symbols, carrier = obj.strs("symbols"), obj.strs("values")
        m = Writer(frozenset(symbols))
        output = {x: m.make(_written(out_obj.doc[x], symbols, carrier, f"{out_obj.path}.{x}")) for x in states}
        trans = {
            x: {a: m.make(_written(v, symbols, states, f"{path}.{x}.{a}")) for a, v in rows[x].items()}
            for x in states
        }
    else:
        m = Distribution()
        output = {}
        for x in states:
            p = parse_rational(out_obj.doc[x], f"{out_obj.path}.{x}")
            if not 0 <= p <= 1:
                raise ValidationError(f"{out_obj.path}.{x}: probability {p} outside [0, 1]")
            output[x] = p
        trans = {}
        for x in states:
            trans[x] = {}
            for a, dist in rows[x].items():
                where = f"{path}.{x}.{a}"
                node = _Obj(dist, where)
                weights = {}
                for y, p in node.doc.items():
                    _declared(y, states, where)
                    weights[y] = parse_rational(p, f"{where}.{y}")
                total = sum(weights.values(), Fraction(0))
                if total != 1:
                    raise ValidationError(f"{where}: weights sum to {format_rational(total)}, not 1")
                trans[x][a] = m.make(weights)
    return MooreVariant(m, states, alphabet, output, trans)


def _moore_document(machine: MooreVariant) -> dict:
    m = machine.monad
    doc: dict = {"states": list(machine.states), "alphabet": list(machine.alphabet)}

    def exc(ts):
        v = ts.value
        return {"raise": v.label} if isinstance(v, Raise) else {"ok": v.item}

    def eff(ts):
        return {s: [s2, x] for s, (s2, x) in m.table(ts).items()}

    def wr(ts):
        word, x = ts.value
        return [list(word), x]

    def carrier(encode_atoms):
        return sorted({v for x in machine.states for v in encode_atoms(machine.output[x])})

    if isinstance(m, Exceptions):
        doc.update(kind="moore-exception", exceptions=sorted(m.labels), values=carrier(lambda ts: ts.atoms()))
        enc = exc
    elif isinstance(m, SideEffect):
        doc.update(kind="moore-sideeffect", effects=list(m.effects), values=carrier(lambda ts: ts.atoms()))
        enc = eff
    elif isinstance(m, Writer):
        doc.update(kind="moore-output", symbols=sorted(m.symbols), values=carrier(lambda ts: ts.atoms()))
        enc = wr
    else:
        doc["kind"] = "prob"
        doc["output"] = {x: format_rational(machine.output[x]) for x in machine.states}
        doc["transitions"] = {
            x: {
                a: {y: format_rational(p) for y, p in sorted(Distribution.weights(ts).items())}
                for a, ts in machine.trans[x].items()
            }
            for x in machine.states
        }
        return doc
    doc["output"] = {x: enc(machine.output[x]) for x in machine.states}
    doc["transitions"] = {x: {a: enc(ts) for a, ts in machine.trans[x].items()} for x in machine.states}
    return doc


def _read_pda(obj: _Obj) -> Pda:
    control, inputs, stack = obj.strs("control"), obj.strs("input"), obj.strs("stack")
    raw_rules = obj.raw("rules")
    if not isinstance(raw_rules, list):
        raise ValidationError(f"{obj.path}.rules: expected a list")
    rules = []
    for i, rule in enumerate(raw_rules):
        where = f"{obj.path}.rules[{i}]"
        if not isinstance(rule, list) or len(rule) != 5:
            raise ValidationError(f"{where}: expected [state, letter, top, state, pushed symbols]")
        q, a, b, q2, alpha = rule
        _declared(q, control, where)
        _declared(a, inputs, where)
        _declared(b, stack, where)
        _declared(q2, control, where)
        if not isinstance(alpha, list):
            raise ValidationError(f"{where}: pushed symbols must be a list")
        for s in alpha:
            _declared(s, stack, where)
        rules.append((q, a, b, q2, tuple(alpha)))
    accept = obj.obj("accept")
    tag = accept.str("mode")
    if tag not in ACCEPT_TAGS:
        raise ValidationError(f"{accept.path}.mode: expected one of {', '.join(ACCEPT_TAGS)}")
    members = accept.strs("members", [])
    known = stack if tag == "top-symbols" else control
    for m in members:
        _declared(m, known, f"{accept.path}.members")
    init = obj.obj("init")
    q0 = init.str("state")
    _declared(q0, control, f"{init.path}.state")
    beta = init.raw("stack", [])
    if not isinstance(beta, list):
        raise ValidationError(f"{init.path}.stack: expected a list of stack symbols")
    for s in beta:
        _declared(s, stack, f"{init.path}.stack")
    return Pda(control, inputs, stack, rules, AcceptMode(tag, frozenset(members)), Configuration(q0, tuple(beta)))


def _read_grammar(obj: _Obj) -> Grammar:
    terminals, variables = obj.strs("terminals"), obj.strs("variables")
    start = obj.str("start")
    _declared(start, variables, f"{obj.path}.start")
    raw = obj.raw("productions")
    if not isinstance(raw, list):
        raise ValidationError(f"{obj.path}.productions: expected a list")
    productions = []
    for i, entry in enumerate(raw):
        where = f"{obj.path}.productions[{i}]"
        if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[1], list):
            raise ValidationError(f"{where}: expected [variable, [terminal, variables...]]")
        b, rhs = entry
        if not all(isinstance(s, str) for s in rhs):
            raise ValidationError(f"{where}: symbols must be strings")
        for s in [b, *rhs]:
            _declared(s, set(terminals) | set(variables), where)
        productions.append((b, tuple(rhs)))
    g = Grammar(terminals, variables, start, productions)
    try:
        g.greibach_rules()
    except NotGreibach as err:
        raise ValidationError(f"{obj.path}.productions: {err}") from None
    return g


_READERS = {
    "nda": _read_nda,
    "pa": _read_pa,
    "mealy": _read_mealy,
    "moore-exception": lambda o: _read_moore(o, "moore-exception"),
    "moore-sideeffect": lambda o: _read_moore(o, "moore-sideeffect"),
    "moore-output": lambda o: _read_moore(o, "moore-output"),
    "prob": lambda o: _read_moore(o, "prob"),
    "pda": _read_pda,
    "grammar": _read_grammar,
    "lts": _read_lts,
}


def _set_rows(states, alphabet, delta) -> dict:
    rows = {}
    for x in states:
        row = {a: sorted(delta[x][a]) for a in alphabet if delta[x][a]}
        if row:
            rows[x] = row
    return rows


def load(path) -> Any:
    """Parse the machine file at ``path``."""
    with open(path, "rb") as fh:
        return parse(fh.read())


__all__ = [
    "KINDS",
    "format_rational",
    "from_document",
    "load",
    "parse",
    "parse_rational",
    "serialize",
    "to_document",
]

"""Command-line front end: ``ftdet <command> ...``.

Exit codes: 0 success (or equivalent / accepted), 1 distinguished / rejected /
law violation, 2 depth-bounded, 3 exploration cap exceeded, 64 usage
errors, 66 unreadable or invalid machine files.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Any, Sequence

from .core import DEFAULT_CAP, FTCoalgebra, Word, behaviour_table, determinize
from .equivalence import DEFAULT_DEPTH, EquivResult, Verdict, absorbed_equivalent, ft_bisimilar
from .errors import CapExceeded, FtdetError, ParseError, UnknownState, ValidationError
from .formats import format_rational, load
from .laws import check_monad_laws, default_monads
from .machines import MooreVariant, Nda, PartialAutomaton, PartialMealy, pa_vw_semantics
from .monads import BOTTOM, Raise, TState, Val
from .pda import Grammar, Pda, grammar_to_pda, pda_coalgebra, pda_semantics
from .stack import StackPredicate, StackTable
from .traces import Decoration, Lts, decorate, decorated_semantics

EXIT_OK = 0
EXIT_DIFFERENT = 1
EXIT_BOUNDED = 2
EXIT_CAP = 3
EXIT_USAGE = 64
EXIT_NOINPUT = 66

SEMANTICS = ("bisim", "lang", "trace", "ctrace", "failure", "ready")
_DECORATIONS = {
    "trace": Decoration.TRACE,
    "ctrace": Decoration.COMPLETE_TRACE,
    "failure": Decoration.FAILURE,
    "ready": Decoration.READY,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_word(text: str) -> Word:
    """``"ab"`` is two letters; ``"ab,c"`` is the letters ``ab`` and ``c``; ``""`` or ``ε`` is empty."""
    if text in ("", "ε", "eps"):
        return ()
    if "," in text:
        return tuple(text.split(","))
    return tuple(text)


def show_word(word: Sequence) -> str:
    if not word:
        return "ε"
    if all(len(str(a)) == 1 for a in word):
        return "".join(map(str, word))
    return ",".join(map(str, word))


def show_value(value: Any) -> str:
    """Human-readable rendering of outputs and T-states."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else format_rational(value)
    if isinstance(value, (frozenset, set)):
        items = sorted((show_value(v) for v in value))
        return "{" + ", ".join(items) + "}"
    if isinstance(value, tuple):
        return "(" + ", ".join(show_value(v) for v in value) + ")"
    if isinstance(value, StackPredicate):
        parts = [show_word(p) for p in sorted(value.points)] + [show_word(c) + "…" for c in sorted(value.cones)]
        return "{" + ", ".join(parts) + "}"
    if isinstance(value, StackTable):
        rows = []
        for how, stack, result in value.cases():
            tail = "β′" if how == "prefix" else ""
            res = ", ".join(f"<{q},{show_word(a) if a else ''}{tail}>" for q, a in sorted(result, key=str))
            rows.append(f"{show_word(stack) if stack else ''}{tail} ↦ {{{res}}}")
        return "[" + "; ".join(rows) + "]" if rows else "[∅]"
    if isinstance(value, TState):
        return show_value(value.value)
    if isinstance(value, Val):
        return show_value(value.item)
    if value is BOTTOM:
        return "⊥"
    if isinstance(value, Raise):
        return f"raise {value.label}"
    return str(value)


def _coalgebra(machine: Any, semantics: str | None = None) -> FTCoalgebra:
    if isinstance(machine, Lts):
        return decorate(machine, _DECORATIONS.get(semantics, Decoration.TRACE))
    if semantics in _DECORATIONS:
        raise UsageError(f"--semantics {semantics} needs an lts file")
    if isinstance(machine, Grammar):
        machine = grammar_to_pda(machine)
    if isinstance(machine, Pda):
        return pda_coalgebra(machine)
    if isinstance(machine, (Nda, PartialAutomaton, PartialMealy, MooreVariant)):
        return machine.coalgebra()
    raise UsageError(f"unsupported machine {type(machine).__name__}")


def _load(path: str) -> Any:
    try:
        return load(path)
    except OSError as err:
        raise _FileProblem(f"{path}: {err.strerror or err}") from None
    except ParseError as err:
        raise _FileProblem(f"{path}: syntax error: {err}") from None
    except ValidationError as err:
        raise _FileProblem(f"{path}: invalid machine: {err}") from None


class _FileProblem(Exception):
    pass


def cmd_det(args) -> int:
    machine = _load(args.file)
    c = _coalgebra(machine)
    if args.root:
        c.require(*args.root)
        det = determinize(c, [c.unit(x) for x in args.root], args.cap)
    elif isinstance(machine, PartialAutomaton):
        # the sink is a root so that it is listed even when every transition is defined
        det = determinize(c, [c.unit(x) for x in c.states] + [c.monad.bottom()], args.cap)
    else:
        det = determinize(c, [c.unit(x) for x in c.states], args.cap)
    names = {ts: f"t{i}" for i, ts in enumerate(det.keys())}
    if args.dot:
        print(to_dot(det, names))
        return EXIT_OK
    for ts in det.keys():
        out, succ = det.row(ts)
        moves = " ".join(f"{a}→{names[succ[a]]}" for a in c.alphabet)
        print(f"{names[ts]} = {show_value(ts)}  out={show_value(out)}  {moves}")
    print(f"{len(det)} T-states")
    return EXIT_OK


def _dot_id(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return '"' + escaped + '"'


def to_dot(det, names: dict) -> str:
    """GraphViz rendering with one node per memoised T-state."""
    lines = ["digraph det {", "  rankdir=LR;", "  node [shape=box];"]
    for ts in det.keys():
        out = det.output(ts)
        label = f"{show_value(ts)}\nout={show_value(out)}"
        lines.append(f"  {names[ts]} [label={_dot_id(label)}];")
    for ts in det.keys():
        succ = det.row(ts)[1]
        grouped: dict = {}
        for a in det.base.alphabet:
            grouped.setdefault(names[succ[a]], []).append(str(a))
        for target, letters in grouped.items():
            lines.append(f"  {names[ts]} -> {target} [label={_dot_id(','.join(letters))}];")
    lines.append("}")
    return "\n".join(lines)


def _witness_pair(machine: Lts, semantics: str, x, y, result: EquivResult) -> str:
    if semantics not in ("failure", "ready") or not result.is_distinguished:
        return ""
    word = result.witness
    d = _DECORATIONS[semantics]
    left = decorated_semantics(machine, d, x, len(word))[word]
    right = decorated_semantics(machine, d, y, len(word))[word]
    if left - right:
        z, owner = max(left - right, key=lambda s: (len(s), sorted(s))), x
    else:
        z, owner = max(right - left, key=lambda s: (len(s), sorted(s))), y
    return f"  pair <{show_word(word)}, {show_value(z)}> only for {owner}"


def cmd_equiv(args) -> int:
    machine = _load(args.file)
    c = _coalgebra(machine, args.semantics)
    if args.semantics == "bisim":
        result = ft_bisimilar(c, args.x, args.y)
    else:
        result = absorbed_equivalent(c, args.x, args.y, args.depth)
    if result.verdict is Verdict.EQUIVALENT:
        print("equivalent")
        return EXIT_OK
    if result.verdict is Verdict.DEPTH_BOUNDED:
        print(f"depth-bounded: no difference up to depth {result.depth}")
        return EXIT_BOUNDED
    line = f"distinguished: witness {show_word(result.witness)}"
    if isinstance(machine, Lts):
        line += _witness_pair(machine, args.semantics, args.x, args.y, result)
    print(line)
    return EXIT_DIFFERENT


def cmd_accepts(args) -> int:
    machine = _load(args.file)
    word = parse_word(args.word)
    if isinstance(machine, (Pda, Grammar)):
        p = grammar_to_pda(machine) if isinstance(machine, Grammar) else machine
        ok = pda_semantics(p, args.state, word, p.init.stack)
        print("accepted" if ok else "rejected")
        return EXIT_OK if ok else EXIT_DIFFERENT
    c = _coalgebra(machine)
    c.require(args.state)
    _check_letters(c, word)
    value = behaviour_table(c, c.unit(args.state), len(word))[word]
    if isinstance(value, bool):
        print("accepted" if value else "rejected")
        return EXIT_OK if value else EXIT_DIFFERENT
    print(show_value(value))
    return EXIT_OK


def _check_letters(c: FTCoalgebra, word: Word) -> None:
    for a in word:
        if a not in c.alphabet:
            raise UsageError(f"letter {a!r} is not in the alphabet {list(c.alphabet)}")


def cmd_behaviour(args) -> int:
    machine = _load(args.file)
    c = _coalgebra(machine)
    c.require(args.state)
    table = behaviour_table(c, c.unit(args.state), args.depth)
    for word, value in table.items():
        print(f"{show_word(word)}\t{show_value(value)}")
    return EXIT_OK


def cmd_pda_accept(args) -> int:
    machine = _load(args.file)
    if isinstance(machine, Grammar):
        machine = grammar_to_pda(machine)
    if not isinstance(machine, Pda):
        raise UsageError("pda-accept needs a pda or grammar file")
    q = args.state if args.state is not None else machine.init.q
    stack = parse_word(args.stack) if args.stack is not None else machine.init.stack
    for s in stack:
        if s not in machine.stack_syms:
            raise UsageError(f"stack symbol {s!r} is not declared")
    ok = pda_semantics(machine, q, parse_word(args.word), stack)
    print("accepted" if ok else "rejected")
    return EXIT_OK if ok else EXIT_DIFFERENT


def cmd_vw(args) -> int:
    machine = _load(args.file)
    if not isinstance(machine, PartialAutomaton):
        raise UsageError("vw needs a pa file")
    v, w = pa_vw_semantics(machine, args.state, args.depth)

    def words(ws):
        return " ".join(show_word(u) for u in sorted(ws, key=lambda u: (len(u), u)))

    print(f"V: {words(v)}")
    print(f"W: {words(w)}")
    return EXIT_OK


def cmd_laws(args) -> int:
    monads = default_monads()
    names = list(monads) if args.monad == "all" else [args.monad]
    status = EXIT_OK
    for name in names:
        report = check_monad_laws(monads[name], args.samples, args.seed)
        verdict = "ok" if report.ok else f"{len(report.violations)} violation(s)"
        checks = ", ".join(f"{law}×{n}" for law, n in report.checked.items())
        print(f"{name}: {verdict} ({checks})")
        for v in report.violations[:5]:
            print(f"  {v.law}: {v.witness}")
        if not report.ok:
            status = EXIT_DIFFERENT
    return status


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _nonnegative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ftdet", description="Generalised determinisation of automata with effects.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("det", help="print the determinised machine")
    p.add_argument("file")
    p.add_argument("--root", action="append", help="start from unit(S); repeatable")
    p.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    p.add_argument("--dot", action="store_true", help="GraphViz output")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("equiv", help="compare two states")
    p.add_argument("file")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--semantics", choices=SEMANTICS, default="lang")
    p.add_argument("--depth", type=_nonnegative, default=DEFAULT_DEPTH)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("accepts", help="output of a state on a word")
    p.add_argument("file")
    p.add_argument("state")
    p.add_argument("word")
    p.set_defaults(func=cmd_accepts)

    p = sub.add_parser("behaviour", help="depth-bounded behaviour table")
    p.add_argument("file")
    p.add_argument("state")
    p.add_argument("--depth", type=_nonnegative, default=3)
    p.set_defaults(func=cmd_behaviour)

    p = sub.add_parser("pda-accept", help="run a pushdown automaton")
    p.add_argument("file")
    p.add_argument("word")
    p.add_argument("--state")
    p.add_argument("--stack")
    p.set_defaults(func=cmd_pda_accept)

    p = sub.add_parser("vw", help="<V, W> semantics of a partial automaton")
    p.add_argument("file")
    p.add_argument("state")
    p.add_argument("--depth", type=_nonnegative, default=4)
    p.set_defaults(func=cmd_vw)

    p = sub.add_parser("laws", help="randomised monad and algebra law check")
    p.add_argument("--monad", choices=[*default_monads(), "all"], default="all")
    p.add_argument("--samples", type=_positive, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_laws)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as stop:
        return int(stop.code or 0)
    try:
        return args.func(args)
    except _FileProblem as err:
        print(f"ftdet: {err}", file=sys.stderr)
        return EXIT_NOINPUT
    except CapExceeded as err:
        print(f"ftdet: cap exceeded: {err.count} T-states (cap {err.cap})", file=sys.stderr)
        print(err.count)
        return EXIT_CAP
    except (UsageError, UnknownState) as err:
        print(f"ftdet: {err}", file=sys.stderr)
        return EXIT_USAGE
    except FtdetError as err:
        print(f"ftdet: {err}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()

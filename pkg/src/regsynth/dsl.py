"""Text format for register automata and transducers.

Automaton::

    automaton reqgrant {
      semantics: spec-ura;
      in-labels: idle, req;
      out-labels: grt, idle;
      registers: r;
      init: w_i;
      state w_i kind=in priority=0;
      state w_o kind=out priority=0;
      w_i -- in req [top] set {r} -> w_o;
      w_o -- out grt [r=] -> w_i;
    }

Transducer::

    transducer grant {
      in-labels: idle, req;
      out-labels: grt, idle;
      registers: r;
      init: i;
      state i;
      RULE: i -- idle [top] / out idle, reg r -> i;
      RULE: i -- req [top] / set {r}, out grt, reg r -> i;
    }

``reg d0`` outputs the initial datum. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .core import (
    BOT, TOP, And, Eq, Kind, MalformedAutomaton, Neq, Not, Or, RegisterAutomaton, RegisterTransducer,
    Rule, Semantics, Test, Top, Transition, is_complete_inputs, is_deterministic,
)

D0_REG = "d0"

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow>->)
  | (?P<dash>--)
  | (?P<neq>!=)
  | (?P<punct>[{}\[\]();:,=/&|!])
  | (?P<name>[A-Za-z0-9_][\w.']*(?:-[A-Za-z][\w.']*)*)
  """,
    re.VERBOSE,
)


class DSLSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line, self.col, self.msg = line, col, msg


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind != "ws":
            val = m.group()
            toks.append(Tok("name" if kind == "name" else val, val, line, m.start() - start + 1))
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - start + 1))
    return toks


@dataclass
class SpecDocument:
    obj: Union[RegisterAutomaton, RegisterTransducer]
    spans: dict = field(default_factory=dict)  # declared name -> (line, col)
    warnings: list = field(default_factory=list)


_SEM = {
    "nra": (Semantics.NRA, False), "ura": (Semantics.URA, False), "dra": (Semantics.DRA, False),
    "spec-nra": (Semantics.NRA, True), "spec-ura": (Semantics.URA, True), "spec-dra": (Semantics.DRA, True),
}
_KIND = {"in": Kind.IN, "out": Kind.OUT, "plain": Kind.PLAIN}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Tok | None = None):
        tok = tok or self.cur
        raise DSLSyntaxError(msg, tok.line, tok.col)

    def take(self, kind: str, what: str | None = None) -> Tok:
        tok = self.cur
        if tok.kind != kind:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            self.error(f"expected {what or repr(kind)}, found {found}")
        self.i += 1
        return tok

    def accept(self, kind: str, text: str | None = None) -> Tok | None:
        tok = self.cur
        if tok.kind == kind and (text is None or tok.text == text):
            self.i += 1
            return tok
        return None

    def keyword(self, word: str) -> Tok:
        tok = self.cur
        if tok.kind != "name" or tok.text != word:
            self.error(f"expected {word!r}")
        self.i += 1
        return tok

    def name(self, what: str = "a name") -> str:
        return self.take("name", what).text

    def name_list(self) -> list[str]:
        out = []
        if self.cur.kind == "name":
            out.append(self.name())
            while self.accept(","):
                out.append(self.name())
        return out

    def reg_set(self) -> frozenset:
        self.take("{")
        regs = self.name_list()
        self.take("}")
        return frozenset(regs)

    # tests: or > and > not > atom
    def test(self) -> Test:
        t = self._and()
        while self.accept("|"):
            t = Or(t, self._and())
        return t

    def _and(self) -> Test:
        t = self._not()
        while self.accept("&"):
            t = And(t, self._not())
        return t

    def _not(self) -> Test:
        if self.accept("!"):
            return Not(self._not())
        return self._atom()

    def _atom(self) -> Test:
        if self.accept("("):
            t = self.test()
            self.take(")")
            return t
        tok = self.take("name", "a test")
        if tok.text == "top":
            return TOP
        if tok.text == "bot":
            return BOT
        if self.accept("="):
            return Eq(tok.text)
        if self.accept("!="):
            return Neq(tok.text)
        self.error(f"expected '=' or '!=' after register {tok.text!r}")

    def header(self, doc_kind: str):
        first = self.cur
        if first.kind == "eof":
            self.error("empty document: expected 'automaton' or 'transducer'")
        self.keyword(doc_kind)
        nm = self.name("a document name")
        self.take("{")
        return nm

    def fields(self, allowed: set[str]) -> dict:
        """``key: value;`` lines at the top of a block, in any order."""
        out: dict = {}
        while self.cur.kind == "name" and self.toks[self.i + 1].kind == ":" and self.cur.text in allowed:
            key = self.name()
            if key in out:
                self.error(f"duplicate field {key!r}", self.toks[self.i - 1])
            self.take(":")
            out[key] = (self.name_list(), self.toks[self.i - 1])
            self.take(";")
        return out


def _need(fields: dict, key: str, p: _Parser):
    if key not in fields:
        p.error(f"missing field {key!r}")
    return fields[key][0]


def parse_automaton(text: str) -> SpecDocument:
    p = _Parser(text)
    name = p.header("automaton")
    fields = p.fields({"semantics", "in-labels", "out-labels", "labels", "registers", "init"})
    sem_words = _need(fields, "semantics", p)
    if len(sem_words) != 1 or sem_words[0] not in _SEM:
        p.error("semantics must be one of " + ", ".join(_SEM), fields["semantics"][1])
    semantics, want_spec = _SEM[sem_words[0]]
    labels_in = fields.get("in-labels", fields.get("labels", ([], None)))[0]
    labels_out = fields.get("out-labels", ([], None))[0]
    registers = fields.get("registers", ([], None))[0]
    if D0_REG in registers:
        p.error(f"register name {D0_REG!r} is reserved", fields["registers"][1])
    init = _need(fields, "init", p)
    if len(init) != 1:
        p.error("exactly one initial state", fields["init"][1])
    states, kind, prio, spans = [], {}, {}, {}
    trans = []
    while not p.accept("}"):
        if p.cur.kind == "name" and p.cur.text == "state" and p.toks[p.i + 1].kind == "name" \
                and p.toks[p.i + 2].kind in ("name", ";"):
            tok = p.keyword("state")
            q = p.name("a state name")
            if q in kind:
                p.error(f"state {q!r} declared twice", tok)
            k, pr = Kind.PLAIN, 0
            while p.cur.kind == "name":
                key = p.name()
                p.take("=")
                val = p.take("name", "a value")
                if key == "kind":
                    if val.text not in _KIND:
                        p.error("kind must be in, out or plain", val)
                    k = _KIND[val.text]
                elif key == "priority":
                    if not val.text.isdigit():
                        p.error("priority must be a natural number", val)
                    pr = int(val.text)
                else:
                    p.error(f"unknown state attribute {key!r}", val)
            p.take(";")
            states.append(q)
            kind[q], prio[q], spans[q] = k, pr, (tok.line, tok.col)
            continue
        tok = p.cur
        src = p.name("a state or 'state'")
        p.take("--")
        direction = p.name("'in' or 'out'")
        if direction not in ("in", "out"):
            p.error("transition direction must be 'in' or 'out'", p.toks[p.i - 1])
        label = p.name("a label")
        p.take("[")
        test = p.test()
        p.take("]")
        asgn = frozenset()
        if p.accept("name", "set"):
            asgn = p.reg_set()
        p.take("->")
        dst = p.name("a target state")
        p.take(";")
        unknown = (test.registers() | asgn) - set(registers)
        if unknown:
            raise DSLSyntaxError(f"unknown register {sorted(unknown)[0]!r}", tok.line, tok.col)
        pool = labels_in if direction == "in" else labels_out
        if label not in pool:
            raise DSLSyntaxError(f"label {label!r} is not an {direction}-label", tok.line, tok.col)
        trans.append((Transition(src, label, test, asgn, dst), tok))
    p.take("eof", "end of input")
    for t, tok in trans:
        for q in (t.src, t.dst):
            if q not in kind:
                raise DSLSyntaxError(f"undeclared state {q!r}", tok.line, tok.col)
    try:
        A = RegisterAutomaton(states, init[0], registers, [t for t, _ in trans], prio, kind,
                              labels_in, labels_out, semantics, name=name)
    except MalformedAutomaton as e:
        tok = fields["init"][1]
        raise DSLSyntaxError(str(e), tok.line, tok.col) from None
    if want_spec and not A.is_spec:
        raise DSLSyntaxError("a spec-* automaton needs every state to be kind=in or kind=out", 1, 1)
    warnings = []
    if semantics is Semantics.DRA and not is_deterministic(A):
        raise DSLSyntaxError("dra automaton is not deterministic", 1, 1)
    if A.is_spec and not is_complete_inputs(A):
        effect = "runs end there and are not rejected" if semantics is Semantics.URA else "missing inputs reject"
        warnings.append(f"some input state does not cover every data behaviour ({effect})")
    return SpecDocument(A, spans, warnings)


def parse_transducer(text: str) -> SpecDocument:
    p = _Parser(text)
    name = p.header("transducer")
    fields = p.fields({"in-labels", "out-labels", "registers", "init"})
    labels_in = _need(fields, "in-labels", p)
    labels_out = _need(fields, "out-labels", p)
    registers = fields.get("registers", ([], None))[0]
    if D0_REG in registers:
        p.error(f"register name {D0_REG!r} is reserved", fields["registers"][1])
    init = _need(fields, "init", p)
    states, spans, rules = [], {}, {}
    while not p.accept("}"):
        if p.accept("name", "state"):
            tok = p.toks[p.i - 1]
            q = p.name("a state name")
            if q in spans:
                p.error(f"state {q!r} declared twice", tok)
            p.take(";")
            states.append(q)
            spans[q] = (tok.line, tok.col)
            continue
        tok = p.keyword("RULE")
        p.take(":")
        src = p.name("a state")
        p.take("--")
        label = p.name("an input label")
        p.take("[")
        test = p.test()
        p.take("]")
        p.take("/")
        asgn = frozenset()
        if p.accept("name", "set"):
            asgn = p.reg_set()
            p.take(",")
        p.keyword("out")
        out_label = p.name("an output label")
        p.take(",")
        p.keyword("reg")
        reg = p.name("a register or d0")
        p.take("->")
        dst = p.name("a target state")
        p.take(";")
        unknown = (test.registers() | asgn | ({reg} - {D0_REG})) - set(registers)
        if unknown:
            raise DSLSyntaxError(f"unknown register {sorted(unknown)[0]!r}", tok.line, tok.col)
        rules.setdefault((src, label), []).append(
            Rule(test, asgn, out_label, None if reg == D0_REG else reg, dst))
    p.take("eof", "end of input")
    if len(init) != 1:
        p.error("exactly one initial state", fields["init"][1])
    try:
        T = RegisterTransducer(states, init[0], registers, rules, labels_in, labels_out, name=name)
    except MalformedAutomaton as e:
        raise DSLSyntaxError(str(e), 1, 1) from None
    if not T.is_deterministic():
        raise DSLSyntaxError("transducer is not deterministic", 1, 1)
    if not T.is_complete():
        raise DSLSyntaxError("transducer is not complete (some data behaviour has no rule)", 1, 1)
    return SpecDocument(T, spans, [])


def parse(text: str) -> SpecDocument:
    """Parse either kind of document, chosen by its first word."""
    p = _Parser(text)
    first = p.cur
    if first.kind == "name" and first.text == "transducer":
        return parse_transducer(text)
    if first.kind == "name" and first.text == "automaton":
        return parse_automaton(text)
    if first.kind == "eof":
        raise DSLSyntaxError("empty document: expected 'automaton' or 'transducer'", first.line, first.col)
    raise DSLSyntaxError("expected 'automaton' or 'transducer'", first.line, first.col)


# ---------------------------------------------------------------------------
# Printing

_NAME = re.compile(r"[A-Za-z0-9_][\w.']*(?:-[A-Za-z][\w.']*)*\Z")


def _check_name(x, what: str) -> str:
    if not isinstance(x, str) or not _NAME.match(x) or x in ("state", "RULE"):
        raise ValueError(f"{what} {x!r} cannot be written in the text format")
    return x


def _names(xs) -> str:
    return ", ".join(sorted(_check_name(x, "name") for x in xs))


def print_automaton(A: RegisterAutomaton) -> str:
    sem = A.semantics.value
    if A.is_spec:
        sem = "spec-" + sem
    lines = [f"automaton {_check_name(A.name, 'name')} {{", f"  semantics: {sem};"]
    if A.is_spec:
        lines += [f"  in-labels: {_names(A.labels_in)};", f"  out-labels: {_names(A.labels_out)};"]
    else:
        lines.append(f"  in-labels: {_names(A.labels_in)};")
        if A.labels_out:
            lines.append(f"  out-labels: {_names(A.labels_out)};")
    lines.append(f"  registers: {', '.join(_check_name(r, 'register') for r in A.registers)};")
    lines.append(f"  init: {_check_name(A.initial, 'state')};")
    for q in A.states:
        lines.append(f"  state {_check_name(q, 'state')} kind={A.kind[q].value} priority={A.priority[q]};")
    for t in A.transitions:
        direction = "in" if (t.label in A.labels_in and A.kind[t.src] is not Kind.OUT) else "out"
        asg = f" set {{{', '.join(sorted(t.asgn))}}}" if t.asgn else ""
        lines.append(f"  {t.src} -- {direction} {_check_name(t.label, 'label')} [{t.test}]{asg} -> {t.dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_transducer(T: RegisterTransducer) -> str:
    lines = [
        f"transducer {_check_name(T.name, 'name')} {{",
        f"  in-labels: {_names(T.labels_in)};",
        f"  out-labels: {_names(T.labels_out)};",
        f"  registers: {', '.join(_check_name(r, 'register') for r in T.registers)};",
        f"  init: {_check_name(T.initial, 'state')};",
    ]
    for q in T.states:
        lines.append(f"  state {_check_name(q, 'state')};")
    for q in T.states:
        for label in sorted(T.labels_in):
            for r in T.rules.get((q, label), ()):
                asg = f"set {{{', '.join(sorted(r.asgn))}}}, " if r.asgn else ""
                reg = D0_REG if r.out_reg is None else r.out_reg
                lines.append(f"  RULE: {q} -- {label} [{r.test}] / {asg}out {r.out_label}, reg {reg} -> {r.dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_document(x) -> str:
    if isinstance(x, SpecDocument):
        x = x.obj
    if isinstance(x, RegisterTransducer):
        return print_transducer(x)
    return print_automaton(x)


def automaton_to_dot(A: RegisterAutomaton) -> str:
    """Input states are boxes, output states circles; priorities in labels."""
    shape = {Kind.IN: "box", Kind.OUT: "circle", Kind.PLAIN: "ellipse"}
    lines = [f'digraph "{A.name}" {{', "  rankdir=LR;", "  __init [shape=point];"]
    ids = {q: f"n{i}" for i, q in enumerate(A.states)}
    for q in A.states:
        lines.append(f'  {ids[q]} [label="{q}\\n{A.priority[q]}", shape={shape[A.kind[q]]}, '
                     f'kind="{A.kind[q].value}"];')
    lines.append(f"  __init -> {ids[A.initial]};")
    for t in A.transitions:
        asg = (" ↓" + ",".join(sorted(t.asgn))) if t.asgn else ""
        test = "" if isinstance(t.test, Top) else f" {t.test}"
        lines.append(f'  {ids[t.src]} -> {ids[t.dst]} [label="{t.label}{test}{asg}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def transducer_to_dot(T: RegisterTransducer) -> str:
    lines = [f'digraph "{T.name}" {{', "  rankdir=LR;", "  __init [shape=point];"]
    ids = {q: f"n{i}" for i, q in enumerate(T.states)}
    for q in T.states:
        lines.append(f'  {ids[q]} [label="{q}", shape=box];')
    lines.append(f"  __init -> {ids[T.initial]};")
    for q in T.states:
        for label in sorted(T.labels_in):
            for r in T.rules.get((q, label), ()):
                asg = (" ↓" + ",".join(sorted(r.asgn))) if r.asgn else ""
                test = "" if isinstance(r.test, Top) else f" {r.test}"
                reg = D0_REG if r.out_reg is None else r.out_reg
                lines.append(f'  {ids[q]} -> {ids[r.dst]} [label="{label}{test}{asg} / {r.out_label}, {reg}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load(path) -> SpecDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())

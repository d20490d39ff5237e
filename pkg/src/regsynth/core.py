"""Register automata, tests, valuations and register transducers.

Data values are non-negative integers. ``D0 = 0`` is the distinguished
initial register content; only equality between data is ever observed.
Registers are named by strings. States may be any hashable value, which
lets constructions (products, enrichments) use tuples as state ids.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

D0 = 0

State = Hashable
Label = Hashable


class MalformedAutomaton(ValueError):
    """Raised when an automaton or transducer violates a structural invariant."""


# ---------------------------------------------------------------------------
# Tests


class Test:
    """Base class of test formulas over registers."""

    __slots__ = ()

    def registers(self) -> frozenset[str]:
        raise NotImplementedError

    def __and__(self, other: "Test") -> "Test":
        return conj(self, other)

    def __or__(self, other: "Test") -> "Test":
        return disj(self, other)

    def __invert__(self) -> "Test":
        return Not(self)


@dataclass(frozen=True)
class Top(Test):
    def registers(self):
        return frozenset()

    def __str__(self):
        return "top"


@dataclass(frozen=True)
class Bot(Test):
    def registers(self):
        return frozenset()

    def __str__(self):
        return "bot"


@dataclass(frozen=True)
class Eq(Test):
    reg: str

    def registers(self):
        return frozenset((self.reg,))

    def __str__(self):
        return f"{self.reg}="


@dataclass(frozen=True)
class Neq(Test):
    reg: str

    def registers(self):
        return frozenset((self.reg,))

    def __str__(self):
        return f"{self.reg}!="


@dataclass(frozen=True)
class And(Test):
    left: Test
    right: Test

    def registers(self):
        return self.left.registers() | self.right.registers()

    def __str__(self):
        return f"{_paren(self.left, And)} & {_paren(self.right, And)}"


@dataclass(frozen=True)
class Or(Test):
    left: Test
    right: Test

    def registers(self):
        return self.left.registers() | self.right.registers()

    def __str__(self):
        return f"{_paren(self.left, Or)} | {_paren(self.right, Or)}"


@dataclass(frozen=True)
class Not(Test):
    arg: Test

    def registers(self):
        return self.arg.registers()

    def __str__(self):
        return f"!{_paren(self.arg, Not)}"


def _paren(t: Test, ctx: type) -> str:
    if isinstance(t, (Top, Bot, Eq, Neq, Not)) or isinstance(t, ctx):
        return str(t)
    return f"({t})"


TOP = Top()
BOT = Bot()


def conj(*tests: Test) -> Test:
    """Conjunction that drops ``top`` operands."""
    parts = [t for t in tests if not isinstance(t, Top)]
    if not parts:
        return TOP
    out = parts[0]
    for t in parts[1:]:
        out = And(out, t)
    return out


def disj(*tests: Test) -> Test:
    parts = [t for t in tests if not isinstance(t, Bot)]
    if not parts:
        return BOT
    out = parts[0]
    for t in parts[1:]:
        out = Or(out, t)
    return out


def eval_atoms(test: Test, equal: frozenset | set) -> bool:
    """Evaluate ``test`` when exactly the registers in ``equal`` hold the datum."""
    if isinstance(test, Top):
        return True
    if isinstance(test, Bot):
        return False
    if isinstance(test, Eq):
        return test.reg in equal
    if isinstance(test, Neq):
        return test.reg not in equal
    if isinstance(test, And):
        return eval_atoms(test.left, equal) and eval_atoms(test.right, equal)
    if isinstance(test, Or):
        return eval_atoms(test.left, equal) or eval_atoms(test.right, equal)
    if isinstance(test, Not):
        return not eval_atoms(test.arg, equal)
    raise TypeError(f"not a test: {test!r}")


def eval_test(test: Test, valuation: Mapping[str, int], d: int) -> bool:
    """Decide ``valuation, d |= test``."""
    unknown = test.registers() - valuation.keys()
    if unknown:
        raise MalformedAutomaton(f"test mentions unknown registers {sorted(unknown)}")
    return eval_atoms(test, {r for r, v in valuation.items() if v == d})


def subsets(items: Sequence) -> Iterator[frozenset]:
    items = list(items)
    for n in range(len(items) + 1):
        for combo in itertools.combinations(items, n):
            yield frozenset(combo)


def explicit_tests(test: Test, registers: Iterable[str]) -> frozenset[frozenset[str]]:
    """All equality sets E over ``registers`` with ``alpha_E => test`` valid.

    ``alpha_E`` fixes every atom, so validity reduces to one evaluation per E.
    """
    regs = sorted(registers)
    missing = test.registers() - set(regs)
    if missing:
        raise MalformedAutomaton(f"test mentions unknown registers {sorted(missing)}")
    return frozenset(E for E in subsets(regs) if eval_atoms(test, E))


def alpha(E: Iterable[str], registers: Iterable[str]) -> Test:
    """The maximally consistent conjunction: equal to E, different from the rest."""
    E = frozenset(E)
    regs = sorted(registers)
    if not E <= set(regs):
        raise MalformedAutomaton(f"{sorted(E)} is not a subset of {regs}")
    return conj(*[Eq(r) if r in E else Neq(r) for r in regs])


def as_explicit(test: Test, registers: Iterable[str]) -> frozenset[str] | None:
    """Return E when ``test`` is syntactically ``alpha_E`` over ``registers``."""
    regs = set(registers)
    atoms: dict[str, bool] = {}

    def walk(t: Test) -> bool:
        if isinstance(t, Top):
            return True
        if isinstance(t, And):
            return walk(t.left) and walk(t.right)
        if isinstance(t, (Eq, Neq)):
            if t.reg in atoms:
                return False
            atoms[t.reg] = isinstance(t, Eq)
            return True
        return False

    if not walk(test) or set(atoms) != regs:
        return None
    return frozenset(r for r, pos in atoms.items() if pos)


def next_valuation(valuation: Mapping[str, int], asgn: Iterable[str], d: int) -> dict[str, int]:
    asgn = frozenset(asgn)
    return {r: (d if r in asgn else v) for r, v in valuation.items()}


def initial_valuation(registers: Iterable[str]) -> dict[str, int]:
    return {r: D0 for r in registers}


# ---------------------------------------------------------------------------
# Automata


class Semantics(enum.Enum):
    NRA = "nra"
    URA = "ura"
    DRA = "dra"


class Kind(str, enum.Enum):
    IN = "in"
    OUT = "out"
    PLAIN = "plain"


@dataclass(frozen=True)
class Transition:
    src: State
    label: Label
    test: Test
    asgn: frozenset
    dst: State

    def __post_init__(self):
        if not isinstance(self.asgn, frozenset):
            object.__setattr__(self, "asgn", frozenset(self.asgn))


@dataclass(frozen=True, eq=False)
class RegisterAutomaton:
    """A parity register automaton.

    ``kind`` maps every state to in/out/plain. When all states are in/out the
    automaton is a specification over relational data words: input states
    read ``labels_in``, output states read ``labels_out`` and transitions
    alternate between the two.
    """

    states: tuple
    initial: State
    registers: tuple[str, ...]
    transitions: tuple[Transition, ...]
    priority: Mapping[State, int]
    kind: Mapping[State, Kind]
    labels_in: frozenset
    labels_out: frozenset = frozenset()
    semantics: Semantics = Semantics.NRA
    name: str = "A"

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "registers", tuple(self.registers))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "labels_in", frozenset(self.labels_in))
        object.__setattr__(self, "labels_out", frozenset(self.labels_out))
        object.__setattr__(self, "priority", dict(self.priority))
        object.__setattr__(self, "kind", {q: Kind(k) for q, k in self.kind.items()})
        self.validate()

    def validate(self) -> None:
        states = set(self.states)
        if len(states) != len(self.states):
            raise MalformedAutomaton("duplicate states")
        if self.initial not in states:
            raise MalformedAutomaton(f"initial state {self.initial!r} unknown")
        if len(set(self.registers)) != len(self.registers):
            raise MalformedAutomaton("duplicate registers")
        for q in self.states:
            p = self.priority.get(q)
            if not isinstance(p, int) or p < 0:
                raise MalformedAutomaton(f"state {q!r} needs a natural priority")
            if q not in self.kind:
                raise MalformedAutomaton(f"state {q!r} has no kind")
        regs = set(self.registers)
        for t in self.transitions:
            if t.src not in states or t.dst not in states:
                raise MalformedAutomaton(f"transition {t} uses an unknown state")
            if not t.test.registers() <= regs or not t.asgn <= regs:
                raise MalformedAutomaton(f"transition {t} uses an unknown register")
            if t.label not in self.alphabet:
                raise MalformedAutomaton(f"transition {t} uses an unknown label")
        if self.is_spec:
            if self.kind[self.initial] is not Kind.IN:
                raise MalformedAutomaton("specification must start in an input state")
            for t in self.transitions:
                ks, kd = self.kind[t.src], self.kind[t.dst]
                if ks is kd:
                    raise MalformedAutomaton(f"transition {t} does not alternate")
                allowed = self.labels_in if ks is Kind.IN else self.labels_out
                if t.label not in allowed:
                    raise MalformedAutomaton(f"transition {t} reads a label of the wrong side")

    @property
    def alphabet(self) -> frozenset:
        return self.labels_in | self.labels_out

    @property
    def is_spec(self) -> bool:
        return bool(self.states) and all(k is not Kind.PLAIN for k in self.kind.values())

    @cached_property
    def outgoing(self) -> dict[State, tuple[int, ...]]:
        out: dict[State, list[int]] = {q: [] for q in self.states}
        for i, t in enumerate(self.transitions):
            out[t.src].append(i)
        return {q: tuple(v) for q, v in out.items()}

    @cached_property
    def by_label(self) -> dict[tuple[State, Label], tuple[int, ...]]:
        out: dict = {}
        for i, t in enumerate(self.transitions):
            out.setdefault((t.src, t.label), []).append(i)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def reg_index(self) -> dict[str, int]:
        return {r: i for i, r in enumerate(self.registers)}

    @cached_property
    def compiled(self) -> dict[tuple[State, Label], tuple]:
        """Per (state, label): tuples (transition index, accepted equality masks,
        assignment positions, destination). Masks are bitsets over register
        positions, so enabling a transition is one set lookup."""
        regs = self.registers
        out = {}
        for key, idxs in self.by_label.items():
            rows = []
            for i in idxs:
                t = self.transitions[i]
                masks = frozenset(_mask(E, self.reg_index) for E in explicit_tests(t.test, regs))
                pos = tuple(sorted(self.reg_index[r] for r in t.asgn))
                rows.append((i, masks, pos, t.dst))
            out[key] = tuple(rows)
        return out

    def labels_for(self, q: State) -> frozenset:
        k = self.kind[q]
        if k is Kind.IN:
            return self.labels_in
        if k is Kind.OUT:
            return self.labels_out
        return self.alphabet

    def replace(self, **changes) -> "RegisterAutomaton":
        fields = dict(
            states=self.states, initial=self.initial, registers=self.registers,
            transitions=self.transitions, priority=self.priority, kind=self.kind,
            labels_in=self.labels_in, labels_out=self.labels_out,
            semantics=self.semantics, name=self.name,
        )
        fields.update(changes)
        return RegisterAutomaton(**fields)

    @property
    def max_priority(self) -> int:
        return max(self.priority.values(), default=0)


def _mask(E: Iterable[str], index: Mapping[str, int]) -> int:
    m = 0
    for r in E:
        m |= 1 << index[r]
    return m


def equality_mask(values: Sequence[int], d: int) -> int:
    m = 0
    for i, v in enumerate(values):
        if v == d:
            m |= 1 << i
    return m


def assign(values: tuple, positions: tuple, d: int) -> tuple:
    if not positions:
        return values
    lst = list(values)
    for i in positions:
        lst[i] = d
    return tuple(lst)


@dataclass(frozen=True)
class Configuration:
    state: State
    valuation: Mapping[str, int] = field(hash=False)


def enabled_transitions(A: RegisterAutomaton, cfg: Configuration, label: Label, d: int) -> list[Transition]:
    return [A.transitions[i] for i in A.by_label.get((cfg.state, label), ())
            if eval_test(A.transitions[i].test, cfg.valuation, d)]


def is_deterministic(A: RegisterAutomaton) -> bool:
    """No two transitions with the same source and label share a satisfying
    equality set."""
    for (q, _), idxs in A.by_label.items():
        seen: set = set()
        for i in idxs:
            ex = explicit_tests(A.transitions[i].test, A.registers)
            if seen & ex:
                return False
            seen |= ex
    return True


def _covered(A: RegisterAutomaton, q: State, label: Label) -> frozenset:
    out: set = set()
    for i in A.by_label.get((q, label), ()):
        out |= explicit_tests(A.transitions[i].test, A.registers)
    return frozenset(out)


def is_complete_inputs(A: RegisterAutomaton, states: Iterable[State] | None = None) -> bool:
    """Every input state (or the given states) covers all 2^|R| equality sets
    for each of its labels."""
    everything = set(subsets(A.registers))
    if states is None:
        states = [q for q in A.states if A.kind[q] is Kind.IN]
    for q in states:
        for label in A.labels_for(q):
            if _covered(A, q, label) != everything:
                return False
    return True


def is_complete(A: RegisterAutomaton) -> bool:
    return is_complete_inputs(A, A.states)


def _is_single_eq(test: Test) -> bool:
    return isinstance(test, Eq)


def is_ido(A: RegisterAutomaton) -> bool:
    """Every output transition tests a single ``r=`` atom."""
    return all(_is_single_eq(t.test) for t in A.transitions if A.kind[t.src] is Kind.OUT)


def is_test_free(A: RegisterAutomaton) -> bool:
    for t in A.transitions:
        k = A.kind[t.src]
        if k is Kind.IN and not isinstance(t.test, Top):
            return False
        if k is Kind.OUT and (not _is_single_eq(t.test) or t.asgn):
            return False
    return A.is_spec


def shift_colors(A: RegisterAutomaton, flip: bool = False) -> RegisterAutomaton:
    """Copy of A with every priority incremented. With ``flip`` the semantics
    tag is dualised (NRA <-> URA)."""
    sem = A.semantics
    if flip:
        sem = {Semantics.NRA: Semantics.URA, Semantics.URA: Semantics.NRA}.get(sem, sem)
    return A.replace(priority={q: p + 1 for q, p in A.priority.items()}, semantics=sem)


def compress_colors(A: RegisterAutomaton) -> RegisterAutomaton:
    """Same language with priorities renumbered onto a gap-free range.

    Consecutive used priorities of equal parity are merged; the map is
    monotone and parity preserving, so every run keeps its verdict.
    """
    remap: dict = {}
    cur = None
    for p in sorted(set(A.priority.values())):
        cur = p % 2 if cur is None else (cur if cur % 2 == p % 2 else cur + 1)
        remap[p] = cur
    if all(remap[p] == p for p in remap):
        return A
    return A.replace(priority={q: remap[p] for q, p in A.priority.items()})


def rename_registers(A: RegisterAutomaton, mapping: Mapping[str, str]) -> RegisterAutomaton:
    def ren(t: Test) -> Test:
        if isinstance(t, Eq):
            return Eq(mapping.get(t.reg, t.reg))
        if isinstance(t, Neq):
            return Neq(mapping.get(t.reg, t.reg))
        if isinstance(t, And):
            return And(ren(t.left), ren(t.right))
        if isinstance(t, Or):
            return Or(ren(t.left), ren(t.right))
        if isinstance(t, Not):
            return Not(ren(t.arg))
        return t

    trans = [Transition(t.src, t.label, ren(t.test), frozenset(mapping.get(r, r) for r in t.asgn), t.dst)
             for t in A.transitions]
    return A.replace(registers=tuple(mapping.get(r, r) for r in A.registers), transitions=trans)


SINK_IN = "__sink_in"
SINK_OUT = "__sink_out"


def complete_with_sink(A: RegisterAutomaton, inputs_only: bool = True) -> RegisterAutomaton:
    """Send every uncovered (state, label, equality set) to a priority-1 sink.

    For specifications two sinks are added (input and output side) so the
    alternation is kept. Returns A itself when nothing is missing.
    """
    everything = set(subsets(A.registers))
    missing: list[tuple[State, Label, list[frozenset]]] = []
    for q in A.states:
        if inputs_only and A.kind[q] is not Kind.IN:
            continue
        for label in sorted(A.labels_for(q), key=repr):
            gap = everything - _covered(A, q, label)
            if gap:
                missing.append((q, label, sorted(gap, key=sorted)))
    if not missing:
        return A
    spec = A.is_spec
    s_in, s_out = (SINK_IN, SINK_OUT) if spec else (SINK_IN, SINK_IN)
    new_states = list(A.states) + ([s_in, s_out] if spec else [s_in])
    prio = dict(A.priority)
    kind = dict(A.kind)
    prio[s_in] = prio[s_out] = 1
    if spec:
        kind[s_in], kind[s_out] = Kind.IN, Kind.OUT
    else:
        kind[s_in] = Kind.PLAIN
    trans = list(A.transitions)
    for q, label, gap in missing:
        tgt = (s_out if A.kind[q] is Kind.IN else s_in) if spec else s_in
        trans.append(Transition(q, label, disj(*[alpha(E, A.registers) for E in gap]), frozenset(), tgt))
    if spec:
        for label in sorted(A.labels_in, key=repr):
            trans.append(Transition(s_in, label, TOP, frozenset(), s_out))
        for label in sorted(A.labels_out, key=repr):
            trans.append(Transition(s_out, label, TOP, frozenset(), s_in))
    else:
        for label in sorted(A.alphabet, key=repr):
            trans.append(Transition(s_in, label, TOP, frozenset(), s_in))
    return A.replace(states=new_states, transitions=trans, priority=prio, kind=kind)


# ---------------------------------------------------------------------------
# Register transducers


@dataclass(frozen=True)
class Rule:
    test: Test
    asgn: frozenset
    out_label: Label
    out_reg: str | None  # None outputs d0 (only useful without registers)
    dst: State

    def __post_init__(self):
        if not isinstance(self.asgn, frozenset):
            object.__setattr__(self, "asgn", frozenset(self.asgn))


@dataclass(frozen=True, eq=False)
class RegisterTransducer:
    """Deterministic, complete register transducer.

    ``rules[(state, input label)]`` lists the guarded rules. On reading
    ``(label, d)`` the rule whose test holds stores d into ``asgn`` and then
    outputs ``(out_label, value of out_reg)``.
    """

    states: tuple
    initial: State
    registers: tuple[str, ...]
    rules: Mapping[tuple[State, Label], tuple[Rule, ...]]
    labels_in: frozenset
    labels_out: frozenset
    name: str = "T"

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "registers", tuple(self.registers))
        object.__setattr__(self, "labels_in", frozenset(self.labels_in))
        object.__setattr__(self, "labels_out", frozenset(self.labels_out))
        object.__setattr__(self, "rules", {k: tuple(v) for k, v in self.rules.items()})
        self.validate()

    def validate(self) -> None:
        states = set(self.states)
        regs = set(self.registers)
        if self.initial not in states:
            raise MalformedAutomaton(f"initial state {self.initial!r} unknown")
        for (q, label), rules in self.rules.items():
            if q not in states or label not in self.labels_in:
                raise MalformedAutomaton(f"rules keyed by unknown ({q!r}, {label!r})")
            for r in rules:
                if r.dst not in states:
                    raise MalformedAutomaton(f"rule {r} targets an unknown state")
                if not r.test.registers() <= regs or not r.asgn <= regs:
                    raise MalformedAutomaton(f"rule {r} uses an unknown register")
                if r.out_reg is not None and r.out_reg not in regs:
                    raise MalformedAutomaton(f"rule {r} outputs unknown register {r.out_reg!r}")
                if r.out_label not in self.labels_out:
                    raise MalformedAutomaton(f"rule {r} outputs an unknown label")

    @cached_property
    def reg_index(self) -> dict[str, int]:
        return {r: i for i, r in enumerate(self.registers)}

    @cached_property
    def compiled(self) -> dict:
        out = {}
        for key, rules in self.rules.items():
            rows = []
            for rule in rules:
                masks = frozenset(_mask(E, self.reg_index) for E in explicit_tests(rule.test, self.registers))
                pos = tuple(sorted(self.reg_index[r] for r in rule.asgn))
                out_i = None if rule.out_reg is None else self.reg_index[rule.out_reg]
                rows.append((rule, masks, pos, out_i))
            out[key] = tuple(rows)
        return out

    def is_complete(self) -> bool:
        everything = set(subsets(self.registers))
        for q in self.states:
            for label in self.labels_in:
                cov: set = set()
                for r in self.rules.get((q, label), ()):
                    cov |= explicit_tests(r.test, self.registers)
                if cov != everything:
                    return False
        return True

    def is_deterministic(self) -> bool:
        for rules in self.rules.values():
            seen: set = set()
            for r in rules:
                ex = explicit_tests(r.test, self.registers)
                if seen & ex:
                    return False
                seen |= ex
        return True

    def is_test_free(self) -> bool:
        return all(isinstance(r.test, Top) for rules in self.rules.values() for r in rules)

    def step(self, state: State, values: tuple, label: Label, d: int) -> tuple[Rule, State, tuple, int]:
        """Fire the unique enabled rule; returns (rule, next state, next values, output datum)."""
        m = equality_mask(values, d)
        for rule, masks, pos, out_i in self.compiled.get((state, label), ()):
            if m in masks:
                nv = assign(values, pos, d)
                return rule, rule.dst, nv, (D0 if out_i is None else nv[out_i])
        raise ContractViolation(f"transducer {self.name} has no rule at {state!r} for ({label!r}, {d})")


class ContractViolation(RuntimeError):
    """A transducer or deterministic automaton broke completeness or determinism at runtime."""


PHANTOM_D0 = "_d0"


def transducer_as_dra(T: RegisterTransducer) -> RegisterAutomaton:
    """The specification DRA whose language is L(T).

    Each rule gets its own output state with a single ``r=`` transition;
    input tests are split into explicit ones. All priorities are 0.
    """
    if not T.is_complete():
        raise MalformedAutomaton(f"transducer {T.name} is not complete")
    if not T.is_deterministic():
        raise MalformedAutomaton(f"transducer {T.name} is not deterministic")
    registers = T.registers
    uses_d0 = any(r.out_reg is None for rules in T.rules.values() for r in rules)
    if uses_d0:
        # a register that is never written keeps d0 forever
        registers = registers + (PHANTOM_D0,)
    states: list = [("in", q) for q in T.states]
    kind = {s: Kind.IN for s in states}
    trans: list[Transition] = []
    for q in T.states:
        for label in sorted(T.labels_in, key=repr):
            for j, rule in enumerate(T.rules.get((q, label), ())):
                mid = ("out", q, label, j)
                states.append(mid)
                kind[mid] = Kind.OUT
                for E in sorted(explicit_tests(rule.test, T.registers), key=sorted):
                    trans.append(Transition(("in", q), label, alpha(E, T.registers), rule.asgn, mid))
                out = PHANTOM_D0 if rule.out_reg is None else rule.out_reg
                trans.append(Transition(mid, rule.out_label, Eq(out), frozenset(), ("in", rule.dst)))
    return RegisterAutomaton(
        states=states, initial=("in", T.initial), registers=registers, transitions=trans,
        priority={s: 0 for s in states}, kind=kind, labels_in=T.labels_in,
        labels_out=T.labels_out, semantics=Semantics.DRA, name=f"{T.name}_dra",
    )


def bell_partitions(items: Sequence) -> Iterator[tuple[frozenset, ...]]:
    """All set partitions of ``items`` (used by tests and bounds)."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in bell_partitions(rest):
        yield (frozenset([first]),) + part
        for i in range(len(part)):
            yield part[:i] + (part[i] | {first},) + part[i + 1:]

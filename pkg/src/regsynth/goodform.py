"""Normal form for specification automata.

An automaton is in good form when every state is reachable, input states are
complete, every test is an explicit test ``alpha_E`` and registers are written
only when the datum is fresh.

The enrichment tracks two things on top of the original state ``q``:

* ``P``: the equality type of the physical valuation, as a partition of the
  registers;
* ``sub``: for every original register, the least physical register that holds
  its value.

Non-fresh reads never write physically; they only redirect ``sub``. Fresh reads
that must be stored go to the least physical register no longer referenced by
a surviving original register. The register set is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping

from .core import (
    Kind, MalformedAutomaton, RegisterAutomaton, Transition, alpha, as_explicit,
    explicit_tests, is_complete_inputs, subsets,
)
from .fpa import FiniteParityAutomaton
from .graphs import explore

Partition = tuple  # sorted tuple of sorted tuples of registers

SINK_IN = ("sink", "in")
SINK_OUT = ("sink", "out")


def canonical_partition(classes) -> Partition:
    return tuple(sorted(tuple(sorted(c)) for c in classes if c))


def classes_of(valuation: Mapping[str, int]) -> Partition:
    """``[tau]``: registers grouped by equal content."""
    groups: dict[int, list[str]] = {}
    for r, v in valuation.items():
        groups.setdefault(v, []).append(r)
    return canonical_partition(groups.values())


@dataclass(frozen=True)
class Enriched:
    """Enriched state ``(q, P, sub)``; ``sub`` is a tuple aligned with the
    original register order."""

    q: Hashable
    P: Partition
    sub: tuple

    def __str__(self):
        parts = "|".join(",".join(c) for c in self.P)
        return f"{self.q}[{parts}]"


@dataclass(frozen=True, eq=False)
class GoodFormAutomaton:
    automaton: RegisterAutomaton
    origin_state: Mapping[Hashable, Hashable]  # enriched state -> original state
    sink_states: tuple
    source: RegisterAutomaton

    def constraint(self, s) -> Partition | None:
        return None if s in self.sink_states else s.P

    def is_feasible(self, t: Transition) -> bool:
        """A transition is feasible when its explicit test can hold in the
        source state's equality type (the datum matches one class or none)."""
        if t.src in self.sink_states:
            return True
        E = as_explicit(t.test, self.automaton.registers)
        return E is not None and (not E or tuple(sorted(E)) in t.src.P)


def _min_of_class(P: Partition) -> dict[str, str]:
    return {r: c[0] for c in P for r in c}


def to_good_form(A: RegisterAutomaton) -> GoodFormAutomaton:
    if not A.is_spec:
        raise MalformedAutomaton(f"{A.name} is not a specification automaton (input/output alternation)")
    regs = A.registers
    ridx = A.reg_index
    init_P = canonical_partition([regs])
    init = Enriched(A.initial, init_P, tuple(min(regs) if regs else None for _ in regs))
    all_E = list(subsets(regs))
    explicit = {}

    def ex(t: Transition):
        got = explicit.get(t)
        if got is None:
            got = explicit[t] = explicit_tests(t.test, regs)
        return got

    def moves(s: Enriched):
        if s in (SINK_IN, SINK_OUT):
            return
        mins = _min_of_class(s.P)
        options = [tuple(c) for c in s.P] + [()]
        for label in sorted(A.labels_for(s.q), key=repr):
            for E in options:
                Eset = frozenset(E)
                orig_E = frozenset(r for r in regs if s.sub[ridx[r]] in Eset)
                for ti in A.by_label.get((s.q, label), ()):
                    t = A.transitions[ti]
                    if orig_E not in ex(t):
                        continue
                    if E:
                        target = mins[E[0]]
                        sub = tuple(target if r in t.asgn else s.sub[ridx[r]] for r in regs)
                        yield label, Eset, frozenset(), Enriched(t.dst, s.P, sub)
                    elif t.asgn:
                        keep = {s.sub[ridx[r]] for r in regs if r not in t.asgn}
                        f = min(r for r in regs if r not in keep)
                        P2 = canonical_partition([[x for x in c if x != f] for c in s.P] + [[f]])
                        m2 = _min_of_class(P2)
                        sub = tuple(f if r in t.asgn else m2[s.sub[ridx[r]]] for r in regs)
                        yield label, Eset, frozenset([f]), Enriched(t.dst, P2, sub)
                    else:
                        yield label, Eset, frozenset(), Enriched(t.dst, s.P, s.sub)

    g = explore([init], lambda s: ((m[0], m[3]) for m in moves(s)))
    enriched = list(g.nodes)
    trans: list[Transition] = []
    seen_t = set()
    for s in enriched:
        for label, E, asgn, dst in moves(s):
            key = (s, label, E, asgn, dst)
            if key in seen_t:
                continue
            seen_t.add(key)
            trans.append(Transition(s, label, alpha(E, regs), asgn, dst))
    kind = {s: A.kind[s.q] for s in enriched}
    prio = {s: A.priority[s.q] for s in enriched}
    # input completion: every uncovered explicit test goes to the output sink
    need_sink = False
    covered: dict = {}
    for t in trans:
        covered.setdefault((t.src, t.label), set()).add(as_explicit(t.test, regs))
    for s in enriched:
        if kind[s] is not Kind.IN:
            continue
        for label in sorted(A.labels_in, key=repr):
            for E in all_E:
                if E not in covered.get((s, label), ()):
                    trans.append(Transition(s, label, alpha(E, regs), frozenset(), SINK_OUT))
                    need_sink = True
    states = list(enriched)
    if need_sink:
        states += [SINK_IN, SINK_OUT]
        kind[SINK_IN], kind[SINK_OUT] = Kind.IN, Kind.OUT
        prio[SINK_IN] = prio[SINK_OUT] = 1
        for E in all_E:
            for label in sorted(A.labels_in, key=repr):
                trans.append(Transition(SINK_IN, label, alpha(E, regs), frozenset(), SINK_OUT))
            for label in sorted(A.labels_out, key=repr):
                trans.append(Transition(SINK_OUT, label, alpha(E, regs), frozenset(), SINK_IN))
    B = RegisterAutomaton(
        states=states, initial=init, registers=regs, transitions=trans, priority=prio, kind=kind,
        labels_in=A.labels_in, labels_out=A.labels_out, semantics=A.semantics, name=f"{A.name}_gf",
    )
    origin = {s: s.q for s in enriched}
    return GoodFormAutomaton(B, origin, (SINK_IN, SINK_OUT) if need_sink else (), A)


def fin(A: RegisterAutomaton) -> FiniteParityAutomaton:
    """Finite automaton over the transition alphabet (symbol = transition index)."""
    delta: dict = {}
    for i, t in enumerate(A.transitions):
        delta.setdefault(t.src, {}).setdefault(i, set()).add(t.dst)
    return FiniteParityAutomaton(A.states, [A.initial], range(len(A.transitions)), delta, A.priority,
                                 f"fin({A.name})")


def is_good_form(A: RegisterAutomaton) -> bool:
    regs = A.registers
    for t in A.transitions:
        E = as_explicit(t.test, regs)
        if E is None:
            return False
        if t.asgn and E:
            return False
    if not is_complete_inputs(A):
        return False
    F = fin(A)
    return len(F.reachable().states) == len(A.states)


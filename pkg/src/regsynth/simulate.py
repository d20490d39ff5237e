"""Membership and execution on lasso data words."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    D0, ContractViolation, RegisterAutomaton, RegisterTransducer, assign,
    equality_mask, shift_colors,
)
from .graphs import accepting_lasso, explore
from .lasso import Lasso, LassoDataWord


class AlphabetMismatch(ValueError):
    pass


@dataclass
class Run:
    """Lasso-shaped run: transition indices and the configurations before
    each step. ``configs_stem[0]`` is the initial configuration; the
    configuration after the last cycle step equals ``configs_cycle[0]``."""

    stem: list[int]
    cycle: list[int]
    configs_stem: list[tuple]
    configs_cycle: list[tuple]
    stuck: bool = False
    meta: dict = field(default_factory=dict)

    def states_cycle(self) -> list:
        return [c[0] for c in self.configs_cycle]


def _check_alphabet(A: RegisterAutomaton, w: Lasso) -> None:
    labels = {l for l, _ in w.prefix + w.loop}
    bad = labels - A.alphabet
    if bad:
        raise AlphabetMismatch(f"labels {sorted(map(str, bad))} are not in the alphabet of {A.name}")


def _word_is_aligned(A: RegisterAutomaton, w: LassoDataWord) -> bool:
    """For specifications, the word must be relational with labels on the right side."""
    if not A.is_spec:
        return True
    if not w.is_relational():
        return False
    for i in range(len(w)):
        side = A.labels_in if i % 2 == 0 else A.labels_out
        if w[i][0] not in side:
            return False
    return True


def nra_membership(A: RegisterAutomaton, w: LassoDataWord) -> tuple[bool, Run | None]:
    """Is there an accepting run of A on w (nondeterministic reading)?"""
    _check_alphabet(A, w)
    if not _word_is_aligned(A, w):
        return False, None
    comp = A.compiled

    def succ(node):
        pos, q, vals = node
        label, d = w[pos]
        m = equality_mask(vals, d)
        nxt = w.next_pos(pos)
        for i, masks, apos, dst in comp.get((q, label), ()):
            if m in masks:
                yield i, (nxt, dst, assign(vals, apos, d))

    init = (0, A.initial, tuple(D0 for _ in A.registers))
    g = explore([init], succ)
    prio = A.priority
    path = accepting_lasso(g, lambda v: prio[g.nodes[v][1]])
    if path is None:
        return False, None
    nodes = g.nodes
    cfg = lambda v: (nodes[v][1], nodes[v][2])
    stem_cfgs = [cfg(path.start)] + [cfg(v) for _, v in path.stem[:-1]] if path.stem else []
    cyc_cfgs = [cfg(path.anchor)] + [cfg(v) for _, v in path.cycle[:-1]]
    run = Run([t for t, _ in path.stem], [t for t, _ in path.cycle], stem_cfgs, cyc_cfgs)
    return True, run


def ura_membership(A: RegisterAutomaton, w: LassoDataWord) -> bool:
    """All runs of A on w accept. Computed through the dual nondeterministic reading."""
    return not nra_membership(shift_colors(A), w)[0]


def membership(A: RegisterAutomaton, w: LassoDataWord) -> bool:
    """Membership under the semantics tag of A."""
    from .core import Semantics

    if A.semantics is Semantics.URA:
        return ura_membership(A, w)
    if A.semantics is Semantics.DRA:
        return dra_run(A, w)[0]
    return nra_membership(A, w)[0]


class NotDeterministic(ContractViolation):
    pass


def dra_run(A: RegisterAutomaton, w: LassoDataWord) -> tuple[bool, Run]:
    """Follow the unique run. A missing transition rejects (``run.stuck``)."""
    _check_alphabet(A, w)
    comp = A.compiled
    pos, q, vals = 0, A.initial, tuple(D0 for _ in A.registers)
    seen: dict = {}
    steps: list[int] = []
    cfgs: list[tuple] = []
    while True:
        key = (pos, q, vals)
        if key in seen and pos >= len(w.prefix):
            k = seen[key]
            run = Run(steps[:k], steps[k:], cfgs[:k], cfgs[k:])
            top = max(A.priority[c[0]] for c in cfgs[k:])
            return top % 2 == 0, run
        seen[key] = len(steps)
        cfgs.append((q, vals))
        label, d = w[pos]
        m = equality_mask(vals, d)
        hits = [(i, apos, dst) for i, masks, apos, dst in comp.get((q, label), ()) if m in masks]
        if len(hits) > 1:
            raise NotDeterministic(f"{A.name}: {len(hits)} transitions enabled at {q!r} on ({label!r}, {d})")
        if not hits:
            return False, Run(steps, [], cfgs, [], stuck=True, meta={"stuck_at": pos})
        i, apos, dst = hits[0]
        steps.append(i)
        q, vals = dst, assign(vals, apos, d)
        pos = w.next_pos(pos)


@dataclass
class TransducerTrace:
    word: LassoDataWord
    rules_stem: list
    rules_cycle: list


def transducer_trace(T: RegisterTransducer, inp: Lasso) -> TransducerTrace:
    """Run T on an input lasso and fold the result into a relational lasso."""
    bad = {l for l, _ in inp.prefix + inp.loop} - T.labels_in
    if bad:
        raise AlphabetMismatch(f"labels {sorted(map(str, bad))} are not inputs of {T.name}")
    pos, q, vals = 0, T.initial, tuple(D0 for _ in T.registers)
    seen: dict = {}
    letters: list = []
    rules: list = []
    while True:
        key = (pos, q, vals)
        if key in seen and pos >= len(inp.prefix):
            k = seen[key]
            word = LassoDataWord(tuple(x for pair in letters[:k] for x in pair),
                                 tuple(x for pair in letters[k:] for x in pair))
            return TransducerTrace(word, rules[:k], rules[k:])
        seen[key] = len(letters)
        label, d = inp[pos]
        rule, q, vals, out = T.step(q, vals, label, d)
        letters.append(((label, d), (rule.out_label, out)))
        rules.append(rule)
        pos = inp.next_pos(pos)


def transducer_run(T: RegisterTransducer, inp: Lasso) -> LassoDataWord:
    return transducer_trace(T, inp).word


def complete_inputs(A: RegisterAutomaton) -> RegisterAutomaton:
    """A with missing input behaviour routed to a rejecting sink."""
    from .core import complete_with_sink

    return complete_with_sink(A, inputs_only=True)

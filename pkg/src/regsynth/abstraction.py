"""Finite abstraction of k-register behaviour.

Abstract input actions ``(label, E)`` say which of the k registers the input
datum equals; abstract output actions ``(label, asgn, r)`` say which registers
store that datum and which register is output. ``build_Lk`` recognises the
data words compatible with an action word, ``label_projection`` turns a
register automaton into a finite automaton over its labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .core import (
    D0, Eq, Kind, MalformedAutomaton, RegisterAutomaton, Semantics, Transition, alpha,
    conj, next_valuation, subsets,
)
from .fpa import FiniteParityAutomaton
from .graphs import explore
from .lasso import Lasso, LassoDataWord, zip_lassos


def k_registers(k: int) -> tuple[str, ...]:
    return tuple(f"r{i}" for i in range(1, k + 1))


@dataclass(frozen=True, order=True)
class InAct:
    label: Hashable
    test: frozenset

    def __str__(self):
        return f"{self.label}/{{{','.join(sorted(self.test))}}}"


@dataclass(frozen=True, order=True)
class OutAct:
    label: Hashable
    asgn: frozenset
    reg: str

    def __str__(self):
        return f"{self.label}/{{{','.join(sorted(self.asgn))}}}/{self.reg}"


def _key(x):
    return (str(x.label), tuple(sorted(getattr(x, "test", getattr(x, "asgn", ())))), getattr(x, "reg", ""))


def in_actions(k: int, labels: Iterable, tests: Iterable[frozenset] | None = None) -> list[InAct]:
    regs = k_registers(k)
    tests = list(subsets(regs)) if tests is None else [frozenset(t) for t in tests]
    return sorted((InAct(l, E) for l in labels for E in tests), key=_key)


def out_actions(k: int, labels: Iterable) -> list[OutAct]:
    regs = k_registers(k)
    return sorted((OutAct(l, A, r) for l in labels for A in subsets(regs) for r in regs), key=_key)


class LabelMismatch(ValueError):
    pass


def compat_check(actions: Sequence, word: Sequence[tuple[Hashable, int]], k: int | None = None) -> bool:
    """Is the finite relational data word compatible with the action word?

    Direct fold of the definition: the register valuation sequence is forced,
    so there is nothing to guess.
    """
    if len(actions) != len(word):
        raise LabelMismatch("action word and data word differ in length")
    if k is None:
        k = _infer_k(actions)
    regs = k_registers(k)
    tau = {r: D0 for r in regs}
    pending = None
    for i, (act, (label, d)) in enumerate(zip(actions, word)):
        if act.label != label:
            raise LabelMismatch(f"position {i}: action label {act.label!r} vs word label {label!r}")
        if i % 2 == 0:
            if not isinstance(act, InAct):
                raise LabelMismatch(f"position {i} expects an input action")
            if frozenset(r for r in regs if tau[r] == d) != act.test:
                return False
            pending = d
        else:
            if not isinstance(act, OutAct):
                raise LabelMismatch(f"position {i} expects an output action")
            tau = next_valuation(tau, act.asgn, pending)
            if tau[act.reg] != d:
                return False
    return True


def _infer_k(actions) -> int:
    regs = set()
    for a in actions:
        regs |= set(getattr(a, "test", ())) | set(getattr(a, "asgn", ()))
        if isinstance(a, OutAct):
            regs.add(a.reg)
    return max((int(r[1:]) for r in regs), default=1)


LK_HUB = "q"


def build_Lk(k: int, labels_in: Iterable, labels_out: Iterable,
             in_tests: Iterable[frozenset] | None = None) -> RegisterAutomaton:
    """NRA over abstract actions accepting the zipped words ``w (x) a`` with
    ``w`` compatible with ``a``. ``in_tests`` restricts the input tests (the
    test-free pipeline uses only the empty one)."""
    if k < 1:
        raise MalformedAutomaton("the action alphabet needs k >= 1 (an output must name a register)")
    regs = k_registers(k)
    ins = in_actions(k, labels_in, in_tests)
    outs = out_actions(k, labels_out)
    asg_states = [("asgn", A) for A in subsets(regs)]
    trans = []
    for a in ins:
        for st in asg_states:
            trans.append(Transition(LK_HUB, a, alpha(a.test, regs), st[1], st))
    for b in outs:
        trans.append(Transition(("asgn", b.asgn), b, Eq(b.reg), frozenset(), LK_HUB))
    states = [LK_HUB] + asg_states
    kind = {LK_HUB: Kind.IN, **{s: Kind.OUT for s in asg_states}}
    return RegisterAutomaton(states, LK_HUB, regs, trans, {s: 0 for s in states}, kind,
                             frozenset(ins), frozenset(outs), Semantics.NRA, name=f"L{k}")


def zip_word(w: LassoDataWord, actions: Lasso) -> LassoDataWord:
    """``(w (x) a)[i] = (a[i], datum of w[i])``; labels must agree."""

    def comb(x, act):
        label, d = x
        if act.label != label:
            raise LabelMismatch(f"action {act} does not carry label {label!r}")
        return (act, d)

    z = zip_lassos(w, actions, comb)
    return LassoDataWord(z.prefix, z.loop)


def erase_data(w: LassoDataWord) -> Lasso:
    return w.labels()


def product_nra(A: RegisterAutomaton, B: RegisterAutomaton,
                label_map: Callable[[Hashable], Hashable] | None = None, name: str | None = None) -> RegisterAutomaton:
    """Synchronous product over A's alphabet; B reads ``label_map(label)``.

    One operand must have all priorities 0, so the product priority is the
    other operand's priority.
    """
    if set(A.registers) & set(B.registers):
        raise MalformedAutomaton("product operands must use disjoint register names")
    a_zero = all(p == 0 for p in A.priority.values())
    b_zero = all(p == 0 for p in B.priority.values())
    if not (a_zero or b_zero):
        raise MalformedAutomaton("product needs one operand with trivial acceptance (all priorities 0)")
    lm = label_map or (lambda x: x)
    regs = A.registers + B.registers
    out_trans: list[Transition] = []

    def succ(s):
        qa, qb = s
        for ia in A.outgoing[qa]:
            ta = A.transitions[ia]
            for ib in B.by_label.get((qb, lm(ta.label)), ()):
                tb = B.transitions[ib]
                yield (ta, tb), (ta.dst, tb.dst)

    g = explore([(A.initial, B.initial)], succ)
    for v, row in enumerate(g.succ):
        src = g.nodes[v]
        for (ta, tb), u in row:
            out_trans.append(Transition(src, ta.label, conj(ta.test, tb.test), ta.asgn | tb.asgn, g.nodes[u]))
    prio = {s: (B.priority[s[1]] if a_zero else A.priority[s[0]]) for s in g.nodes}
    kind = {s: A.kind[s[0]] for s in g.nodes}
    if A.is_spec:
        for s in g.nodes:
            if B.kind[s[1]] is not Kind.PLAIN and B.kind[s[1]] is not A.kind[s[0]]:
                raise MalformedAutomaton("product operands disagree on input/output alternation")
    return RegisterAutomaton(g.nodes, g.nodes[0], regs, out_trans, prio, kind, A.labels_in, A.labels_out,
                             Semantics.NRA, name=name or f"{A.name}x{B.name}")


def _canon(classes: Sequence[int]) -> tuple:
    """Restricted-growth normal form of a class assignment."""
    seen: dict[int, int] = {}
    out = []
    for c in classes:
        if c not in seen:
            seen[c] = len(seen)
        out.append(seen[c])
    return tuple(out)


def label_projection(B: RegisterAutomaton, name: str | None = None) -> FiniteParityAutomaton:
    """Nondeterministic parity automaton for the labels of L_N(B).

    States pair a state of B with the equality type of its registers (a
    restricted-growth tuple: register i is in class ``C[i]``).
    """
    n = len(B.registers)
    comp = B.compiled
    init = (B.initial, tuple(0 for _ in range(n)))
    fresh = n  # class id larger than any existing one

    def succ(s):
        q, C = s
        ncls = max(C) + 1 if C else 0
        masks = [0] * ncls
        for i, c in enumerate(C):
            masks[c] |= 1 << i
        options = [(masks[c], c) for c in range(ncls)] + [(0, fresh)]
        for label in B.labels_for(q):
            for _, accepted, apos, dst in comp.get((q, label), ()):
                for m, cid in options:
                    if m not in accepted:
                        continue
                    if apos:
                        lst = list(C)
                        for p in apos:
                            lst[p] = cid
                        C2 = _canon(lst)
                    else:
                        C2 = C
                    yield label, (dst, C2)

    g = explore([init], succ)
    delta: dict = {}
    for v, row in enumerate(g.succ):
        d = delta.setdefault(g.nodes[v], {})
        for label, u in row:
            d.setdefault(label, set()).add(g.nodes[u])
    prio = {s: B.priority[s[0]] for s in g.nodes}
    return FiniteParityAutomaton(g.nodes, [init], B.alphabet, delta, prio, name or f"lab({B.name})")


"""Bounded synthesis: k-register transducers through a finite-alphabet game.

Two routes lead to a deterministic parity automaton W over abstract actions:

* universal specifications: W accepts the action words all of whose
  compatible data words satisfy S (complement of the projection of
  ``L_k x not-S``);
* test-free nondeterministic specifications: inputs are abstracted as always
  fresh and W accepts the action words with some compatible data word in S.

W is then played as a game; Eve's strategy is a Mealy machine over actions,
which is read back as a register transducer.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Hashable

from .abstraction import (
    InAct, OutAct, build_Lk, in_actions, k_registers, label_projection, out_actions, product_nra,
)
from .core import (
    TOP, Kind, MalformedAutomaton, Neq, RegisterAutomaton, RegisterTransducer, Rule, Semantics,
    Transition, alpha, complete_with_sink, compress_colors, conj, explicit_tests, is_test_free, rename_registers,
    shift_colors,
)
from .determinize import npa_to_dpa
from .fpa import FiniteParityAutomaton, complement_dpa
from .games import ADAM, EVE, ParityArena, solve
from .lasso import LassoDataWord
from .synth_dra import Realizable, Unrealizable


@dataclass
class Unsupported:
    reason: str
    meta: dict = field(default_factory=dict)
    verdict: str = "UNSUPPORTED"


class Diagnostic:
    NOT_TEST_FREE = "NOT_TEST_FREE"
    GENERAL_NRA = "GENERAL_NRA"


StageHook = Callable[[str, object], None]


def _spec_prefix(S: RegisterAutomaton) -> RegisterAutomaton:
    return rename_registers(S, {r: f"s.{r}" for r in S.registers})


def build_W_ura(S: RegisterAutomaton, k: int, stage: StageHook | None = None) -> FiniteParityAutomaton:
    """Deterministic parity automaton for {action words a | Comp(a) is inside L_U(S)}."""
    if k < 1:
        raise MalformedAutomaton("bounded synthesis needs k >= 1")
    if not S.is_spec:
        raise MalformedAutomaton(f"{S.name} is not a specification automaton")
    stage = stage or (lambda *_: None)
    dual = _spec_prefix(shift_colors(compress_colors(S), flip=True))
    Lk = build_Lk(k, S.labels_in, S.labels_out)
    prod = product_nra(Lk, dual, label_map=lambda act: act.label, name=f"L{k}x~{S.name}")
    stage("product", prod)
    N = label_projection(prod, name=f"lab(L{k}x~{S.name})")
    stage("projection", N)
    D = npa_to_dpa(N, name=f"det({N.name})")
    stage("determinised", D)
    W = complement_dpa(D)
    stage("W", W)
    return W


def freshen_inputs(S: RegisterAutomaton) -> RegisterAutomaton:
    """S^0: every input test becomes 'different from all registers of S'."""
    fresh = conj(*[Neq(r) for r in S.registers])
    trans = list(dict.fromkeys(
        Transition(t.src, t.label, fresh if S.kind[t.src] is Kind.IN else t.test, t.asgn, t.dst)
        for t in S.transitions))
    return S.replace(transitions=trans, name=f"{S.name}_fresh")


def build_W_tf(S: RegisterAutomaton, k: int, stage: StageHook | None = None) -> FiniteParityAutomaton:
    """Deterministic parity automaton over fresh-input actions for the
    test-free route."""
    if k < 1:
        raise MalformedAutomaton("bounded synthesis needs k >= 1")
    if not is_test_free(S):
        raise MalformedAutomaton(f"{Diagnostic.NOT_TEST_FREE}: {S.name} is not test-free")
    stage = stage or (lambda *_: None)
    S0 = _spec_prefix(freshen_inputs(compress_colors(S)))
    Lk = build_Lk(k, S.labels_in, S.labels_out, in_tests=[frozenset()])
    prod = product_nra(Lk, S0, label_map=lambda act: act.label, name=f"L{k}x{S.name}0")
    stage("product", prod)
    N = label_projection(prod, name=f"lab({prod.name})")
    stage("projection", N)
    D = npa_to_dpa(N, name=f"det({N.name})")
    stage("W", D)
    return D


@dataclass
class MealyMachine:
    states: list
    initial: Hashable
    delta: dict  # (state, InAct) -> (OutAct, state)
    inputs: list
    outputs: list

    def is_total(self) -> bool:
        return all((q, a) in self.delta for q in self.states for a in self.inputs)

    def run(self, word) -> list:
        q = self.initial
        out = []
        for a in word:
            b, q = self.delta[(q, a)]
            out.append(b)
        return out


def realize_finite(D: FiniteParityAutomaton, A_in, A_out):
    """Solve the game where Adam picks inputs and Eve answers with outputs."""
    if not (D.is_deterministic and D.is_complete):
        raise ValueError("realize_finite needs a deterministic complete automaton")
    A_in = list(A_in)
    A_out = list(A_out)
    d0 = D.initial[0]
    verts = {}
    edges = []
    todo = [("A", d0)]
    verts[("A", d0)] = (ADAM, D.priority[d0])
    while todo:
        v = todo.pop()
        turn, d = v
        letters, nxt_turn, who = (A_in, "E", EVE) if turn == "A" else (A_out, "A", ADAM)
        for a in letters:
            t = D.det_step(d, a)
            u = (nxt_turn, t)
            if u not in verts:
                verts[u] = (who, D.priority[t])
                todo.append(u)
            edges.append((v, a, u))
    arena = ParityArena.build([(v, o, p) for v, (o, p) in verts.items()], edges, ("A", d0))
    sol = solve(arena)
    meta = {"arena_vertices": arena.n, "dpa_states": len(D.states)}
    if arena.initial not in sol.win_eve:
        return Unrealizable({"arena": arena, "solution": sol}, meta)
    vid = {nm: i for i, nm in enumerate(arena.names)}
    delta = {}
    states = [d0]
    seen = {d0}
    i = 0
    while i < len(states):
        d = states[i]
        i += 1
        for a in A_in:
            d1 = D.det_step(d, a)
            e = sol.strategy_eve[vid[("E", d1)]]
            b = arena.edges[e][1]
            d2 = D.det_step(d1, b)
            delta[(d, a)] = (b, d2)
            if d2 not in seen:
                seen.add(d2)
                states.append(d2)
    ren = {d: f"m{j}" for j, d in enumerate(states)}
    M = MealyMachine([ren[d] for d in states], ren[d0],
                     {(ren[d], a): (b, ren[d2]) for (d, a), (b, d2) in delta.items()}, A_in, A_out)
    return Realizable(M, meta)


def concretize(M: MealyMachine, k: int, test_free: bool = False, labels_in=None, labels_out=None,
               name: str = "T") -> RegisterTransducer:
    """Read a Mealy machine over actions as a k-register transducer.

    On the test-free route the only input action test is the empty set and it
    is replaced by ``top``.
    """
    regs = k_registers(k)
    rules: dict = {}
    for (q, a), (b, q2) in sorted(M.delta.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        test = TOP if test_free else alpha(a.test, regs)
        rules.setdefault((q, a.label), []).append(Rule(test, b.asgn, b.label, b.reg, q2))
    li = labels_in if labels_in is not None else {a.label for a in M.inputs}
    lo = labels_out if labels_out is not None else {b.label for b in M.outputs}
    return RegisterTransducer(M.states, M.initial, regs, rules, li, lo, name=name)


def abstract_transducer(T: RegisterTransducer) -> dict:
    """Inverse of ``concretize`` on explicit-test transducers:
    (state, InAct) -> (OutAct, state)."""
    out = {}
    for (q, label), rules in T.rules.items():
        for r in rules:
            for E in explicit_tests(r.test, T.registers):
                out[(q, InAct(label, E))] = (OutAct(r.out_label, r.asgn, r.out_reg), r.dst)
    return out


def synth_bounded(S: RegisterAutomaton, k: int, stage: StageHook | None = None, check: bool = True):
    """Dispatch on the semantics of S, solve, concretise and (by default)
    verify the transducer exactly before reporting success."""
    if k < 1:
        raise MalformedAutomaton("bounded synthesis needs k >= 1")
    t0 = time.perf_counter()
    meta: dict = {"k": k, "semantics": S.semantics.value}
    if S.semantics is Semantics.NRA:
        if not is_test_free(S):
            return Unsupported(
                f"{Diagnostic.GENERAL_NRA}: bounded synthesis for nondeterministic register automata "
                "with input tests or non-replaying outputs is undecidable (k >= 1); only test-free "
                "specifications are handled", meta)
        W = build_W_tf(S, k, stage)
        A_in = in_actions(k, S.labels_in, [frozenset()])
        test_free = True
        meta["route"] = "test-free"
    else:
        spec = S
        if S.semantics is Semantics.DRA:
            spec = complete_with_sink(S, inputs_only=False).replace(semantics=Semantics.URA)
            meta["completed_with_sink"] = spec is not S
        W = build_W_ura(spec, k, stage)
        A_in = in_actions(k, S.labels_in)
        test_free = False
        meta["route"] = "universal"
    A_out = out_actions(k, S.labels_out)
    meta["W_states"] = len(W.states)
    res = realize_finite(W, A_in, A_out)
    res.meta.update(meta)
    if isinstance(res, Unrealizable):
        res.meta["seconds"] = time.perf_counter() - t0
        return res
    M = res.transducer
    T = concretize(M, k, test_free, S.labels_in, S.labels_out, name=f"{S.name}_k{k}")
    out = Realizable(T, res.meta)
    out.meta["mealy"] = M
    if check:
        from .verify import check_realizes

        verdict = check_realizes(T, S)
        out.meta["verified"] = verdict.ok
        if not verdict.ok:
            raise AssertionError(f"synthesised transducer fails exact verification: {verdict}")
    out.meta["seconds"] = time.perf_counter() - t0
    return out


def synth_search(S: RegisterAutomaton, k_max: int, **kw):
    """Smallest k in 1..k_max for which S is realisable (or the last verdict)."""
    res = None
    for k in range(1, k_max + 1):
        res = synth_bounded(S, k, **kw)
        if not isinstance(res, Unrealizable):
            return res
    return res


# ---------------------------------------------------------------------------
# Origin functions


@dataclass(frozen=True)
class OriginFunction:
    """Output position j (1-based) -> input position, 0 meaning d0.

    ``stem[j-1]`` gives the first values; afterwards ``loop`` repeats with
    entries ``("abs", i)`` or ``("rel", delta)`` meaning ``j - delta``.
    """

    stem: tuple
    loop: tuple

    def __call__(self, j: int) -> int:
        if j < 1:
            raise ValueError("positions start at 1")
        if j <= len(self.stem):
            return self.stem[j - 1]
        kind, x = self.loop[(j - len(self.stem) - 1) % len(self.loop)]
        return x if kind == "abs" else j - x

    @property
    def max_delta(self) -> int:
        return max((x for k, x in self.loop if k == "rel"), default=0)


def origin_of_steps(stem: list[tuple[frozenset, str | None]], cycle: list[tuple[frozenset, str | None]]) -> OriginFunction:
    """Steps are (input assignment, output register) pairs of a lasso run."""
    if not cycle:
        raise ValueError("the cycle of a run must be nonempty")
    P, L = len(stem), len(cycle)
    steps = list(stem) + list(cycle) * 2
    last: dict = {}
    o = []
    for j, (asgn, reg) in enumerate(steps, start=1):
        for r in asgn:
            last[r] = j
        o.append(last.get(reg, 0) if reg is not None else 0)
    head = tuple(o[:P + L])
    loop = []
    for j in range(P + L + 1, P + 2 * L + 1):
        oj = o[j - 1]
        loop.append(("rel", j - oj) if oj > P else ("abs", oj))
    return OriginFunction(head, tuple(loop))


def origin_of_run(run, A: RegisterAutomaton | None = None) -> OriginFunction:
    """Origin function of a lasso run.

    ``run`` is either a ``simulate.TransducerTrace`` or a ``simulate.Run`` of
    the test-free automaton ``A`` (its transitions alternate input/output).
    """
    from .simulate import Run, TransducerTrace

    if isinstance(run, TransducerTrace):
        return origin_of_steps([(r.asgn, r.out_reg) for r in run.rules_stem],
                               [(r.asgn, r.out_reg) for r in run.rules_cycle])
    if not isinstance(run, Run) or A is None:
        raise TypeError("expected a transducer trace or an automaton run with its automaton")
    stem, cyc = list(run.stem), list(run.cycle)
    if len(stem) % 2:
        stem.append(cyc[0])
        cyc = cyc[1:] + cyc[:1]
    if len(cyc) % 2:
        cyc = cyc * 2

    def pairs(ids):
        out = []
        for i in range(0, len(ids), 2):
            ti, to = A.transitions[ids[i]], A.transitions[ids[i + 1]]
            (reg,) = to.test.registers() if to.test.registers() else (None,)
            out.append((ti.asgn, reg))
        return out

    return origin_of_steps(pairs(stem), pairs(cyc))


def check_origin(w: LassoDataWord, o: OriginFunction) -> bool:
    """``w |= o``: every output datum equals the input datum at ``o(j)`` (d0 at 0)."""
    from .core import D0

    inp, out = w.inp(), w.out()
    period = math.lcm(len(inp.loop), len(o.loop))
    horizon = len(inp.prefix) + len(o.stem) + o.max_delta + 2 * period + 1
    for j in range(1, horizon + 1):
        i = o(j)
        if i > j or i < 0:
            return False
        want = D0 if i == 0 else inp[i - 1][1]
        if out[j - 1][1] != want:
            return False
    return True

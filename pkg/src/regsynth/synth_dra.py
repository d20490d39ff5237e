"""Unbounded synthesis for deterministic specifications with input-driven outputs."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field

from .core import (
    D0, Kind, RegisterAutomaton, RegisterTransducer, Rule, as_explicit, is_deterministic, is_ido,
    alpha, subsets,
)
from .games import ADAM, EVE, ParityArena, Solution, solve
from .goodform import GoodFormAutomaton, to_good_form
from .lasso import LassoDataWord
from .simulate import dra_run


class Diagnostic:
    NOT_SPEC = "NOT_SPEC"
    NOT_DETERMINISTIC = "NOT_DETERMINISTIC"
    NOT_IDO = "NOT_IDO"


class PreconditionError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass
class Realizable:
    transducer: RegisterTransducer
    meta: dict = field(default_factory=dict)
    verdict: str = "REALIZABLE"


@dataclass
class Unrealizable:
    witness: object = None  # Adam's strategy (or None)
    meta: dict = field(default_factory=dict)
    verdict: str = "UNREALIZABLE"


@dataclass
class AdamStrategy:
    """Adam's memoryless winning strategy in the game of a good-form automaton."""

    arena: ParityArena
    solution: Solution
    good_form: GoodFormAutomaton


def game_of_dra(G: GoodFormAutomaton) -> ParityArena:
    """Adam owns input states, Eve output states. Edge labels are transition
    indices of ``G.automaton``; infeasible explicit tests are left out."""
    A = G.automaton
    verts = [(q, ADAM if A.kind[q] is Kind.IN else EVE, A.priority[q]) for q in A.states]
    edges = [(t.src, i, t.dst) for i, t in enumerate(A.transitions) if G.is_feasible(t)]
    return ParityArena.build(verts, edges, A.initial)


def check_preconditions(A: RegisterAutomaton) -> None:
    if not A.is_spec:
        raise PreconditionError(Diagnostic.NOT_SPEC, f"{A.name} does not alternate input/output states")
    if not is_deterministic(A):
        raise PreconditionError(Diagnostic.NOT_DETERMINISTIC, f"{A.name} is not deterministic")
    if not is_ido(A):
        raise PreconditionError(Diagnostic.NOT_IDO, f"{A.name} has an output test that is not a single r= atom")


def synthesize_dra_ido(A: RegisterAutomaton):
    check_preconditions(A)
    G = to_good_form(A)
    arena = game_of_dra(G)
    sol = solve(arena)
    meta = {"good_form_states": len(G.automaton.states), "arena_vertices": arena.n}
    if arena.initial not in sol.win_eve:
        return Unrealizable(AdamStrategy(arena, sol, G), meta)
    T = _extract(G, arena, sol)
    meta["registers"] = len(T.registers)
    return Realizable(T, meta)


def _extract(G: GoodFormAutomaton, arena: ParityArena, sol: Solution) -> RegisterTransducer:
    A = G.automaton
    regs = A.registers
    vid = {nm: i for i, nm in enumerate(arena.names)}
    trans = A.transitions
    out_labels = sorted(A.labels_out, key=repr)
    filler_reg = regs[0] if regs else None
    rules: dict = {}
    todo = [A.initial]
    states = {A.initial}
    while todo:
        p = todo.pop()
        for label in sorted(A.labels_in, key=repr):
            row = []
            for ti in A.by_label.get((p, label), ()):
                t = trans[ti]
                E = as_explicit(t.test, regs)
                if not G.is_feasible(t):
                    continue
                e = sol.strategy_eve[vid[t.dst]]
                to = trans[arena.edges[e][1]]
                F = as_explicit(to.test, regs)
                assert F, "input-driven outputs always test a nonempty class"
                row.append(Rule(alpha(E, regs), t.asgn, to.label, min(F), to.dst))
                if to.dst not in states:
                    states.add(to.dst)
                    todo.append(to.dst)
            covered = {as_explicit(r.test, regs) for r in row}
            for E in subsets(regs):
                if E not in covered:  # unreachable data behaviour
                    row.append(Rule(alpha(E, regs), frozenset(), out_labels[0], filler_reg, p))
            rules[(p, label)] = row
    order = sorted(states, key=lambda s: (s != A.initial, str(s)))
    rename = {s: f"t{i}" for i, s in enumerate(order)}
    rules = {(rename[p], l): [Rule(r.test, r.asgn, r.out_label, r.out_reg, rename[r.dst]) for r in rs]
             for (p, l), rs in rules.items()}
    return RegisterTransducer([rename[s] for s in order], rename[A.initial], regs, rules,
                              A.labels_in, A.labels_out, name=f"{G.source.name}_impl")


def synthesize_dra_ido_bounded(A: RegisterAutomaton, k: int):
    if k < len(A.registers):
        warnings.warn("k is below the register count of the specification; using the bounded pipeline",
                      stacklevel=2)
        from .synth_bounded import synth_bounded

        return synth_bounded(A, k)
    res = synthesize_dra_ido(A)
    res.meta["k"] = k
    return res


# ---------------------------------------------------------------------------
# Replaying Adam's strategy


def concrete_play(strategy: AdamStrategy, choose_eve) -> LassoDataWord:
    """Play Adam's strategy against a memoryless Eve choice and turn the play
    into a concrete relational lasso over data ``0..|R|``."""
    G = strategy.good_form
    A = G.automaton
    arena = strategy.arena
    regs = A.registers
    pool = range(len(regs) + 1)
    adam = strategy.solution.strategy_adam

    def choose_adam(v):
        if v in adam:
            return adam[v]
        return arena.out_edges(v)[0]

    v = arena.initial
    vals = tuple(D0 for _ in regs)
    seen: dict = {}
    letters = []
    while (v, vals) not in seen:
        seen[(v, vals)] = len(letters)
        e = choose_eve(v) if arena.owner[v] == EVE else choose_adam(v)
        _, ti, dst = arena.edges[e]
        if isinstance(ti, tuple):
            # dead end: the specification has no move here, so any letter is rejected
            lin = sorted(A.labels_in, key=repr)[0]
            lout = sorted(A.labels_out, key=repr)[0]
            if len(letters) % 2:
                letters.append((lout, D0))
            return LassoDataWord(tuple(letters), ((lin, D0), (lout, D0)))
        t = A.transitions[ti]
        E = as_explicit(t.test, regs)
        if E:
            d = vals[A.reg_index[min(E)]]
        else:
            d = min(x for x in pool if x not in vals)
        letters.append((t.label, d))
        vals = tuple(d if r in t.asgn else x for r, x in zip(regs, vals))
        v = dst
    k = seen[(v, vals)]
    w = LassoDataWord(tuple(letters[:k]), tuple(letters[k:]))
    return w.rotate() if k % 2 else w


def random_eve(arena: ParityArena, rng: random.Random):
    choice = {v: rng.choice(arena.out_edges(v)) for v in range(arena.n) if arena.owner[v] == EVE}
    return choice.__getitem__


def defeats(strategy: AdamStrategy, spec: RegisterAutomaton, n: int, seed: int = 0) -> tuple[int, list]:
    """Replay Adam against ``n`` random memoryless Eve behaviours. Returns the
    number of plays rejected by ``spec`` and the words that were accepted."""
    rng = random.Random(seed)
    beaten, escaped = 0, []
    for _ in range(n):
        w = concrete_play(strategy, random_eve(strategy.arena, rng))
        if w.is_relational():
            ok, _ = dra_run(spec, w)
        else:
            ok = False
        if ok:
            escaped.append(w)
        else:
            beaten += 1
    return beaten, escaped


"""Independent checks of synthesised transducers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .abstraction import label_projection, product_nra
from .core import (
    D0, RegisterAutomaton, RegisterTransducer, Semantics, complete_with_sink, is_test_free,
    rename_registers, shift_colors, transducer_as_dra,
)
from .determinize import npa_to_dpa
from .fpa import FiniteParityAutomaton
from .graphs import accepting_lasso, explore
from .lasso import Lasso, LassoDataWord
from .simulate import dra_run, membership, nra_membership, transducer_run, ura_membership


@dataclass
class Emptiness:
    empty: bool
    witness: LassoDataWord | None = None

    @property
    def verdict(self) -> str:
        return "EMPTY" if self.empty else "NONEMPTY"


def nra_emptiness(A: RegisterAutomaton, pool_size: int | None = None) -> Emptiness:
    """Search the configuration graph with data from ``0..|R|`` (or a larger
    pool). Fresh reads always take the least value not held in a register."""
    comp = A.compiled
    n = len(A.registers)
    pool = range(pool_size if pool_size is not None else n + 1)

    def succ(node):
        q, vals = node
        held = set(vals)
        fresh = next((x for x in pool if x not in held), None)
        choices = sorted(held) + ([fresh] if fresh is not None else [])
        for label in sorted(A.labels_for(q), key=repr):
            rows = comp.get((q, label), ())
            if not rows:
                continue
            for d in choices:
                m = 0
                for i, v in enumerate(vals):
                    if v == d:
                        m |= 1 << i
                for _, masks, apos, dst in rows:
                    if m in masks:
                        nv = list(vals)
                        for p in apos:
                            nv[p] = d
                        yield (label, d), (dst, tuple(nv))

    init = (A.initial, tuple(D0 for _ in range(n)))
    g = explore([init], succ)
    path = accepting_lasso(g, lambda v: A.priority[g.nodes[v][0]])
    if path is None:
        return Emptiness(True)
    w = LassoDataWord(tuple(l for l, _ in path.stem), tuple(l for l, _ in path.cycle))
    if A.is_spec and len(w.prefix) % 2:
        w = w.rotate()
    return Emptiness(False, w)


@dataclass
class Verdict:
    ok: bool
    counterexample: LassoDataWord | None = None
    meta: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "OK" if self.ok else "FAIL"

    def __str__(self):
        if self.ok:
            return "OK"
        return f"FAIL {self.counterexample}"


def _check_alphabets(T: RegisterTransducer, S: RegisterAutomaton):
    if not (T.labels_in <= S.labels_in and T.labels_out <= S.labels_out):
        raise ValueError(f"alphabets of {T.name} and {S.name} do not match")


def check_realizes_ura(T: RegisterTransducer, S: RegisterAutomaton) -> Verdict:
    """L(T) inside L_U(S), decided as emptiness of L(T) x dual(S)."""
    _check_alphabets(T, S)
    D = transducer_as_dra(T)
    D = rename_registers(D, {r: f"t.{r}" for r in D.registers})
    dual = rename_registers(shift_colors(S, flip=True), {r: f"s.{r}" for r in S.registers})
    prod = product_nra(D, dual, name=f"{T.name}x~{S.name}")
    em = nra_emptiness(prod)
    if em.empty:
        return Verdict(True, meta={"product_states": len(prod.states)})
    w = em.witness
    replay = {
        "in_L(T)": transducer_run(T, w.inp()).same_word(w),
        "in_S": ura_membership(S, w),
    }
    return Verdict(False, w, meta={"product_states": len(prod.states), "replay": replay})


def check_realizes_dra(T: RegisterTransducer, S: RegisterAutomaton) -> Verdict:
    """Complete S with a rejecting sink, then check it as a universal automaton
    (deterministic runs are the only runs)."""
    full = complete_with_sink(S, inputs_only=False)
    v = check_realizes_ura(T, full.replace(semantics=Semantics.URA))
    v.meta["completed_with_sink"] = full is not S
    if not v.ok:
        v.meta["replay"]["in_S"] = dra_run(S, v.counterexample)[0]
    return v


def check_realizes_tf(T: RegisterTransducer, S: RegisterAutomaton) -> Verdict:
    """L(T) inside L_N(S) for a test-free S and a test-free T.

    Both machines ignore input data, and equalities between data can only
    help S (its output tests are positive). So it suffices that for every
    input label word, the output of T on pairwise fresh data is accepted,
    which is an inclusion of finite-alphabet languages.
    """
    from .synth_bounded import freshen_inputs

    _check_alphabets(T, S)
    if not T.is_test_free():
        raise ValueError(f"{T.name} has input tests; only test-free transducers are handled here")
    if not is_test_free(S):
        raise ValueError(f"{S.name} is not test-free")
    DT = transducer_as_dra(T)
    DT = freshen_inputs(rename_registers(DT, {r: f"t.{r}" for r in DT.registers}))
    S0 = rename_registers(freshen_inputs(S), {r: f"s.{r}" for r in S.registers})
    # DT x S0 accepts the fresh-data words of T that S accepts
    both = label_projection(product_nra(DT, S0, name=f"{T.name}x{S.name}"))
    mine = label_projection(DT)
    co = npa_to_dpa(both).complement()
    bad = _intersect(mine, co)
    lasso = bad.accepted_lasso()
    if lasso is None:
        return Verdict(True)
    w = _fresh_witness(T, lasso)
    return Verdict(False, w, meta={"labels": lasso, "replay": {"in_S": nra_membership(S, w)[0]}})


def _intersect(N: FiniteParityAutomaton, D: FiniteParityAutomaton) -> FiniteParityAutomaton:
    """N has all priorities 0 (trivial acceptance); the product keeps D's."""
    assert all(p == 0 for p in N.priority.values())

    def succ(s):
        a, b = s
        for sym, ts in N.delta[a].items():
            (b2,) = D.delta[b][sym]
            for t in ts:
                yield sym, (t, b2)

    init = [(a, D.initial[0]) for a in N.initial]
    g = explore(init, succ)
    delta = {}
    for v, row in enumerate(g.succ):
        d = delta.setdefault(g.nodes[v], {})
        for sym, u in row:
            d.setdefault(sym, set()).add(g.nodes[u])
    return FiniteParityAutomaton(g.nodes, init, N.alphabet, delta, {s: D.priority[s[1]] for s in g.nodes})


def _fresh_witness(T: RegisterTransducer, labels: Lasso) -> LassoDataWord:
    """A run of T on the input labels of ``labels`` with fresh data.

    The loop is repeated a few times before its data are recycled, so the
    witness is lasso-shaped; whether S rejects it is recorded by the caller.
    """
    if len(labels.prefix) % 2:
        labels = labels.rotate()
    loop = labels.loop if len(labels.loop) % 2 == 0 else labels.loop * 2
    pre_in, loop_in = labels.prefix[0::2], loop[0::2]
    reps = len(T.registers) + 2
    pre = tuple((l, i + 1) for i, l in enumerate(pre_in))
    cyc = tuple((loop_in[i % len(loop_in)], len(pre) + 1 + i) for i in range(len(loop_in) * reps))
    return transducer_run(T, LassoDataWord(pre, cyc))


def check_realizes(T: RegisterTransducer, S: RegisterAutomaton) -> Verdict:
    """Exact check dispatched on the semantics of S."""
    if S.semantics is Semantics.URA:
        return check_realizes_ura(T, S)
    if S.semantics is Semantics.DRA:
        return check_realizes_dra(T, S)
    if is_test_free(S) and T.is_test_free():
        return check_realizes_tf(T, S)
    raise ValueError("inclusion in a general nondeterministic specification is not decidable here")


# ---------------------------------------------------------------------------
# Randomised checking


@dataclass
class Report:
    samples: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def random_input(rng: random.Random, labels, pool: int, max_prefix: int = 4, max_loop: int = 4) -> LassoDataWord:
    labels = sorted(labels, key=repr)
    pre = tuple((rng.choice(labels), rng.randrange(pool)) for _ in range(rng.randint(0, max_prefix)))
    loop = tuple((rng.choice(labels), rng.randrange(pool)) for _ in range(rng.randint(1, max_loop)))
    return LassoDataWord(pre, loop)


def _fails(T, S, inp) -> bool:
    return not membership(S, transducer_run(T, inp))


def shrink(T: RegisterTransducer, S: RegisterAutomaton, inp: LassoDataWord) -> LassoDataWord:
    """Greedy shrinking: drop letters, then merge data values, while the
    input still produces a violation."""
    changed = True
    while changed:
        changed = False
        candidates = []
        for i in range(len(inp.prefix)):
            candidates.append(LassoDataWord(inp.prefix[:i] + inp.prefix[i + 1:], inp.loop))
        if len(inp.loop) > 1:
            for i in range(len(inp.loop)):
                candidates.append(LassoDataWord(inp.prefix, inp.loop[:i] + inp.loop[i + 1:]))
        data = sorted(inp.data())
        for a in data:
            for b in data:
                if b < a:
                    candidates.append(inp.rename(lambda d, a=a, b=b: b if d == a else d))
        for c in candidates:
            if _fails(T, S, c):
                inp = c
                changed = True
                break
    return inp


def random_check(T: RegisterTransducer, S: RegisterAutomaton, n: int, seed: int = 0,
                 shrink_failures: bool = True) -> Report:
    rng = random.Random(seed)
    pool = len(T.registers) + len(S.registers) + 2
    rep = Report(n)
    for _ in range(n):
        inp = random_input(rng, T.labels_in, pool)
        if _fails(T, S, inp):
            small = shrink(T, S, inp) if shrink_failures else inp
            rep.failures.append((small, transducer_run(T, small)))
    return rep


__all__ = [
    "Emptiness", "Report", "Verdict", "check_realizes", "check_realizes_dra", "check_realizes_tf",
    "check_realizes_ura", "nra_emptiness", "random_check", "shrink",
]

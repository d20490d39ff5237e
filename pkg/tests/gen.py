"""Random automata used by property tests and the acceptance suite."""

from __future__ import annotations

import random

from regsynth.core import (
    TOP, Eq, Kind, Neq, RegisterAutomaton, Semantics, Transition, alpha, subsets,
)


def random_dra_ido(rng: random.Random, max_pairs: int = 2, registers=(1, 2)) -> RegisterAutomaton:
    """Deterministic specification with single-atom output tests.

    At most ``2 * max_pairs`` states, at most two distinct priorities.
    """
    r = rng.choice(registers)
    regs = [f"x{i}" for i in range(r)]
    pairs = rng.randint(1, max_pairs)
    ins = [f"i{j}" for j in range(pairs)]
    outs = [f"o{j}" for j in range(pairs)]
    prios = rng.sample([0, 1, 2], 2)
    li = ["a", "b"][: rng.randint(1, 2)]
    lo = ["c", "d"][: rng.randint(1, 2)]
    trans = []
    for q in ins:
        for label in li:
            for E in subsets(regs):
                if rng.random() < 0.85:
                    asgn = frozenset(x for x in regs if rng.random() < 0.5)
                    trans.append(Transition(q, label, alpha(E, regs), asgn, rng.choice(outs)))
    for q in outs:
        for label in lo:
            if rng.random() < 0.8:
                trans.append(Transition(q, label, Eq(rng.choice(regs)), frozenset(), rng.choice(ins)))
    states = ins + outs
    kind = {**{q: Kind.IN for q in ins}, **{q: Kind.OUT for q in outs}}
    return RegisterAutomaton(states, "i0", regs, trans, {q: rng.choice(prios) for q in states}, kind,
                             li, lo, Semantics.DRA, name=f"rnd{rng.randrange(10**6)}")


def random_nra(rng: random.Random, max_states: int = 3, max_regs: int = 2, labels=("a", "b"),
               spec: bool = False) -> RegisterAutomaton:
    """Small nondeterministic automaton with arbitrary tests (not a specification
    unless ``spec``, in which case states alternate in/out)."""
    n = rng.randint(1, max_states) if not spec else 2 * rng.randint(1, max(1, max_states // 2))
    regs = [f"x{i}" for i in range(rng.randint(0, max_regs))]
    states = [f"q{i}" for i in range(n)]
    atoms = [TOP] + [Eq(x) for x in regs] + [Neq(x) for x in regs]
    if spec:
        kind = {q: (Kind.IN if i % 2 == 0 else Kind.OUT) for i, q in enumerate(states)}
    else:
        kind = {q: Kind.PLAIN for q in states}
    trans = []
    for q in states:
        for _ in range(rng.randint(1, 3)):
            if spec:
                i = states.index(q)
                dst = rng.choice([s for j, s in enumerate(states) if j % 2 != i % 2])
            else:
                dst = rng.choice(states)
            asgn = frozenset(x for x in regs if rng.random() < 0.4)
            trans.append(Transition(q, rng.choice(labels), rng.choice(atoms), asgn, dst))
    prio = {q: rng.randint(0, 3) for q in states}
    return RegisterAutomaton(states, states[0], regs, list(dict.fromkeys(trans)), prio, kind,
                             set(labels), set(labels) if spec else set(), Semantics.NRA, name="rndnra")


def random_relational(rng: random.Random, labels_in, labels_out, pool: int, max_pre: int = 2,
                      max_loop: int = 2):
    """Relational lasso with ``max_pre`` / ``max_loop`` input-output pairs at most."""
    from regsynth.lasso import LassoDataWord

    li, lo = sorted(labels_in), sorted(labels_out)

    def pairs(n):
        out = []
        for _ in range(n):
            out += [(rng.choice(li), rng.randrange(pool)), (rng.choice(lo), rng.randrange(pool))]
        return tuple(out)

    return LassoDataWord(pairs(rng.randint(0, max_pre)), pairs(rng.randint(1, max_loop)))


def random_word(rng: random.Random, labels, pool: int, max_pre: int = 3, max_loop: int = 3):
    from regsynth.lasso import LassoDataWord

    labels = sorted(labels)
    pre = tuple((rng.choice(labels), rng.randrange(pool)) for _ in range(rng.randint(0, max_pre)))
    loop = tuple((rng.choice(labels), rng.randrange(pool)) for _ in range(rng.randint(1, max_loop)))
    return LassoDataWord(pre, loop)


def random_spec(rng: random.Random, semantics=None, max_pairs: int = 2, max_regs: int = 2):
    """Alternating automaton with arbitrary tests and assignments."""
    r = rng.randint(0, max_regs)
    regs = [f"x{i}" for i in range(r)]
    pairs = rng.randint(1, max_pairs)
    ins = [f"i{j}" for j in range(pairs)]
    outs = [f"o{j}" for j in range(pairs)]
    atoms = [TOP] + [Eq(x) for x in regs] + [Neq(x) for x in regs]
    trans = []
    for q, targets, labels in [(q, outs, ("a", "b")) for q in ins] + [(q, ins, ("c",)) for q in outs]:
        for _ in range(rng.randint(1, 3)):
            t = rng.choice(atoms)
            if len(regs) > 1 and rng.random() < 0.3:
                t = t & rng.choice(atoms)
            asgn = frozenset(x for x in regs if rng.random() < 0.4)
            trans.append(Transition(q, rng.choice(labels), t, asgn, rng.choice(targets)))
    kind = {**{q: Kind.IN for q in ins}, **{q: Kind.OUT for q in outs}}
    sem = semantics or rng.choice([Semantics.NRA, Semantics.URA])
    return RegisterAutomaton(ins + outs, "i0", regs, list(dict.fromkeys(trans)),
                             {q: rng.randint(0, 3) for q in ins + outs}, kind, {"a", "b"}, {"c"}, sem,
                             name="rndspec")


def random_test_free(rng: random.Random, max_pairs: int = 2, max_regs: int = 2):
    r = rng.randint(1, max_regs)
    regs = [f"x{i}" for i in range(r)]
    pairs = rng.randint(1, max_pairs)
    ins = [f"i{j}" for j in range(pairs)]
    outs = [f"o{j}" for j in range(pairs)]
    trans = []
    for q in ins:
        for _ in range(rng.randint(1, 2)):
            trans.append(Transition(q, "a", TOP, frozenset(x for x in regs if rng.random() < 0.5),
                                    rng.choice(outs)))
    for q in outs:
        for _ in range(rng.randint(1, 2)):
            trans.append(Transition(q, "c", Eq(rng.choice(regs)), frozenset(), rng.choice(ins)))
    kind = {**{q: Kind.IN for q in ins}, **{q: Kind.OUT for q in outs}}
    return RegisterAutomaton(ins + outs, "i0", regs, list(dict.fromkeys(trans)),
                             {q: rng.randint(0, 2) for q in ins + outs}, kind, {"a"}, {"c"}, Semantics.NRA,
                             name="rndtf")


def label_lassos(labels, max_len: int):
    """Every lasso over ``labels`` with ``len(prefix) + len(loop) <= max_len``."""
    import itertools

    from regsynth.lasso import Lasso

    for n in range(1, max_len + 1):
        for word in itertools.product(sorted(labels), repeat=n):
            for p in range(n):
                yield Lasso(word[:p], word[p:])


def data_choices(used, d0: int = 0):
    """Data values worth trying next, up to renaming: d0, each value seen so
    far, and one fresh value."""
    seen = sorted(set(used) | {d0})
    return seen + [max(seen) + 1]


def random_npa(rng: random.Random, max_states: int = 4, alphabet=("a", "b"), max_prio: int = 3):
    from regsynth.fpa import from_pairs

    n = rng.randint(1, max_states)
    edges = [(q, a, rng.randrange(n)) for q in range(n) for a in alphabet for _ in range(rng.randint(0, 2))]
    inits = sorted(set(rng.sample(range(n), rng.randint(1, min(2, n)))))
    return from_pairs(range(n), inits, alphabet, edges, {q: rng.randint(0, max_prio) for q in range(n)})


def random_lasso(rng: random.Random, alphabet, max_pre: int = 4, max_loop: int = 4):
    from regsynth.lasso import Lasso

    alphabet = sorted(alphabet, key=repr)
    return Lasso(tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_pre))),
                 tuple(rng.choice(alphabet) for _ in range(rng.randint(1, max_loop))))


def random_tf_run(rng: random.Random, A):
    """Random lasso-shaped transition sequence of a test-free automaton:
    (stem ids, cycle ids), both of even length and closing on an input state."""
    q, ids, seen = A.initial, [], {}
    while True:
        if len(ids) % 2 == 0:
            if q in seen:
                k = seen[q]
                return ids[:k], ids[k:]
            seen[q] = len(ids)
        i = rng.choice(A.outgoing[q])
        ids.append(i)
        q = A.transitions[i].dst


def tf_steps(A, ids):
    """(input assignment, output register) per input/output pair."""
    out = []
    for i in range(0, len(ids), 2):
        ti, to = A.transitions[ids[i]], A.transitions[ids[i + 1]]
        regs = sorted(to.test.registers())
        out.append((ti.asgn, regs[0] if regs else None))
    return out


def tf_word(A, stem, cycle, data):
    """The data word produced by following the transitions with input data
    ``data(pair_index)``; folded into a lasso once (position, valuation) repeats.
    ``data`` must be periodic on the cycle for the fold to terminate."""
    from regsynth.core import D0
    from regsynth.lasso import LassoDataWord

    steps_s, steps_c = tf_steps(A, stem), tf_steps(A, cycle)
    labels_s = [(A.transitions[stem[i]].label, A.transitions[stem[i + 1]].label) for i in range(0, len(stem), 2)]
    labels_c = [(A.transitions[cycle[i]].label, A.transitions[cycle[i + 1]].label) for i in range(0, len(cycle), 2)]
    regs = A.registers
    tau = {r: D0 for r in regs}
    letters, seen, j = [], {}, 0
    while True:
        if j >= len(steps_s):
            key = ((j - len(steps_s)) % len(steps_c), tuple(tau[r] for r in regs))
            if key in seen:
                k = seen[key]
                return LassoDataWord(tuple(x for p in letters[:k] for x in p),
                                     tuple(x for p in letters[k:] for x in p))
            seen[key] = len(letters)
        asgn, reg = steps_s[j] if j < len(steps_s) else steps_c[(j - len(steps_s)) % len(steps_c)]
        li, lo = labels_s[j] if j < len(steps_s) else labels_c[(j - len(steps_s)) % len(steps_c)]
        d = data(j)
        for r in asgn:
            tau[r] = d
        letters.append(((li, d), (lo, tau[reg] if reg else D0)))
        j += 1

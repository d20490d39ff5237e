"""Nondeterministic parity to deterministic parity automata.

Route: parity -> Buchi (guess the even priority that wins and check it is
never exceeded), then Piterman's compact Safra trees, whose transition
priorities are finally moved onto states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

from .fpa import FiniteParityAutomaton, _live_states, bisimulation_quotient
from .graphs import explore

SINK = ("empty",)


@dataclass
class Buchi:
    states: list
    initial: list
    accepting: frozenset
    delta: dict  # state index -> symbol -> frozenset of indices
    alphabet: frozenset


def npa_to_nba(N: FiniteParityAutomaton) -> Buchi:
    """States ``(q, None)`` (threshold not chosen yet) and ``(q, p)`` for even
    ``p >= c(q)``; accepting when ``c(q) == p``."""
    N = N.trim()
    evens = sorted({p for p in N.priority.values() if p % 2 == 0})
    # when the only even priority is also the largest one, no waiting phase is needed
    simple = len(evens) == 1 and evens[0] == max(N.priority.values())

    def lift(q, mode):
        c = N.priority[q]
        if mode is None:
            out = [(q, None)] if not simple else []
            out += [(q, p) for p in evens if p >= c]
            return out
        return [(q, mode)] if c <= mode else []

    init = [x for q in N.initial for x in lift(q, None)]

    def succ(s):
        q, mode = s
        for a, ts in N.delta[q].items():
            for t in ts:
                for x in lift(t, mode):
                    yield a, x

    g = explore(init, succ)
    idx = {s: i for i, s in enumerate(g.nodes)}
    delta: dict = {}
    for v, row in enumerate(g.succ):
        d = delta.setdefault(v, {})
        for a, u in row:
            d.setdefault(a, set()).add(u)
    acc = frozenset(i for i, (q, m) in enumerate(g.nodes) if m is not None and N.priority[q] == m)
    B = Buchi(list(g.nodes), [idx[s] for s in dict.fromkeys(init)],
              acc, {v: {a: frozenset(ts) for a, ts in d.items()} for v, d in delta.items()}, N.alphabet)
    return _trim_buchi(B)


def _trim_buchi(B: Buchi) -> Buchi:
    F = FiniteParityAutomaton(range(len(B.states)), B.initial, B.alphabet, B.delta,
                              {i: (2 if i in B.accepting else 1) for i in range(len(B.states))})
    live = _live_states(F.reachable())
    keep = sorted(live)
    re = {old: new for new, old in enumerate(keep)}
    delta = {}
    for old in keep:
        row = {}
        for a, ts in B.delta.get(old, {}).items():
            nts = frozenset(re[t] for t in ts if t in re)
            if nts:
                row[a] = nts
        delta[re[old]] = row
    return Buchi([B.states[o] for o in keep], [re[i] for i in B.initial if i in re],
                 frozenset(re[i] for i in B.accepting if i in re), delta, B.alphabet)


# A tree node is (name, label, marked, children); trees are nested tuples.
# Marks are reset by every step and only feed the priority, which the DPA
# state already records, so frozen trees keep them cleared.


def _freeze(node) -> tuple:
    name, label, _, ch = node
    return (name, frozenset(label), False, tuple(_freeze(c) for c in ch))


class _Safra:
    def __init__(self, B: Buchi):
        self.B = B
        self.F = B.accepting
        self.n = max(1, len(B.states))
        self.default = 4 * self.n + 3  # odd and larger than any event priority
        self._post: dict = {}

    def post(self, label: frozenset, a) -> frozenset:
        key = (label, a)
        got = self._post.get(key)
        if got is None:
            out = set()
            delta = self.B.delta
            for q in label:
                ts = delta[q].get(a)
                if ts:
                    out |= ts
            got = self._post[key] = frozenset(out)
        return got

    def initial(self):
        if not self.B.initial:
            return SINK
        return (1, frozenset(self.B.initial), False, ())

    def step(self, tree, a) -> tuple[Hashable, int]:
        """Successor tree and its min-parity priority."""
        if tree == SINK:
            return SINK, self.default
        # 1. unmark and move
        def move(node):
            name, label, _, ch = node
            return [name, self.post(label, a), False, [move(c) for c in ch]]

        root = move(tree)
        nodes = []

        def collect(node):
            nodes.append(node)
            for c in node[3]:
                collect(c)

        collect(root)
        nxt = max(nd[0] for nd in nodes) + 1
        # 2. spawn children for accepting states
        for nd in nodes:
            acc = nd[1] & self.F
            if acc:
                nd[3].append([nxt, acc, False, []])
                nxt += 1
        # 3. horizontal merge: older siblings keep shared states
        def strip(node, gone):
            if gone:
                node[1] = node[1] - gone
                for c in node[3]:
                    strip(c, gone)

        def hmerge(node):
            used: frozenset = frozenset()
            for c in node[3]:
                strip(c, used)
                used = used | c[1]
                hmerge(c)

        hmerge(root)
        removed = []

        # 4. drop empty nodes
        def prune(node):
            keep = []
            for c in node[3]:
                if c[1]:
                    prune(c)
                    keep.append(c)
                else:
                    _names(c, removed)
            node[3] = keep

        if not root[1]:
            return SINK, 2 * root[0] - 1
        prune(root)
        marked = []

        # 5. vertical merge
        def vmerge(node):
            if node[3]:
                union = frozenset().union(*(c[1] for c in node[3]))
                if union == node[1]:
                    for c in node[3]:
                        _names(c, removed)
                    node[3] = []
                    node[2] = True
                    marked.append(node[0])
                    return
                for c in node[3]:
                    vmerge(c)

        vmerge(root)
        f = min(marked) if marked else None
        e = min(removed) if removed else None
        if f is not None and (e is None or f < e):
            prio = 2 * f
        elif e is not None:
            prio = 2 * e - 1
        else:
            prio = self.default
        # 7. compact names, preserving order
        names = []
        _names(root, names)
        rank = {nm: i + 1 for i, nm in enumerate(sorted(names))}

        def rename(node):
            node[0] = rank[node[0]]
            for c in node[3]:
                rename(c)

        rename(root)
        return _freeze(root), prio


def _names(node, acc: list) -> None:
    acc.append(node[0])
    for c in node[3]:
        _names(c, acc)


def nba_to_dpa(B: Buchi, name: str = "D") -> FiniteParityAutomaton:
    S = _Safra(B)
    alphabet = sorted(B.alphabet, key=repr)
    big = S.default
    t0 = S.initial()
    # state = (tree, max-even priority of the entering transition)
    init = (t0, 0)
    cache: dict = {}

    def succ(s):
        tree, _ = s
        for a in alphabet:
            key = (tree, a)
            got = cache.get(key)
            if got is None:
                t2, p = S.step(tree, a)
                got = cache[key] = (t2, big + 1 - p)
            yield a, got

    g = explore([init], succ)
    delta = {g.nodes[v]: {a: {g.nodes[u]} for a, u in row} for v, row in enumerate(g.succ)}
    prio = {s: s[1] for s in g.nodes}
    D = FiniteParityAutomaton(g.nodes, [init], B.alphabet, delta, prio, name)
    return compress_priorities(D.renumbered())


def compress_priorities(D: FiniteParityAutomaton) -> FiniteParityAutomaton:
    """Map priorities onto a gap-free range keeping order and parity."""
    used = sorted(set(D.priority.values()))
    remap = {}
    cur = None
    for p in used:
        if cur is None:
            cur = p % 2
        elif cur % 2 != p % 2:
            cur += 1
        remap[p] = cur
    return FiniteParityAutomaton(D.states, D.initial, D.alphabet, D.delta,
                                 {q: remap[p] for q, p in D.priority.items()}, D.name)


def rejecting_sink(alphabet, name: str = "D") -> FiniteParityAutomaton:
    return FiniteParityAutomaton([0], [0], alphabet, {0: {a: {0} for a in alphabet}}, {0: 1}, name)


def npa_to_dpa(N: FiniteParityAutomaton, name: str | None = None) -> FiniteParityAutomaton:
    """Deterministic complete parity automaton with the same language."""
    name = name or f"det({N.name})"
    B = npa_to_nba(bisimulation_quotient(N.trim()))
    if not B.initial:
        return rejecting_sink(N.alphabet, name)
    return bisimulation_quotient(nba_to_dpa(B, name)).renumbered()

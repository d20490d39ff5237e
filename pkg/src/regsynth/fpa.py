"""Register-free parity automata over finite alphabets (max-even acceptance)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping

from .graphs import accepting_lasso, explore
from .lasso import Lasso


@dataclass(frozen=True, eq=False)
class FiniteParityAutomaton:
    states: tuple
    initial: tuple  # one or more initial states
    alphabet: frozenset
    delta: Mapping[Hashable, Mapping[Hashable, frozenset]]
    priority: Mapping[Hashable, int]
    name: str = "P"

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "initial", tuple(self.initial))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        d = {q: {a: frozenset(ts) for a, ts in row.items() if ts} for q, row in self.delta.items()}
        for q in self.states:
            d.setdefault(q, {})
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "priority", dict(self.priority))
        known = set(self.states)
        if not set(self.initial) <= known:
            raise ValueError("initial states must be states")
        for q, row in d.items():
            if q not in known:
                raise ValueError(f"transitions from unknown state {q!r}")
            for a, ts in row.items():
                if a not in self.alphabet:
                    raise ValueError(f"unknown symbol {a!r}")
                if not ts <= known:
                    raise ValueError("transition to an unknown state")
        for q in self.states:
            if q not in self.priority:
                raise ValueError(f"state {q!r} has no priority")

    @cached_property
    def is_deterministic(self) -> bool:
        """At most one initial state and one successor per symbol."""
        return len(self.initial) == 1 and all(len(ts) == 1 for row in self.delta.values() for ts in row.values())

    @cached_property
    def is_complete(self) -> bool:
        return bool(self.initial) and all(len(self.delta[q]) == len(self.alphabet) for q in self.states)

    def step(self, q, a) -> frozenset:
        return self.delta[q].get(a, frozenset())

    def det_step(self, q, a):
        (t,) = self.delta[q][a]
        return t

    @property
    def n_transitions(self) -> int:
        return sum(len(ts) for row in self.delta.values() for ts in row.values())

    def accepts(self, w: Lasso) -> bool:
        """Lasso membership: some run with even maximal priority on its loop."""
        for a in set(w.prefix) | set(w.loop):
            if a not in self.alphabet:
                raise ValueError(f"symbol {a!r} not in alphabet")
        if self.is_deterministic:
            return self._det_accepts(w)

        def succ(node):
            pos, q = node
            nxt = w.next_pos(pos)
            for t in self.delta[q].get(w[pos], ()):
                yield None, (nxt, t)

        g = explore([(0, q) for q in self.initial], succ)
        return accepting_lasso(g, lambda v: self.priority[g.nodes[v][1]]) is not None

    def _det_accepts(self, w: Lasso) -> bool:
        q = self.initial[0]
        pos = 0
        seen: dict = {}
        trace = []
        while True:
            key = (pos, q)
            if key in seen:
                return max(trace[seen[key]:]) % 2 == 0
            seen[key] = len(trace)
            trace.append(self.priority[q])
            ts = self.delta[q].get(w[pos])
            if not ts:
                return False
            (q,) = ts
            pos = w.next_pos(pos)

    def is_empty(self) -> bool:
        g = explore(self.initial, lambda q: ((a, t) for a, ts in self.delta[q].items() for t in ts))
        return accepting_lasso(g, lambda v: self.priority[g.nodes[v]]) is None

    def accepted_lasso(self) -> Lasso | None:
        g = explore(self.initial, lambda q: ((a, t) for a, ts in self.delta[q].items() for t in ts))
        path = accepting_lasso(g, lambda v: self.priority[g.nodes[v]])
        if path is None:
            return None
        return Lasso(tuple(a for a, _ in path.stem), tuple(a for a, _ in path.cycle))

    def reachable(self) -> "FiniteParityAutomaton":
        g = explore(self.initial, lambda q: ((None, t) for ts in self.delta[q].values() for t in ts))
        keep = set(g.nodes)
        return FiniteParityAutomaton(
            [q for q in self.states if q in keep], self.initial, self.alphabet,
            {q: self.delta[q] for q in keep}, {q: self.priority[q] for q in keep}, self.name)

    def trim(self) -> "FiniteParityAutomaton":
        """Drop states from which no accepting lasso starts (language preserving
        for the nondeterministic reading)."""
        r = self.reachable()
        live = _live_states(r)
        states = [q for q in r.states if q in live]
        delta = {q: {a: ts & live for a, ts in r.delta[q].items()} for q in states}
        init = [q for q in r.initial if q in live]
        return FiniteParityAutomaton(states, init, r.alphabet, delta,
                                     {q: r.priority[q] for q in states}, r.name)

    def complement(self) -> "FiniteParityAutomaton":
        return complement_dpa(self)

    def renumbered(self) -> "FiniteParityAutomaton":
        """Same automaton with states 0..n-1 in BFS order from the initial states."""
        order = self.reachable()
        g = explore(order.initial, lambda q: ((a, t) for a, ts in sorted(order.delta[q].items(), key=lambda kv: repr(kv[0]))
                                                for t in sorted(ts, key=repr)))
        idx = {q: i for i, q in enumerate(g.nodes)}
        delta = {idx[q]: {a: frozenset(idx[t] for t in ts) for a, ts in order.delta[q].items()} for q in g.nodes}
        return FiniteParityAutomaton(range(len(g.nodes)), [idx[q] for q in order.initial], order.alphabet,
                                     delta, {idx[q]: order.priority[q] for q in g.nodes}, self.name)


def _live_states(A: FiniteParityAutomaton) -> set:
    """States from which some accepting cycle is reachable."""
    from .graphs import sccs

    states = list(A.states)
    idx = {q: i for i, q in enumerate(states)}
    n = len(states)
    adj = [sorted({idx[t] for ts in A.delta[q].values() for t in ts}) for q in states]
    prio = [A.priority[q] for q in states]
    good = [False] * n
    for p in {x for x in prio if x % 2 == 0}:
        allowed = [x <= p for x in prio]
        for comp in sccs(n, adj, allowed):
            if any(prio[v] == p for v in comp) and (len(comp) > 1 or comp[0] in adj[comp[0]]):
                for v in comp:
                    good[v] = True
    radj: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for u in adj[v]:
            radj[u].append(v)
    stack = [v for v in range(n) if good[v]]
    live = set(stack)
    while stack:
        v = stack.pop()
        for u in radj[v]:
            if u not in live:
                live.add(u)
                stack.append(u)
    return {states[v] for v in live}


def complement_dpa(D: FiniteParityAutomaton) -> FiniteParityAutomaton:
    if not (D.is_deterministic and D.is_complete):
        raise ValueError("complementation by priority shift needs a deterministic complete automaton")
    return FiniteParityAutomaton(D.states, D.initial, D.alphabet, D.delta,
                                 {q: p + 1 for q, p in D.priority.items()}, f"co-{D.name}")


# ---------------------------------------------------------------------------
# Text formats


def _sym(a) -> str:
    return a if isinstance(a, str) else str(a).replace(" ", "")


def to_lines(A: FiniteParityAutomaton) -> str:
    """``state ID PRIORITY [initial]`` and ``trans SRC SYMBOL DST`` lines."""
    R = A.renumbered() if not all(isinstance(q, int) for q in A.states) else A
    out = [f"fpa {R.name}", "alphabet " + " ".join(sorted(_sym(a) for a in R.alphabet))]
    init = set(R.initial)
    for q in R.states:
        out.append(f"state {q} {R.priority[q]}" + (" initial" if q in init else ""))
    for q in R.states:
        for a, ts in sorted(R.delta[q].items(), key=lambda kv: _sym(kv[0])):
            for t in sorted(ts):
                out.append(f"trans {q} {_sym(a)} {t}")
    return "\n".join(out) + "\n"


def from_lines(text: str) -> FiniteParityAutomaton:
    name, alphabet, states, init, prio, delta = "P", [], [], [], {}, {}
    for raw in text.splitlines():
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        head = parts[0]
        if head == "fpa":
            name = parts[1]
        elif head == "alphabet":
            alphabet = parts[1:]
        elif head == "state":
            q = int(parts[1])
            states.append(q)
            prio[q] = int(parts[2])
            if len(parts) > 3 and parts[3] == "initial":
                init.append(q)
        elif head == "trans":
            q, a, t = int(parts[1]), parts[2], int(parts[3])
            delta.setdefault(q, {}).setdefault(a, set()).add(t)
        else:
            raise ValueError(f"unknown line {raw!r}")
    return FiniteParityAutomaton(states, init, alphabet, delta, prio, name)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(A: FiniteParityAutomaton) -> str:
    R = A.renumbered()
    lines = [f'digraph "{_dot_escape(R.name)}" {{', "  rankdir=LR;", '  __init [shape=point];']
    for q in R.states:
        lines.append(f'  {q} [label="{q}\\np={R.priority[q]}", shape={"doublecircle" if R.priority[q] % 2 == 0 else "circle"}];')
    for q in R.initial:
        lines.append(f"  __init -> {q};")
    for q in R.states:
        for a, ts in sorted(R.delta[q].items(), key=lambda kv: _sym(kv[0])):
            for t in sorted(ts):
                lines.append(f'  {q} -> {t} [label="{_dot_escape(_sym(a))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_hoa(A: FiniteParityAutomaton) -> str:
    """Hanoi Omega-Automata text with state-based ``parity max even``.

    Symbols are encoded in binary over ``ceil(log2 |alphabet|)`` atomic
    propositions ``a0, a1, ...``; the symbol order is listed in a comment.
    """
    R = A.renumbered()
    syms = sorted(R.alphabet, key=_sym)
    nbits = max(1, (len(syms) - 1).bit_length())
    top = max(R.priority.values(), default=0)
    lines = ["HOA: v1", f'name: "{_dot_escape(R.name)}"', f"States: {len(R.states)}"]
    for q in R.initial:
        lines.append(f"Start: {q}")
    lines.append(f"AP: {nbits} " + " ".join(f'"a{i}"' for i in range(nbits)))
    lines.append(f"acc-name: parity max even {top + 1}")
    lines.append(f"Acceptance: {top + 1} {_hoa_parity(top)}")
    props = ["state-acc"]
    if R.is_deterministic:
        props.append("deterministic")
    if R.is_complete:
        props.append("complete")
    lines.append("properties: " + " ".join(props))
    lines.append("/* symbols: " + ", ".join(f"{i}={_sym(a)}" for i, a in enumerate(syms)).replace("*/", "* /") + " */")
    lines.append("--BODY--")
    code = {a: i for i, a in enumerate(syms)}
    for q in R.states:
        lines.append(f"State: {q} {{{R.priority[q]}}}")
        for a, ts in sorted(R.delta[q].items(), key=lambda kv: code[kv[0]]):
            c = code[a]
            guard = "&".join(("" if (c >> i) & 1 else "!") + str(i) for i in range(nbits))
            for t in sorted(ts):
                lines.append(f"  [{guard}] {t}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def _hoa_parity(top: int) -> str:
    """Max-even parity over sets 0..top, nested as HOA expects."""
    expr = "Inf(0)" if top >= 0 else "t"
    for p in range(1, top + 1):
        if p % 2 == 0:
            expr = f"Inf({p}) | ({expr})"
        else:
            expr = f"Fin({p}) & ({expr})"
    return expr


def from_pairs(states: Iterable, initial, alphabet: Iterable, edges: Iterable[tuple], priority: Mapping,
               name: str = "P") -> FiniteParityAutomaton:
    """Convenience builder from ``(src, symbol, dst)`` triples."""
    delta: dict = {}
    for s, a, t in edges:
        delta.setdefault(s, {}).setdefault(a, set()).add(t)
    init = list(initial) if isinstance(initial, (list, set, frozenset)) else [initial]
    return FiniteParityAutomaton(states, init, alphabet, delta, priority, name)


def bisimulation_quotient(A: FiniteParityAutomaton) -> FiniteParityAutomaton:
    """Merge bisimilar states (same priority, matching successor blocks).

    Language preserving for the nondeterministic reading, and for
    deterministic input the result stays deterministic.
    """
    A = A.reachable()
    block = {q: A.priority[q] for q in A.states}
    n_blocks = len(set(block.values()))
    while True:
        sig = {q: (block[q], frozenset((a, frozenset(block[t] for t in ts)) for a, ts in A.delta[q].items()))
               for q in A.states}
        ids: dict = {}
        new = {q: ids.setdefault(s, len(ids)) for q, s in sig.items()}
        block = new
        if len(ids) == n_blocks:
            break
        n_blocks = len(ids)
    delta: dict = {}
    for q in A.states:
        row = delta.setdefault(block[q], {})
        for a, ts in A.delta[q].items():
            row.setdefault(a, set()).update(block[t] for t in ts)
    return FiniteParityAutomaton(sorted(set(block.values())), sorted({block[q] for q in A.initial}),
                                 A.alphabet, delta, {block[q]: A.priority[q] for q in A.states}, A.name)

"""Finite parity games (max-even wins for Eve) solved with Zielonka's algorithm."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

EVE, ADAM = 0, 1

if os.environ.get("REGSYNTH_PURE"):
    from ._attractor_py import attractor as _attractor
    KERNEL = "python"
else:
    try:
        from ._attractor import attractor as _attractor
        KERNEL = "compiled"
    except ImportError:  # extension not built
        from ._attractor_py import attractor as _attractor
        KERNEL = "python"


@dataclass(eq=False)
class ParityArena:
    """Vertices ``0..n-1`` with owner and priority; edges ``(src, label, dst)``.

    ``names[v]`` keeps the domain object behind each vertex. Construct through
    ``ParityArena.build`` which closes dead ends.
    """

    owner: list[int]
    priority: list[int]
    edges: list[tuple[int, Hashable, int]]
    initial: int
    names: list = field(default_factory=list)

    def __post_init__(self):
        n = len(self.owner)
        if len(self.priority) != n:
            raise ValueError("owner and priority lists differ in length")
        if not self.names:
            self.names = list(range(n))
        out = [0] * n
        for s, _, t in self.edges:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"edge {s}->{t} leaves the arena")
            out[s] += 1
        if any(c == 0 for c in out):
            raise ValueError("every vertex needs an outgoing edge")
        self._csr()

    def _csr(self):
        n, m = len(self.owner), len(self.edges)
        src = np.fromiter((e[0] for e in self.edges), dtype=np.int64, count=m)
        dst = np.fromiter((e[2] for e in self.edges), dtype=np.int64, count=m)
        self.edge_src, self.edge_dst = src, dst
        order = np.argsort(src, kind="stable")
        self.succ_edge = order.astype(np.int64)
        self.succ_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=self.succ_ptr[1:])
        order = np.argsort(dst, kind="stable")
        self.pred_edge = order.astype(np.int64)
        self.pred_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(dst, minlength=n), out=self.pred_ptr[1:])
        self.owner_arr = np.asarray(self.owner, dtype=np.int8)
        self.prio_arr = np.asarray(self.priority, dtype=np.int64)

    @property
    def n(self) -> int:
        return len(self.owner)

    def out_edges(self, v: int) -> list[int]:
        return self.succ_edge[self.succ_ptr[v]:self.succ_ptr[v + 1]].tolist()

    @classmethod
    def build(cls, vertices: Sequence[tuple[Hashable, int, int]], edges: Iterable[tuple[Hashable, Hashable, Hashable]],
              initial: Hashable) -> "ParityArena":
        """``vertices``: (name, owner, priority); ``edges``: (src name, label, dst name).
        Dead ends are sent to a sink that the stuck player loses."""
        names = [v[0] for v in vertices]
        index = {nm: i for i, nm in enumerate(names)}
        if len(index) != len(names):
            raise ValueError("duplicate vertex names")
        owner = [v[1] for v in vertices]
        prio = [v[2] for v in vertices]
        es = [(index[s], lab, index[t]) for s, lab, t in edges]
        has_out = set(s for s, _, _ in es)
        sinks: dict[int, int] = {}
        for v in range(len(names)):
            if v not in has_out:
                who = owner[v]
                if who not in sinks:
                    sinks[who] = len(names)
                    names.append(("__lose", who))
                    owner.append(who)
                    prio.append(1 if who == EVE else 0)
                es.append((v, ("__stuck",), sinks[who]))
        for who, s in sinks.items():
            es.append((s, ("__stuck",), s))
        return cls(owner, prio, es, index[initial], names)

    def shifted(self, k: int) -> "ParityArena":
        return ParityArena(self.owner, [p + k for p in self.priority], self.edges, self.initial, self.names)

    def to_text(self) -> str:
        lines = [f"arena initial {self.initial}"]
        for v in range(self.n):
            lines.append(f"vertex {v} {'eve' if self.owner[v] == EVE else 'adam'} {self.priority[v]}")
        for i, (s, _, t) in enumerate(self.edges):
            lines.append(f"edge {s} {i} {t}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph arena {", "  __init [shape=point];", f"  __init -> {self.initial};"]
        for v in range(self.n):
            shape = "box" if self.owner[v] == ADAM else "ellipse"
            name = str(self.names[v]).replace('"', "'")
            lines.append(f'  {v} [shape={shape}, label="{name}\\np={self.priority[v]}"];')
        for i, (s, lab, t) in enumerate(self.edges):
            lines.append(f'  {s} -> {t} [label="{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def arena_from_text(text: str) -> ParityArena:
    owner, prio, edges, initial = {}, {}, [], 0
    for raw in text.splitlines():
        p = raw.split()
        if not p:
            continue
        if p[0] == "arena":
            initial = int(p[2])
        elif p[0] == "vertex":
            owner[int(p[1])] = EVE if p[2] == "eve" else ADAM
            prio[int(p[1])] = int(p[3])
        elif p[0] == "edge":
            edges.append((int(p[1]), int(p[2]), int(p[3])))
        else:
            raise ValueError(f"unknown line {raw!r}")
    n = len(owner)
    edges.sort(key=lambda e: e[1])
    return ParityArena([owner[v] for v in range(n)], [prio[v] for v in range(n)],
                       [(s, i, t) for s, i, t in edges], initial)


@dataclass
class Solution:
    win_eve: frozenset
    win_adam: frozenset
    strategy_eve: dict  # vertex -> edge index
    strategy_adam: dict

    def winner(self, v: int) -> int:
        return EVE if v in self.win_eve else ADAM


def attractor(arena: ParityArena, in_game: np.ndarray, target: np.ndarray, player: int):
    return _attractor(arena.owner_arr, arena.edge_src, arena.edge_dst, arena.succ_ptr, arena.succ_edge,
                      arena.pred_ptr, arena.pred_edge, in_game, target, player)


def solve(arena: ParityArena) -> Solution:
    """Winning regions and memoryless winning strategies for both players."""
    n = arena.n
    strat = [np.full(n, -1, dtype=np.int64), np.full(n, -1, dtype=np.int64)]
    full = np.ones(n, dtype=np.uint8)
    win = _zielonka(arena, full, strat)
    w0 = frozenset(np.flatnonzero(win[0]).tolist())
    w1 = frozenset(np.flatnonzero(win[1]).tolist())
    s0 = {v: int(strat[0][v]) for v in w0 if arena.owner[v] == EVE}
    s1 = {v: int(strat[1][v]) for v in w1 if arena.owner[v] == ADAM}
    return Solution(w0, w1, s0, s1)


def _any_edge_inside(arena: ParityArena, v: int, game: np.ndarray) -> int:
    for k in range(arena.succ_ptr[v], arena.succ_ptr[v + 1]):
        e = arena.succ_edge[k]
        if game[arena.edge_dst[e]]:
            return int(e)
    raise AssertionError("subgame vertex without successor in the subgame")


def _zielonka(arena: ParityArena, game: np.ndarray, strat: list[np.ndarray]) -> list[np.ndarray]:
    """Returns winning masks [eve, adam] of the subgame; fills ``strat``
    for vertices of each region owned by its winner."""
    n = arena.n
    empty = np.zeros(n, dtype=np.uint8)
    if not game.any():
        return [empty, empty.copy()]
    prios = arena.prio_arr
    p = int(prios[game.astype(bool)].max())
    i = p % 2
    top = (game.astype(bool) & (prios == p)).astype(np.uint8)
    A, sA = attractor(arena, game, top, i)
    sub = game & (1 - A)
    W = _zielonka(arena, sub, strat)
    if not W[1 - i].any():
        # player i wins the whole subgame
        win_i = game.copy()
        own = arena.owner_arr
        for v in np.flatnonzero(A).tolist():
            if own[v] != i:
                continue
            if top[v]:
                strat[i][v] = _any_edge_inside(arena, v, game)
            else:
                strat[i][v] = sA[v]
        out = [None, None]
        out[i] = win_i
        out[1 - i] = empty
        return out
    B, sB = attractor(arena, game, W[1 - i], 1 - i)
    own = arena.owner_arr
    for v in np.flatnonzero(B & (1 - W[1 - i])).tolist():
        if own[v] == 1 - i:
            strat[1 - i][v] = sB[v]
    W2 = _zielonka(arena, game & (1 - B), strat)
    out = [None, None]
    out[i] = W2[i]
    out[1 - i] = W2[1 - i] | B
    return out


def play_lasso(arena: ParityArena, start: int, choose_eve, choose_adam, limit: int = 100000):
    """Play from ``start`` with two memoryless choice functions (vertex -> edge
    index). Returns (stem vertices, cycle vertices)."""
    seen: dict[int, int] = {}
    path = []
    v = start
    while v not in seen:
        if len(path) > limit:
            raise RuntimeError("play did not close")
        seen[v] = len(path)
        path.append(v)
        e = choose_eve(v) if arena.owner[v] == EVE else choose_adam(v)
        s, _, t = arena.edges[e]
        assert s == v
        v = t
    k = seen[v]
    return path[:k], path[k:]

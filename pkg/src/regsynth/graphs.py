"""Explicit finite graphs: exploration, SCCs and max-even accepting cycles.

Every membership and emptiness question in the package reduces to finding a
reachable cycle whose highest priority is even, which is what
``accepting_lasso`` does.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable


@dataclass
class ExplicitGraph:
    nodes: list
    index: dict
    succ: list[list[tuple[Hashable, int]]]  # (edge label, target index)
    initial: list[int]


def explore(initial: Iterable[Hashable], successors: Callable[[Hashable], Iterable[tuple[Hashable, Hashable]]],
            limit: int | None = None) -> ExplicitGraph:
    """Breadth-first materialisation of the part reachable from ``initial``."""
    nodes: list = []
    index: dict = {}
    succ: list = []
    init_ids = []
    queue: deque = deque()
    for v in initial:
        if v not in index:
            index[v] = len(nodes)
            nodes.append(v)
            succ.append(None)
            queue.append(v)
        init_ids.append(index[v])
    while queue:
        v = queue.popleft()
        row = []
        for label, u in successors(v):
            j = index.get(u)
            if j is None:
                j = index[u] = len(nodes)
                nodes.append(u)
                succ.append(None)
                queue.append(u)
                if limit is not None and len(nodes) > limit:
                    raise GraphTooLarge(f"more than {limit} nodes")
            row.append((label, j))
        succ[index[v]] = row
    return ExplicitGraph(nodes, index, succ, init_ids)


class GraphTooLarge(RuntimeError):
    pass


def sccs(n: int, adj: list[list[int]], allowed: list[bool] | None = None) -> list[list[int]]:
    """Tarjan's algorithm, iterative. ``adj[v]`` lists target indices."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1 or (allowed is not None and not allowed[root]):
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            nbrs = adj[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                u = nbrs[i]
                if allowed is not None and not allowed[u]:
                    continue
                if index[u] == -1:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, 0))
                elif on_stack[u]:
                    low[v] = min(low[v], index[u])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        u = stack.pop()
                        on_stack[u] = False
                        comp.append(u)
                        if u == v:
                            break
                    out.append(comp)
    return out


def _bfs_path(succ, sources: Iterable[int], goal: Callable[[int], bool], allowed=None):
    """Shortest edge path from any source to a node satisfying ``goal``.
    Returns (start, [(label, node), ...]) or None."""
    parent: dict[int, tuple[int, Hashable] | None] = {}
    q: deque = deque()
    for s in sources:
        if s not in parent and (allowed is None or allowed[s]):
            parent[s] = None
            q.append(s)
    while q:
        v = q.popleft()
        if goal(v):
            path = []
            while parent[v] is not None:
                u, lab = parent[v]
                path.append((lab, v))
                v = u
            path.reverse()
            return v, path
        for lab, u in succ[v]:
            if u not in parent and (allowed is None or allowed[u]):
                parent[u] = (v, lab)
                q.append(u)
    return None


@dataclass
class LassoPath:
    """A stem from an initial node to ``anchor`` and a cycle back to it.

    Both are lists of ``(edge label, node reached)``.
    """
    start: int
    stem: list
    anchor: int
    cycle: list


def accepting_lasso(g: ExplicitGraph, priority: Callable[[int], int], want_even: bool = True) -> LassoPath | None:
    """Find a reachable cycle whose maximal priority is even (odd with
    ``want_even=False``)."""
    n = len(g.nodes)
    if n == 0:
        return None
    prio = [priority(v) for v in range(n)]
    adj = [[u for _, u in row] for row in g.succ]
    parity = 0 if want_even else 1
    for p in sorted({x for x in prio if x % 2 == parity}, reverse=True):
        allowed = [x <= p for x in prio]
        for comp in sccs(n, adj, allowed):
            members = set(comp)
            tops = [v for v in comp if prio[v] == p]
            if not tops:
                continue
            if len(comp) == 1 and comp[0] not in adj[comp[0]]:
                continue
            anchor = min(tops)
            inside = [v in members for v in range(n)]
            # cycle: one step out of anchor inside the component, then back
            for lab, u in g.succ[anchor]:
                if not inside[u]:
                    continue
                if u == anchor:
                    cyc = [(lab, anchor)]
                    break
                back = _bfs_path(g.succ, [u], lambda v: v == anchor, inside)
                if back is not None:
                    cyc = [(lab, u)] + back[1]
                    break
            else:  # pragma: no cover - SCC guarantees a return path
                continue
            stem = _bfs_path(g.succ, g.initial, lambda v: v == anchor)
            assert stem is not None
            return LassoPath(stem[0], stem[1], anchor, cyc)
    return None


def reachable(g_succ: Callable[[Hashable], Iterable[Hashable]], initial: Iterable[Hashable]) -> set:
    seen = set(initial)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for u in g_succ(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen

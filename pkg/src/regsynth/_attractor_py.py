"""Pure-Python attractor kernel (fallback for the compiled extension)."""

from __future__ import annotations

import numpy as np


def attractor(owner, edge_src, edge_dst, succ_ptr, succ_edge, pred_ptr, pred_edge,
              in_game, target, player):
    """Attractor of ``target`` for ``player`` inside the subgame ``in_game``.

    Returns ``(attr, strategy)``: ``attr`` is a uint8 mask and ``strategy[v]``
    is the edge chosen by ``player`` at ``v`` when ``v`` joined through its own
    choice, else -1.
    """
    owner_l = owner.tolist()
    src_l = edge_src.tolist()
    dst_l = edge_dst.tolist()
    sp = succ_ptr.tolist()
    se = succ_edge.tolist()
    pp = pred_ptr.tolist()
    pe = pred_edge.tolist()
    game = in_game.tolist()
    n = len(owner_l)
    attr = [0] * n
    strat = [-1] * n
    count = [0] * n
    for v in range(n):
        if game[v] and owner_l[v] != player:
            c = 0
            for k in range(sp[v], sp[v + 1]):
                if game[dst_l[se[k]]]:
                    c += 1
            count[v] = c
    queue = []
    for v, t in enumerate(target.tolist()):
        if t and game[v]:
            attr[v] = 1
            queue.append(v)
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for k in range(pp[u], pp[u + 1]):
            e = pe[k]
            v = src_l[e]
            if not game[v] or attr[v]:
                continue
            if owner_l[v] == player:
                attr[v] = 1
                strat[v] = e
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr[v] = 1
                    queue.append(v)
    return np.array(attr, dtype=np.uint8), np.array(strat, dtype=np.int64)

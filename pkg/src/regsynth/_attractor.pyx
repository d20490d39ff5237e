# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled attractor kernel; same contract as ``_attractor_py.attractor``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def attractor(const signed char[::1] owner, const long long[::1] edge_src, const long long[::1] edge_dst,
              const long long[::1] succ_ptr, const long long[::1] succ_edge,
              const long long[::1] pred_ptr, const long long[::1] pred_edge,
              const unsigned char[::1] in_game, const unsigned char[::1] target, int player):
    cdef Py_ssize_t n = owner.shape[0]
    cdef Py_ssize_t v, u, k, e, head = 0, tail = 0
    cdef long long c
    attr_arr = np.zeros(n, dtype=np.uint8)
    strat_arr = np.full(n, -1, dtype=np.int64)
    count_arr = np.zeros(n, dtype=np.int64)
    queue_arr = np.empty(n, dtype=np.int64)
    cdef unsigned char[::1] attr = attr_arr
    cdef long long[::1] strat = strat_arr
    cdef long long[::1] count = count_arr
    cdef long long[::1] queue = queue_arr
    for v in range(n):
        if in_game[v] and owner[v] != player:
            c = 0
            for k in range(succ_ptr[v], succ_ptr[v + 1]):
                if in_game[edge_dst[succ_edge[k]]]:
                    c += 1
            count[v] = c
    for v in range(n):
        if target[v] and in_game[v]:
            attr[v] = 1
            queue[tail] = v
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(pred_ptr[u], pred_ptr[u + 1]):
            e = pred_edge[k]
            v = edge_src[e]
            if not in_game[v] or attr[v]:
                continue
            if owner[v] == player:
                attr[v] = 1
                strat[v] = e
                queue[tail] = v
                tail += 1
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr[v] = 1
                    queue[tail] = v
                    tail += 1
    return attr_arr, strat_arr

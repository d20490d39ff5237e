"""Compare the compiled and pure-Python attractor kernels.

    python3 benchmarks/bench_attractor.py [--sizes 1000 10000 100000] [--repeat 3]

Both kernels run on the same random arenas; their results are compared
before timings are reported.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from regsynth import _attractor_py
from regsynth.games import ParityArena

try:
    from regsynth import _attractor as _compiled
except ImportError:  # extension not built
    _compiled = None


def random_arena(n: int, out_degree: int, seed: int) -> ParityArena:
    rng = random.Random(seed)
    owner = [rng.randrange(2) for _ in range(n)]
    prio = [rng.randrange(4) for _ in range(n)]
    edges = [(v, None, rng.randrange(n)) for v in range(n) for _ in range(rng.randint(1, out_degree))]
    return ParityArena(owner, prio, edges, 0)


def run(kernel, arena: ParityArena, target: np.ndarray, player: int):
    game = np.ones(arena.n, dtype=np.uint8)
    return kernel.attractor(arena.owner_arr, arena.edge_src, arena.edge_dst, arena.succ_ptr, arena.succ_edge,
                            arena.pred_ptr, arena.pred_edge, game, target, player)


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    print(f"{'vertices':>10} {'edges':>10} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for n in args.sizes:
        arena = random_arena(n, args.degree, args.seed)
        rng = np.random.default_rng(args.seed)
        target = (rng.random(n) < 0.05).astype(np.uint8)
        ref = run(_attractor_py, arena, target, 0)
        t_py = best_of(lambda: run(_attractor_py, arena, target, 0), args.repeat)
        if _compiled is None:
            print(f"{n:>10} {len(arena.edges):>10} {t_py:>10.4f} {'n/a':>11} {'-':>8}")
            continue
        got = run(_compiled, arena, target, 0)
        assert np.array_equal(ref[0], got[0]), "kernels disagree on the attractor"
        t_c = best_of(lambda: run(_compiled, arena, target, 0), args.repeat)
        print(f"{n:>10} {len(arena.edges):>10} {t_py:>10.4f} {t_c:>11.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
